#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "json.hpp"
#include "ot/annulus.hpp"
#include "ot/bracketflow.hpp"
#include "ot/errors.hpp"
#include "ot/majorization.hpp"
#include "ot/matrix.hpp"
#include "ot/verify.hpp"

namespace ot::io {

using nlohmann::json;

/// Missing file, malformed JSON, or a document of the wrong shape.
class InputError : public Error {
public:
    using Error::Error;
};

json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

/// 64-bit FNV-1a of the file bytes, as 16 hex digits.
std::string fnv1a_digest(const std::filesystem::path& path);

json to_json(const RealMatrix& m);
RealMatrix real_matrix_from_json(const json& j);
/// {"n": n, "re": [[...]], "im": [[...]]}; "im" may be omitted.
json to_json(const ComplexMatrix& m);
ComplexMatrix complex_matrix_from_json(const json& j);

RealVector vector_from_json(const json& j);

/// {"breakpoints": [...], "values": [...]}; breakpoints may be omitted for equal segments.
json to_json(const StepFunction& f);
StepFunction step_function_from_json(const json& j);

/// {"nz": .., "ntheta": .., "values": [[...], ...]} with one inner array per z row.
json to_json(const GridFunction& g);
GridFunction grid_from_json(const json& j);

json to_json(const MajorizationCertificate& c);
json to_json(const StepMajorizationCertificate& c);
json to_json(const PermutationMap& p);

json to_json(const verify::MkdReport& r);
json to_json(const verify::SchurHornReport& r);
json to_json(const verify::BirkhoffReport& r);
json to_json(const verify::FlowLimitReport& r);

/// Header row then one row per sample, floats with 17 significant digits.
std::string flow_csv(std::span<const FlowSample> samples);
std::string pde_csv(std::span<const PdeSample> samples);

/// %.17g
std::string format_double(double v);

}  // namespace ot::io
