#include "io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ot::io {

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InputError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
}

std::string fnv1a_digest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::uint64_t h = 14695981039346656037ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

template <typename F>
auto guarded(const char* what, F f) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw InputError(std::string("invalid ") + what + ": " + e.what());
    }
}

std::vector<RealVector> rows_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw InputError("expected a nonempty array of rows");
    std::vector<RealVector> rows;
    for (const auto& r : j) rows.push_back(r.get<RealVector>());
    for (const auto& r : rows)
        if (r.size() != rows.front().size() || r.empty()) throw InputError("rows have unequal or zero length");
    return rows;
}

json rows_to_json(const RealMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

json to_json(const RealMatrix& m) { return rows_to_json(m); }

RealMatrix real_matrix_from_json(const json& j) {
    return guarded("matrix", [&] {
        const json& body = j.is_object() ? (j.contains("re") ? j.at("re") : j.at("matrix")) : j;
        const auto rows = rows_from_json(body);
        RealMatrix m(rows.size(), rows.front().size());
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t k = 0; k < m.cols(); ++k) m(i, k) = rows[i][k];
        return m;
    });
}

json to_json(const ComplexMatrix& m) {
    RealMatrix re(m.rows(), m.cols()), im(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t k = 0; k < m.cols(); ++k) {
            re(i, k) = m(i, k).real();
            im(i, k) = m(i, k).imag();
        }
    return json{{"n", m.rows()}, {"re", rows_to_json(re)}, {"im", rows_to_json(im)}};
}

ComplexMatrix complex_matrix_from_json(const json& j) {
    return guarded("complex matrix", [&] {
        const RealMatrix re = real_matrix_from_json(j.at("re"));
        RealMatrix im(re.rows(), re.cols());
        if (j.contains("im")) im = real_matrix_from_json(j.at("im"));
        if (im.rows() != re.rows() || im.cols() != re.cols()) throw InputError("re and im shapes differ");
        if (j.contains("n") && j.at("n").get<std::size_t>() != re.rows()) throw InputError("n does not match re");
        ComplexMatrix m(re.rows(), re.cols());
        for (std::size_t i = 0; i < re.rows(); ++i)
            for (std::size_t k = 0; k < re.cols(); ++k) m(i, k) = cplx(re(i, k), im(i, k));
        return m;
    });
}

RealVector vector_from_json(const json& j) {
    return guarded("vector", [&] { return j.get<RealVector>(); });
}

json to_json(const StepFunction& f) { return json{{"breakpoints", f.breakpoints()}, {"values", f.values()}}; }

StepFunction step_function_from_json(const json& j) {
    return guarded("step function", [&] {
        RealVector values = j.at("values").get<RealVector>();
        if (values.empty()) throw InputError("step function without values");
        if (!j.contains("breakpoints")) return StepFunction::uniform(std::move(values));
        return StepFunction(j.at("breakpoints").get<RealVector>(), std::move(values));
    });
}

json to_json(const GridFunction& g) {
    json rows = json::array();
    for (std::size_t i = 0; i < g.nz(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < g.ntheta(); ++k) row.push_back(g(i, k));
        rows.push_back(std::move(row));
    }
    return json{{"nz", g.nz()}, {"ntheta", g.ntheta()}, {"values", std::move(rows)}};
}

GridFunction grid_from_json(const json& j) {
    return guarded("grid", [&] {
        const auto rows = rows_from_json(j.at("values"));
        const std::size_t nz = j.at("nz").get<std::size_t>(), nt = j.at("ntheta").get<std::size_t>();
        if (rows.size() != nz || rows.front().size() != nt) throw InputError("grid values do not match nz x ntheta");
        RealVector flat;
        for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
        return GridFunction(nz, nt, std::move(flat));
    });
}

json to_json(const MajorizationCertificate& c) {
    return json{{"holds", c.holds}, {"gaps", c.gaps}, {"failing_prefix", c.failing_prefix}};
}

json to_json(const StepMajorizationCertificate& c) {
    return json{{"holds", c.holds}, {"abscissae", c.abscissae}, {"gaps", c.gaps}, {"min_gap", c.min_gap}};
}

json to_json(const PermutationMap& p) { return json(p.mapping()); }

json to_json(const verify::MkdReport& r) {
    json inst = json::array();
    for (const auto& x : r.instances)
        inst.push_back({{"n", x.n},
                        {"monge", x.monge},
                        {"kantorovich", x.kantorovich},
                        {"dual", x.dual},
                        {"gap_mk", x.gap_mk},
                        {"gap_kd", x.gap_kd},
                        {"brute_force_checked", x.brute_force_checked},
                        {"brute_force_agrees", x.brute_force_agrees}});
    return json{{"config",
                 {{"instances", r.config.instances},
                  {"min_n", r.config.min_n},
                  {"max_n", r.config.max_n},
                  {"seed", r.config.seed},
                  {"brute_force_max_n", r.config.brute_force_max_n},
                  {"tol", r.config.tol}}},
                {"max_gap_mk", r.max_gap_mk},
                {"max_gap_kd", r.max_gap_kd},
                {"brute_force_checked", r.brute_force_checked},
                {"brute_force_mismatches", r.brute_force_mismatches},
                {"pass", r.pass},
                {"instances", std::move(inst)}};
}

json to_json(const verify::SchurHornReport& r) {
    json inst = json::array();
    for (const auto& x : r.instances)
        inst.push_back({{"n", x.n},
                        {"min_slack", x.min_slack},
                        {"witness_ok", x.witness_ok},
                        {"spectrum_error", x.spectrum_error},
                        {"diagonal_error", x.diagonal_error}});
    return json{{"config",
                 {{"instances", r.config.instances},
                  {"max_n", r.config.max_n},
                  {"seed", r.config.seed},
                  {"slack_tol", r.config.slack_tol},
                  {"spectrum_tol", r.config.spectrum_tol},
                  {"diagonal_tol", r.config.diagonal_tol}}},
                {"min_slack", r.min_slack},
                {"max_spectrum_error", r.max_spectrum_error},
                {"max_diagonal_error", r.max_diagonal_error},
                {"pass", r.pass},
                {"instances", std::move(inst)}};
}

json to_json(const verify::BirkhoffReport& r) {
    json inst = json::array();
    for (const auto& x : r.instances)
        inst.push_back({{"n", x.n},
                        {"terms", x.terms},
                        {"resum_error", x.resum_error},
                        {"chain_length", x.chain_length},
                        {"chain_error", x.chain_error}});
    return json{{"config",
                 {{"instances", r.config.instances},
                  {"max_n", r.config.max_n},
                  {"seed", r.config.seed},
                  {"tol", r.config.tol}}},
                {"max_resum_error", r.max_resum_error},
                {"max_chain_error", r.max_chain_error},
                {"term_bound_ok", r.term_bound_ok},
                {"chain_bound_ok", r.chain_bound_ok},
                {"pass", r.pass},
                {"instances", std::move(inst)}};
}

json to_json(const verify::FlowLimitReport& r) {
    json inst = json::array();
    for (const auto& x : r.instances)
        inst.push_back({{"n", x.n},
                        {"direction", x.direction},
                        {"converged", x.converged},
                        {"t_final", x.t_final},
                        {"limit_error", x.limit_error},
                        {"max_drift", x.max_drift},
                        {"derivative_error", x.derivative_error},
                        {"gradient_error", x.gradient_error}});
    return json{{"config",
                 {{"instances", r.config.instances},
                  {"min_n", r.config.min_n},
                  {"max_n", r.config.max_n},
                  {"seed", r.config.seed},
                  {"step", r.config.step},
                  {"t_end", r.config.t_end},
                  {"limit_tol", r.config.limit_tol},
                  {"drift_tol", r.config.drift_tol},
                  {"derivative_tol", r.config.derivative_tol},
                  {"gradient_tol", r.config.gradient_tol}}},
                {"aligned_limits", r.aligned_limits},
                {"max_limit_error", r.max_limit_error},
                {"max_drift", r.max_drift},
                {"max_derivative_error", r.max_derivative_error},
                {"max_gradient_error", r.max_gradient_error},
                {"pass", r.pass},
                {"instances", std::move(inst)}};
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string flow_csv(std::span<const FlowSample> samples) {
    std::ostringstream out;
    out << "t,trace_ln,comm_norm,dist_sq,spec_drift\n";
    for (const auto& s : samples)
        out << format_double(s.t) << ',' << format_double(s.trace_ln) << ',' << format_double(s.comm_norm) << ','
            << format_double(s.dist_sq) << ',' << format_double(s.spec_drift) << '\n';
    return out.str();
}

std::string pde_csv(std::span<const PdeSample> samples) {
    std::ostringstream out;
    out << "t,I1,I2,I3,I4,xtheta_norm,maxgrad\n";
    for (const auto& s : samples) {
        out << format_double(s.t);
        for (double m : s.moments) out << ',' << format_double(m);
        out << ',' << format_double(s.xtheta_norm) << ',' << format_double(s.max_gradient) << '\n';
    }
    return out.str();
}

}  // namespace ot::io
