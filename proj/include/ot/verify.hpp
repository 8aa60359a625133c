#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ot::verify {

/// Instance batches run either one after another or spread over OpenMP
/// threads. Each instance draws from its own generator seeded with
/// seed + index, so both modes produce identical reports.
enum class Execution { Serial, Parallel };

struct MkdConfig {
    std::size_t instances = 200;
    std::size_t min_n = 2;
    std::size_t max_n = 8;
    std::uint64_t seed = 7;
    std::size_t brute_force_max_n = 7;
    double tol = 1e-8;
};

struct MkdInstance {
    std::size_t n = 0;
    double monge = 0.0;
    double kantorovich = 0.0;
    double dual = 0.0;
    double gap_mk = 0.0;
    double gap_kd = 0.0;
    bool brute_force_checked = false;
    bool brute_force_agrees = true;

    friend bool operator==(const MkdInstance&, const MkdInstance&) = default;
};

struct MkdReport {
    MkdConfig config;
    std::vector<MkdInstance> instances;
    double max_gap_mk = 0.0;
    double max_gap_kd = 0.0;
    std::size_t brute_force_checked = 0;
    std::size_t brute_force_mismatches = 0;
    bool pass = false;
};

/// Random uniform[0,1) costs: Monge, Kantorovich and dual values, and the
/// Hungarian solution against enumeration for small n.
MkdReport run_mkd(const MkdConfig& config, Execution execution = Execution::Serial);

struct SchurHornConfig {
    std::size_t instances = 100;
    std::size_t max_n = 12;
    std::uint64_t seed = 7;
    double slack_tol = 1e-10;     // majorization gaps of diag(A) against spectrum(A)
    double spectrum_tol = 1e-8;   // roundtrip spectrum error
    double diagonal_tol = 1e-9;   // roundtrip diagonal error
};

struct SchurHornInstance {
    std::size_t n = 0;
    double min_slack = 0.0;          // smallest prefix gap of the Schur certificate
    bool witness_ok = false;         // |Q_ij|^2 doubly stochastic and maps spectrum to diagonal
    double spectrum_error = 0.0;     // horn_construct roundtrip
    double diagonal_error = 0.0;

    friend bool operator==(const SchurHornInstance&, const SchurHornInstance&) = default;
};

struct SchurHornReport {
    SchurHornConfig config;
    std::vector<SchurHornInstance> instances;
    double min_slack = 0.0;
    double max_spectrum_error = 0.0;
    double max_diagonal_error = 0.0;
    bool pass = false;
};

/// Random Hermitian matrices through schur_projection, and random pairs
/// x = P lambda through horn_construct and back.
SchurHornReport run_schur_horn(const SchurHornConfig& config, Execution execution = Execution::Serial);

struct BirkhoffConfig {
    std::size_t instances = 100;
    std::size_t max_n = 10;
    std::uint64_t seed = 7;
    double tol = 1e-9;
};

struct BirkhoffInstance {
    std::size_t n = 0;
    std::size_t terms = 0;
    double resum_error = 0.0;
    std::size_t chain_length = 0;
    double chain_error = 0.0;  // |P y - x|_inf

    friend bool operator==(const BirkhoffInstance&, const BirkhoffInstance&) = default;
};

struct BirkhoffReport {
    BirkhoffConfig config;
    std::vector<BirkhoffInstance> instances;
    double max_resum_error = 0.0;
    double max_chain_error = 0.0;
    bool term_bound_ok = false;
    bool chain_bound_ok = false;
    bool pass = false;
};

/// Birkhoff decompositions of random doubly stochastic matrices and
/// T-transform chains for random majorization pairs.
BirkhoffReport run_birkhoff(const BirkhoffConfig& config, Execution execution = Execution::Serial);

struct FlowLimitConfig {
    std::size_t instances = 50;
    std::size_t min_n = 3;
    std::size_t max_n = 6;
    std::uint64_t seed = 7;
    double step = 0.02;
    double t_end = 500.0;
    double limit_tol = 1e-6;
    double drift_tol = 1e-10;
    double derivative_tol = 1e-3;
    double gradient_tol = 1e-6;
};

struct FlowLimitInstance {
    std::size_t n = 0;
    int direction = 0;
    bool converged = false;
    double t_final = 0.0;
    double limit_error = 0.0;       // max |L(T) - i diag(similarly ordered spectrum)|
    double max_drift = 0.0;         // spectrum drift over the trajectory
    double derivative_error = 0.0;  // relative, finite difference of Tr(LN) vs direction |[L,N]|^2
    double gradient_error = 0.0;    // normal-metric gradient check

    friend bool operator==(const FlowLimitInstance&, const FlowLimitInstance&) = default;
};

struct FlowLimitReport {
    FlowLimitConfig config;
    std::vector<FlowLimitInstance> instances;
    std::size_t aligned_limits = 0;
    double max_limit_error = 0.0;
    double max_drift = 0.0;
    double max_derivative_error = 0.0;
    double max_gradient_error = 0.0;
    bool pass = false;
};

/// Double-bracket flow from random generic starts with align_direction's sign.
FlowLimitReport run_flow_limit(const FlowLimitConfig& config, Execution execution = Execution::Serial);

}  // namespace ot::verify
