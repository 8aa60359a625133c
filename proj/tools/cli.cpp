#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <optional>

#include "CLI11.hpp"
#include "io.hpp"
#include "ot/annulus.hpp"
#include "ot/bracketflow.hpp"
#include "ot/instances.hpp"
#include "ot/schurhorn.hpp"
#include "ot/transport.hpp"
#include "ot/verify.hpp"

namespace ot::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

struct Outcome {
    json report;
    bool pass = true;
};

/// Shared state of one invocation: global flags, and the files read and written.
struct Context {
    fs::path out_dir;
    std::uint64_t seed = 7;
    std::optional<double> tol;
    json inputs = json::array();
    json outputs = json::array();

    double tol_or(double fallback) const { return tol.value_or(fallback); }

    json read(const std::string& path) {
        json j = io::read_json(path);
        inputs.push_back({{"path", path}, {"fnv1a64", io::fnv1a_digest(path)}});
        return j;
    }

    void write(const std::string& name, const std::string& text) {
        io::write_text(out_dir / name, text);
        outputs.push_back(name);
    }
};

struct GridSource {
    std::string input;
    std::size_t nz = 16;
    std::size_t ntheta = 16;
    std::string kind = "smooth";
    double amplitude = 0.05;
};

void add_grid_options(CLI::App* sub, GridSource& g) {
    sub->add_option("--input", g.input, "grid JSON {nz, ntheta, values}");
    sub->add_option("--nz", g.nz, "rows of a generated grid")->capture_default_str();
    sub->add_option("--ntheta", g.ntheta, "columns of a generated grid")->capture_default_str();
    sub->add_option("--kind", g.kind, "generated grid: smooth | uniform")
        ->check(CLI::IsMember({"smooth", "uniform"}))
        ->capture_default_str();
    sub->add_option("--amplitude", g.amplitude, "perturbation amplitude of the smooth grid")->capture_default_str();
}

GridFunction load_grid(Context& ctx, const GridSource& g) {
    if (!g.input.empty()) return io::grid_from_json(ctx.read(g.input));
    Rng rng(ctx.seed);
    if (g.kind == "uniform") return instances::uniform_grid(g.nz, g.ntheta, rng);
    return instances::smooth_monotone_grid(g.nz, g.ntheta, rng, g.amplitude);
}

json moments_json(const RealVector& m) { return json(m); }

double l1_distance(const GridFunction& a, const GridFunction& b) {
    double s = 0.0;
    for (std::size_t c = 0; c < a.cells(); ++c) s += std::abs(a.values()[c] - b.values()[c]);
    return s / static_cast<double>(a.cells());
}

// --- ot ---------------------------------------------------------------------

struct OtOptions {
    std::string problem = "all";
    std::string input;
};

Outcome ot_solve(Context& ctx, const OtOptions& o) {
    const json doc = ctx.read(o.input);
    const CostMatrix cost(io::real_matrix_from_json(doc.is_object() && doc.contains("cost") ? doc.at("cost") : doc));
    const bool given_plus = doc.is_object() && doc.contains("mu_plus");
    const bool given_minus = doc.is_object() && doc.contains("mu_minus");
    const MarginalVector mu_plus = given_plus ? MarginalVector(io::vector_from_json(doc.at("mu_plus")))
                                              : MarginalVector::uniform(cost.rows());
    const MarginalVector mu_minus = given_minus ? MarginalVector(io::vector_from_json(doc.at("mu_minus")))
                                                : MarginalVector::uniform(cost.cols());
    const double tol = ctx.tol_or(1e-8);
    auto uniform = [](const MarginalVector& mu) {
        const auto& w = mu.mass();
        return std::abs(mu.total() - 1.0) <= 1e-12 &&
               std::all_of(w.begin(), w.end(), [&](double x) { return std::abs(x - w.front()) <= 1e-15; });
    };
    const bool square_uniform = cost.rows() == cost.cols() && uniform(mu_plus) && uniform(mu_minus);
    const bool want_m = o.problem == "monge" || o.problem == "all";
    const bool want_k = o.problem == "kantorovich" || o.problem == "all";
    const bool want_d = o.problem == "dual" || o.problem == "all";

    Outcome out;
    out.report["rows"] = cost.rows();
    out.report["cols"] = cost.cols();
    std::optional<double> m, k, d;
    if (want_m) {
        const auto s = solve_monge(cost);
        m = s.value;
        out.report["monge"] = {{"value", s.value}, {"assignment", io::to_json(s.assignment)}};
    }
    if (want_k) {
        const auto s = solve_kantorovich(cost, mu_plus, mu_minus);
        k = s.value;
        out.report["kantorovich"] = {{"value", s.value},
                                     {"plan", io::to_json(s.plan.flow)},
                                     {"marginal_residual", s.plan.marginal_residual()},
                                     {"pivots", s.pivots}};
        out.pass = out.pass && s.plan.marginal_residual() <= tol;
    }
    if (want_d) {
        const auto s = solve_dual(cost, mu_plus, mu_minus);
        d = s.value;
        const double violation = s.potentials.max_violation(cost);
        out.report["dual"] = {{"value", s.value},
                              {"u", s.potentials.u},
                              {"v", s.potentials.v},
                              {"max_violation", violation}};
        out.pass = out.pass && violation <= tol;
    }
    json gaps = json::object();
    if (m && k && square_uniform) {
        gaps["mk"] = std::abs(*m - static_cast<double>(cost.rows()) * *k);
        out.pass = out.pass && gaps["mk"].get<double>() <= tol;
    }
    if (k && d) {
        gaps["kd"] = std::abs(*k - *d);
        out.pass = out.pass && gaps["kd"].get<double>() <= tol;
    }
    out.report["gaps"] = gaps;
    out.report["scale"] = square_uniform ? static_cast<double>(cost.rows()) : 1.0;
    return out;
}

// --- major ------------------------------------------------------------------

struct MajorOptions {
    std::vector<double> x, y;
    std::string input;
};

Outcome major_check(Context& ctx, const MajorOptions& o) {
    const auto c = majorizes(o.y, o.x, ctx.tol_or(1e-9));
    return Outcome{json{{"x", o.x}, {"y", o.y}, {"certificate", io::to_json(c)}}, true};
}

Outcome major_transform(Context& ctx, const MajorOptions& o) {
    const auto chain = t_transform_chain(o.x, o.y, ctx.tol_or(1e-10));
    json steps = json::array();
    for (const auto& s : chain.steps) steps.push_back({{"i", s.i}, {"j", s.j}, {"t", s.t}});
    const double residual = max_abs_diff(chain.apply(o.y), o.x);
    Outcome out;
    out.report = {{"x", o.x},
                  {"y", o.y},
                  {"alignment", io::to_json(chain.alignment)},
                  {"steps", steps},
                  {"matrix", io::to_json(chain.matrix())},
                  {"residual", residual}};
    out.pass = residual <= ctx.tol_or(1e-9) && chain.steps.size() + 1 <= std::max<std::size_t>(o.x.size(), 1);
    return out;
}

Outcome major_birkhoff(Context& ctx, const MajorOptions& o) {
    const DoublyStochasticMatrix p(io::real_matrix_from_json(ctx.read(o.input)), 1e-9);
    const double tol = ctx.tol_or(1e-9);
    const auto terms = birkhoff_decompose(p, tol);
    json t = json::array();
    for (const auto& term : terms) t.push_back({{"weight", term.weight}, {"permutation", io::to_json(term.permutation)}});
    RealMatrix diff = birkhoff_resum(terms, p.size());
    diff -= p.matrix();
    const std::size_t bound = (p.size() - 1) * (p.size() - 1) + 1;
    Outcome out;
    out.report = {{"n", p.size()}, {"terms", t}, {"term_bound", bound}, {"resum_error", diff.max_abs()}};
    out.pass = diff.max_abs() <= tol && terms.size() <= bound;
    return out;
}

// --- schur-horn -------------------------------------------------------------

struct SchurHornOptions {
    std::string input;
    std::vector<double> spectrum, diag;
};

Outcome sh_project(Context& ctx, const SchurHornOptions& o) {
    const HermitianMatrix a(io::complex_matrix_from_json(ctx.read(o.input)));
    const auto p = schur_projection(a);
    const double residual = max_abs_diff(p.witness.apply(p.spectrum), p.diagonal);
    Outcome out;
    out.report = {{"diagonal", p.diagonal},
                  {"spectrum", p.spectrum},
                  {"witness", io::to_json(p.witness.matrix())},
                  {"witness_residual", residual},
                  {"certificate", io::to_json(p.certificate)}};
    out.pass = p.certificate.holds && residual <= ctx.tol_or(1e-9);
    return out;
}

Outcome sh_construct(Context& ctx, const SchurHornOptions& o) {
    const auto a = horn_construct(o.spectrum, o.diag);
    const double diag_error = max_abs_diff(a.diagonal(), o.diag);
    const double spec_error = max_abs_diff(jacobi_eigh(a).values, decreasing_rearrangement(o.spectrum));
    ctx.write("matrix.json", io::to_json(a.matrix()).dump(2) + "\n");
    Outcome out;
    out.report = {{"matrix", io::to_json(a.matrix())}, {"diagonal_error", diag_error}, {"spectrum_error", spec_error}};
    out.pass = diag_error <= ctx.tol_or(1e-9) && spec_error <= 1e-8;
    return out;
}

// --- flow -------------------------------------------------------------------

struct FlowOptionsCli {
    std::size_t n = 3;
    std::vector<double> spectrum, target;
    double step = 0.02;
    double t_end = 200.0;
    std::string direction = "auto";
    std::size_t sample_every = 10;
};

Outcome flow_bracket(Context& ctx, const FlowOptionsCli& o) {
    Rng rng(ctx.seed);
    const std::size_t n = !o.spectrum.empty() ? o.spectrum.size() : o.n;
    RealVector lambda = o.spectrum.empty() ? instances::separated_vector(n, rng) : o.spectrum;
    RealVector nd = o.target;
    if (nd.empty())
        for (std::size_t k = 0; k < n; ++k) nd.push_back(static_cast<double>(k + 1));
    if (nd.size() != n) throw DimensionError("flow bracket: spectrum and target lengths differ");
    const auto start = OrbitState::from_spectrum(lambda, instances::unitary(n, rng));
    const auto nmat = SkewHermitianMatrix::imaginary_diagonal(nd);

    FlowOptions opt;
    opt.step = o.step;
    opt.t_end = o.t_end;
    opt.sample_every = o.sample_every;
    opt.direction = o.direction == "auto" ? align_direction(lambda, nd) : std::stoi(o.direction);
    const auto trace = integrate_flow(start, nmat, opt);

    double drift = 0.0;
    bool monotone = true;
    for (std::size_t k = 0; k < trace.samples.size(); ++k) {
        drift = std::max(drift, trace.samples[k].spec_drift);
        if (k > 0) {
            const double change = opt.direction * (trace.samples[k].trace_ln - trace.samples[k - 1].trace_ln);
            monotone = monotone && change >= -1e-12 * (1.0 + std::abs(trace.samples[k].trace_ln));
        }
    }
    RealVector diag(n);
    for (std::size_t k = 0; k < n; ++k) diag[k] = trace.final_state.L.matrix()(k, k).imag();
    const RealVector similar = similarly_ordered(lambda, nd);

    ctx.write("flow_trace.csv", io::flow_csv(trace.samples));
    ctx.write("final_state.json",
              json{{"time", trace.final_state.time}, {"L", io::to_json(trace.final_state.L.matrix())}}.dump(2) + "\n");
    Outcome out;
    out.report = {{"n", n},
                  {"spectrum", lambda},
                  {"target", nd},
                  {"direction", opt.direction},
                  {"converged", trace.converged},
                  {"steps", trace.steps},
                  {"step_halvings", trace.step_halvings},
                  {"t_final", trace.final_state.time},
                  {"final_diagonal", diag},
                  {"similarly_ordered", similar},
                  {"distance_to_similarly_ordered", max_abs_diff(diag, similar)},
                  {"max_spec_drift", drift},
                  {"monotone", monotone}};
    out.pass = drift <= ctx.tol_or(1e-10) && monotone;
    return out;
}

// --- annulus ----------------------------------------------------------------

struct AnnulusOptions {
    GridSource grid;
    std::string target;
    std::string alpha;
    double step = 1e-4;
    double t_end = 0.5;
    int direction = -1;
    std::string scheme = "centered";
    bool serial = false;
    std::size_t sample_every = 50;
    std::size_t segments = 128;
    double advect_t_end = 0.25;
    std::optional<double> advect_step;
};

Outcome annulus_rearrange(Context& ctx, const AnnulusOptions& o) {
    const auto x = load_grid(ctx, o.grid);
    const auto s = spectral_profile(x);
    const auto mx = moments(x, 6), mp = moments(lambda2(s.profile, x.nz(), x.ntheta()), 6);
    double worst = 0.0;
    for (std::size_t p = 0; p < 6; ++p) worst = std::max(worst, std::abs(mx[p] - mp[p]) / std::max(1e-300, std::abs(mx[p])));
    ctx.write("profile.json", io::to_json(s.profile).dump(2) + "\n");
    Outcome out;
    out.report = {{"nz", x.nz()},
                  {"ntheta", x.ntheta()},
                  {"profile", io::to_json(s.profile)},
                  {"psi", s.psi.mapping()},
                  {"moments", moments_json(mx)},
                  {"max_relative_moment_error", worst}};
    out.pass = worst <= ctx.tol_or(1e-12);
    return out;
}

Outcome annulus_schur(Context& ctx, const AnnulusOptions& o) {
    const auto x = load_grid(ctx, o.grid);
    const auto c = schur_check(x, ctx.tol_or(1e-12));
    Outcome out;
    out.report = {{"nz", x.nz()},
                  {"ntheta", x.ntheta()},
                  {"theta_average", io::to_json(theta_average(x))},
                  {"certificate", io::to_json(c)}};
    out.pass = c.holds;
    return out;
}

Outcome annulus_horn(Context& ctx, const AnnulusOptions& o) {
    const auto x = load_grid(ctx, o.grid);
    const auto profile = spectral_profile(x).profile;
    StepFunction target = theta_average(x);
    if (!o.target.empty()) {
        target = io::step_function_from_json(ctx.read(o.target));
    } else {
        Rng rng(ctx.seed + 1);
        target = theta_average(CellMap::random_bijection(x.cells(), rng).apply(x));
    }
    const auto lift = horn_lift(profile, target, ctx.tol_or(1e-9));
    ctx.write("lift.json", io::to_json(lift.x).dump(2) + "\n");
    Outcome out;
    out.report = {{"target", io::to_json(target)},
                  {"theta_average", io::to_json(theta_average(lift.x))},
                  {"residual_l1", lift.residual_l1},
                  {"bound", lift.bound}};
    out.pass = lift.residual_l1 <= lift.bound;
    return out;
}

Outcome annulus_monge(Context& ctx, const AnnulusOptions& o) {
    const auto x = load_grid(ctx, o.grid);
    const auto m = monge_minimizer(x);
    ctx.write("minimizer.json", io::to_json(m.minimizer).dump(2) + "\n");
    Outcome out;
    out.report = {{"cost", m.cost}, {"initial_cost", z_pairing_cost(x)}};
    out.pass = m.cost <= z_pairing_cost(x) + 1e-12;
    return out;
}

Outcome annulus_dual_cmd(Context& ctx, const AnnulusOptions& o) {
    const auto x = load_grid(ctx, o.grid);
    const auto profile = spectral_profile(x).profile;
    const StepFunction alpha = o.alpha.empty() ? profile : io::step_function_from_json(ctx.read(o.alpha));
    const auto d = annulus_dual(profile, alpha);
    Outcome out;
    out.report = {{"d_value", d.d_value},
                  {"k_value", d.k_value},
                  {"k_min", d.k_min},
                  {"gap", d.gap},
                  {"weak_duality", d.weak_duality}};
    out.pass = d.weak_duality;
    return out;
}

Outcome annulus_flow(Context& ctx, const AnnulusOptions& o) {
    const auto x0 = load_grid(ctx, o.grid);
    PdeOptions opt;
    opt.step = o.step;
    opt.t_end = o.t_end;
    opt.direction = o.direction;
    opt.scheme = o.scheme == "arakawa" ? BracketScheme::Arakawa : BracketScheme::Centered;
    opt.parallel = !o.serial;
    opt.sample_every = o.sample_every;
    const auto trace = integrate_pde(x0, opt);
    const auto& first = trace.samples.front();
    const auto& last = trace.samples.back();
    double i1_drift = 0.0, i2_drift = 0.0;
    for (const auto& s : trace.samples) {
        i1_drift = std::max(i1_drift, std::abs(s.moments[0] - first.moments[0]));
        i2_drift = std::max(i2_drift, std::abs(s.moments[1] - first.moments[1]));
    }
    ctx.write("pde_trace.csv", io::pde_csv(trace.samples));
    ctx.write("final_state.json", io::to_json(trace.final_state).dump(2) + "\n");
    Outcome out;
    out.report = {{"nz", x0.nz()},
                  {"ntheta", x0.ntheta()},
                  {"step", o.step},
                  {"t_end", o.t_end},
                  {"direction", o.direction},
                  {"scheme", o.scheme},
                  {"steps", trace.steps},
                  {"t_final", trace.t_final},
                  {"shock_detected", trace.shock_detected},
                  {"xtheta_initial", first.xtheta_norm},
                  {"xtheta_final", last.xtheta_norm},
                  {"xtheta_ratio", first.xtheta_norm > 0 ? last.xtheta_norm / first.xtheta_norm : 0.0},
                  {"i1_drift", i1_drift},
                  {"i2_drift", i2_drift},
                  {"l1_to_monge_minimizer", l1_distance(trace.final_state, monge_minimizer(x0).minimizer)}};
    out.pass = i1_drift <= ctx.tol_or(1e-10);
    return out;
}

Outcome annulus_advect(Context& ctx, const AnnulusOptions& o) {
    std::function<double(double)> exact0;
    StepFunction rho0 = StepFunction::uniform({0.0});
    if (!o.grid.input.empty()) {
        rho0 = io::step_function_from_json(ctx.read(o.grid.input));
        exact0 = [rho0](double z) { return (z < 0.0) ? 0.0 : rho0(z); };
    } else {
        exact0 = [](double z) { return std::exp(-std::pow((z - 0.3) / 0.08, 2)); };
        RealVector v(o.segments);
        for (std::size_t i = 0; i < o.segments; ++i) v[i] = exact0((static_cast<double>(i) + 0.5) / o.segments);
        rho0 = StepFunction::uniform(std::move(v));
    }
    const double dz = 1.0 / static_cast<double>(rho0.segments());
    const double step = o.advect_step.value_or(0.5 * dz);
    const auto out_f = advect_density(rho0, step, o.advect_t_end);
    double err = 0.0;
    for (std::size_t i = 0; i < out_f.segments(); ++i) {
        const double z = (static_cast<double>(i) + 0.5) * dz;
        err += std::abs(out_f.values()[i] - exact0(z - o.advect_t_end)) * dz;
    }
    ctx.write("density.json", io::to_json(out_f).dump(2) + "\n");
    Outcome out;
    out.report = {{"segments", rho0.segments()}, {"step", step}, {"t_end", o.advect_t_end}, {"l1_error", err}};
    return out;
}

// --- verify -----------------------------------------------------------------

struct VerifyOptions {
    std::optional<std::size_t> n;
    std::optional<std::size_t> instances;
    std::optional<std::size_t> min_n, max_n;
    std::optional<double> step, t_end;
    bool serial = false;
};

verify::Execution execution(const VerifyOptions& o) {
    return o.serial ? verify::Execution::Serial : verify::Execution::Parallel;
}

Outcome verify_mkd(Context& ctx, const VerifyOptions& o) {
    verify::MkdConfig c;
    c.seed = ctx.seed;
    c.tol = ctx.tol_or(c.tol);
    c.instances = o.instances.value_or(c.instances);
    c.min_n = o.n.value_or(o.min_n.value_or(c.min_n));
    c.max_n = o.n.value_or(o.max_n.value_or(c.max_n));
    if (c.min_n < 1 || c.min_n > c.max_n) throw InvariantError("verify m-k-d: need 1 <= min-n <= max-n");
    const auto r = verify::run_mkd(c, execution(o));
    return Outcome{io::to_json(r), r.pass};
}

Outcome verify_schur_horn(Context& ctx, const VerifyOptions& o) {
    verify::SchurHornConfig c;
    c.seed = ctx.seed;
    c.instances = o.instances.value_or(c.instances);
    c.max_n = o.max_n.value_or(o.n.value_or(c.max_n));
    if (c.max_n < 1) throw InvariantError("verify schur-horn: need max-n >= 1");
    verify::BirkhoffConfig b;
    b.seed = ctx.seed;
    b.instances = c.instances;
    b.tol = ctx.tol_or(b.tol);
    const auto r = verify::run_schur_horn(c, execution(o));
    const auto rb = verify::run_birkhoff(b, execution(o));
    return Outcome{json{{"schur_horn", io::to_json(r)}, {"birkhoff", io::to_json(rb)}, {"pass", r.pass && rb.pass}},
                   r.pass && rb.pass};
}

Outcome verify_flow_limit(Context& ctx, const VerifyOptions& o) {
    verify::FlowLimitConfig c;
    c.seed = ctx.seed;
    c.instances = o.instances.value_or(c.instances);
    c.min_n = o.n.value_or(o.min_n.value_or(c.min_n));
    c.max_n = o.n.value_or(o.max_n.value_or(c.max_n));
    c.step = o.step.value_or(c.step);
    c.t_end = o.t_end.value_or(c.t_end);
    c.drift_tol = ctx.tol_or(c.drift_tol);
    if (c.min_n < 1 || c.min_n > c.max_n) throw InvariantError("verify flow-limit: need 1 <= min-n <= max-n");
    const auto r = verify::run_flow_limit(c, execution(o));
    return Outcome{io::to_json(r), r.pass};
}

// --- generate ---------------------------------------------------------------

struct GenerateOptions {
    std::string kind;
    std::size_t n = 4;
    std::optional<std::size_t> m;
    std::size_t terms = 4;
    std::vector<double> lambda, n_diag;
    GridSource grid;
    std::string output;
};

Outcome generate(Context& ctx, const GenerateOptions& o) {
    Rng rng(ctx.seed);
    json doc;
    Outcome out;
    if (o.kind == "cost") {
        const std::size_t m = o.m.value_or(o.n);
        doc = {{"cost", io::to_json(instances::uniform_cost(o.n, m, rng))},
               {"mu_plus", RealVector(o.n, 1.0 / static_cast<double>(o.n))},
               {"mu_minus", RealVector(m, 1.0 / static_cast<double>(m))}};
    } else if (o.kind == "orbit") {
        const RealVector lambda = o.lambda.empty() ? instances::separated_vector(o.n, rng) : RealVector(o.lambda);
        const RealVector nd = o.n_diag.empty() ? instances::separated_vector(lambda.size(), rng) : RealVector(o.n_diag);
        const auto inst = orbit_cost_instance(lambda, nd);
        json violations = json::array();
        for (auto [i, j] : inst.violations) violations.push_back({i, j});
        doc = {{"cost", io::to_json(inst.cost.matrix())},
               {"lambda", lambda},
               {"n_diag", nd},
               {"candidate",
                {{"u", inst.candidate.u},
                 {"v", inst.candidate.v},
                 {"feasible", inst.candidate_feasible},
                 {"violations", violations}}}};
    } else if (o.kind == "ds") {
        const auto p = instances::doubly_stochastic(o.n, o.terms, rng);
        doc = {{"n", o.n}, {"re", io::to_json(p.matrix())}};
        out.pass = is_doubly_stochastic(p.matrix(), 1e-12);
    } else {
        GridSource g = o.grid;
        g.input.clear();
        const auto x = load_grid(ctx, g);
        doc = io::to_json(x);
        out.pass = schur_check(x).holds;
    }
    const std::string name = o.kind + ".json";
    if (o.output.empty()) {
        ctx.write(name, doc.dump(2) + "\n");
    } else {
        io::write_text(o.output, doc.dump(2) + "\n");
        ctx.outputs.push_back(o.output);
    }
    out.report = {{"kind", o.kind}, {"instance", doc}};
    return out;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    const auto t0 = std::chrono::steady_clock::now();
    CLI::App app{"Monge-Kantorovich transport, majorization and Schur-Horn, double-bracket flows, annulus rearrangements",
                 "orbit-transport"};
    app.fallthrough();
    app.require_subcommand(1);

    Context ctx;
    std::string out_dir;
    if (const char* env = std::getenv("ORBIT_TRANSPORT_OUT")) out_dir = env;
    double tol = 0.0;
    app.add_option("--out-dir", out_dir, "directory for reports, traces and the manifest (default $ORBIT_TRANSPORT_OUT or .)");
    app.add_option("--seed", ctx.seed, "seed for generated instances")->capture_default_str();
    auto* tol_opt = app.add_option("--tol", tol, "override the command's tolerance");

    std::function<Outcome()> action;

    OtOptions ot_o;
    auto* ot = app.add_subcommand("ot", "discrete transport problems")->require_subcommand(1);
    auto* ot_solve_cmd = ot->add_subcommand("solve", "solve Monge, Kantorovich and dual problems");
    ot_solve_cmd->add_option("--problem", ot_o.problem)
        ->check(CLI::IsMember({"monge", "kantorovich", "dual", "all"}))
        ->capture_default_str();
    ot_solve_cmd->add_option("--input", ot_o.input, "JSON {cost, mu_plus?, mu_minus?}")->required();
    ot_solve_cmd->callback([&] { action = [&] { return ot_solve(ctx, ot_o); }; });

    MajorOptions mj;
    auto* major = app.add_subcommand("major", "majorization")->require_subcommand(1);
    auto* mj_check = major->add_subcommand("check", "does y majorize x");
    auto* mj_transform = major->add_subcommand("transform", "T-transform chain with x = P y");
    for (auto* s : {mj_check, mj_transform}) {
        s->add_option("--x", mj.x)->delimiter(',')->required();
        s->add_option("--y", mj.y)->delimiter(',')->required();
    }
    mj_check->callback([&] { action = [&] { return major_check(ctx, mj); }; });
    mj_transform->callback([&] { action = [&] { return major_transform(ctx, mj); }; });
    auto* mj_birkhoff = major->add_subcommand("birkhoff", "Birkhoff decomposition of a doubly stochastic matrix");
    mj_birkhoff->add_option("--input", mj.input, "matrix JSON {n, re}")->required();
    mj_birkhoff->callback([&] { action = [&] { return major_birkhoff(ctx, mj); }; });

    SchurHornOptions sh;
    auto* shc = app.add_subcommand("schur-horn", "diagonals and spectra of Hermitian matrices")->require_subcommand(1);
    auto* sh_p = shc->add_subcommand("project", "diagonal, spectrum and doubly stochastic witness");
    sh_p->add_option("--input", sh.input, "matrix JSON {n, re, im}")->required();
    sh_p->callback([&] { action = [&] { return sh_project(ctx, sh); }; });
    auto* sh_c = shc->add_subcommand("construct", "real symmetric matrix with given spectrum and diagonal");
    sh_c->add_option("--spectrum", sh.spectrum)->delimiter(',')->required();
    sh_c->add_option("--diag", sh.diag)->delimiter(',')->required();
    sh_c->callback([&] { action = [&] { return sh_construct(ctx, sh); }; });

    FlowOptionsCli fl;
    auto* flow = app.add_subcommand("flow", "isospectral flows")->require_subcommand(1);
    auto* fl_b = flow->add_subcommand("bracket", "integrate dL/dt = [L,[L,N]] from a random start");
    fl_b->add_option("--n", fl.n, "size when --spectrum is not given")->capture_default_str();
    fl_b->add_option("--spectrum", fl.spectrum, "spectrum of L / i")->delimiter(',');
    fl_b->add_option("--target", fl.target, "diagonal of N / i (default 1..n)")->delimiter(',');
    fl_b->add_option("--step", fl.step)->capture_default_str();
    fl_b->add_option("--t-end", fl.t_end)->capture_default_str();
    fl_b->add_option("--direction", fl.direction, "auto, 1 or -1")
        ->check(CLI::IsMember({"auto", "1", "-1", "+1"}))
        ->capture_default_str();
    fl_b->add_option("--sample-every", fl.sample_every)->capture_default_str();
    fl_b->callback([&] { action = [&] { return flow_bracket(ctx, fl); }; });

    AnnulusOptions an;
    auto* annulus = app.add_subcommand("annulus", "rearrangements on the annulus")->require_subcommand(1);
    auto add_annulus = [&](const char* name, const char* help, Outcome (*f)(Context&, const AnnulusOptions&)) {
        auto* s = annulus->add_subcommand(name, help);
        s->callback([&, f] { action = [&, f] { return f(ctx, an); }; });
        return s;
    };
    for (auto* s : {add_annulus("rearrange", "spectral profile and moments", annulus_rearrange),
                    add_annulus("schur", "theta-average majorized by the profile", annulus_schur),
                    add_annulus("monge", "minimizer of -<x, z> over rearrangements", annulus_monge)})
        add_grid_options(s, an.grid);
    auto* an_horn = add_annulus("horn", "grid with given profile and approximate theta-average", annulus_horn);
    add_grid_options(an_horn, an.grid);
    an_horn->add_option("--target", an.target, "step function JSON for the theta-average");
    auto* an_dual = add_annulus("dual", "dual value of a rearrangement against the spectral cost", annulus_dual_cmd);
    add_grid_options(an_dual, an.grid);
    an_dual->add_option("--alpha", an.alpha, "step function JSON, a rearrangement of the profile");
    auto* an_flow = add_annulus("flow", "integrate x_t = direction {x, {x, z}}", annulus_flow);
    add_grid_options(an_flow, an.grid);
    an_flow->add_option("--step", an.step)->capture_default_str();
    an_flow->add_option("--t-end", an.t_end)->capture_default_str();
    an_flow->add_option("--direction", an.direction)->check(CLI::IsMember({-1, 1}))->capture_default_str();
    an_flow->add_option("--scheme", an.scheme)->check(CLI::IsMember({"centered", "arakawa"}))->capture_default_str();
    an_flow->add_option("--sample-every", an.sample_every)->capture_default_str();
    an_flow->add_flag("--serial", an.serial, "use the serial reference kernel");
    auto* an_adv = add_annulus("advect", "upwind rho_t + rho_z = 0", annulus_advect);
    an_adv->add_option("--input", an.grid.input, "density step function JSON (default: Gaussian bump)");
    an_adv->add_option("--segments", an.segments, "segments of the default bump")->capture_default_str();
    an_adv->add_option("--step", an.advect_step, "time step (default half a segment)");
    an_adv->add_option("--t-end", an.advect_t_end)->capture_default_str();

    VerifyOptions vf;
    auto* ver = app.add_subcommand("verify", "randomized property harnesses")->require_subcommand(1);
    auto add_verify = [&](const char* name, const char* help, Outcome (*f)(Context&, const VerifyOptions&)) {
        auto* s = ver->add_subcommand(name, help);
        s->add_option("--instances", vf.instances);
        s->add_option("--n", vf.n, "fixed size");
        s->add_option("--max-n", vf.max_n);
        s->add_flag("--serial", vf.serial, "run instances one after another");
        s->callback([&, f] { action = [&, f] { return f(ctx, vf); }; });
        return s;
    };
    add_verify("m-k-d", "Monge = Kantorovich = dual on random costs", verify_mkd)->add_option("--min-n", vf.min_n);
    add_verify("schur-horn", "Schur-Horn roundtrips, Birkhoff and T-transform chains", verify_schur_horn);
    auto* vf_flow = add_verify("flow-limit", "double-bracket limits from random starts", verify_flow_limit);
    vf_flow->add_option("--min-n", vf.min_n);
    vf_flow->add_option("--step", vf.step);
    vf_flow->add_option("--t-end", vf.t_end);

    GenerateOptions gen;
    auto* gen_cmd = app.add_subcommand("generate", "write a random instance as JSON");
    gen_cmd->add_option("instance", gen.kind, "cost, orbit, ds or grid")->check(CLI::IsMember({"cost", "orbit", "ds", "grid"}))->required();
    gen_cmd->add_option("--n", gen.n)->capture_default_str();
    gen_cmd->add_option("--m", gen.m, "columns of a cost matrix (default n)");
    gen_cmd->add_option("--terms", gen.terms, "permutations in a doubly stochastic instance")->capture_default_str();
    gen_cmd->add_option("--lambda", gen.lambda)->delimiter(',');
    gen_cmd->add_option("--ndiag", gen.n_diag)->delimiter(',');
    gen_cmd->add_option("--nz", gen.grid.nz)->capture_default_str();
    gen_cmd->add_option("--ntheta", gen.grid.ntheta)->capture_default_str();
    gen_cmd->add_option("--kind", gen.grid.kind)->check(CLI::IsMember({"smooth", "uniform"}))->capture_default_str();
    gen_cmd->add_option("--output", gen.output, "file to write (default <out-dir>/<kind>.json)");
    gen_cmd->callback([&] { action = [&] { return generate(ctx, gen); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return 0;
        }
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }
    if (*tol_opt) ctx.tol = tol;
    ctx.out_dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);

    Outcome outcome;
    int code = 0;
    std::string error;
    try {
        fs::create_directories(ctx.out_dir);
        outcome = action();
        code = outcome.pass ? 0 : 1;
    } catch (const io::InputError& e) {
        error = e.what();
        code = 2;
    } catch (const ConvergenceError& e) {
        error = e.what();
        code = 1;
    } catch (const BlowupError& e) {
        error = e.what();
        code = 1;
    } catch (const Error& e) {
        error = e.what();
        code = 2;
    } catch (const fs::filesystem_error& e) {
        error = e.what();
        code = 2;
    }

    json manifest{{"command", std::vector<std::string>(argv, argv + argc)},
                  {"seed", ctx.seed},
                  {"tol", ctx.tol ? json(*ctx.tol) : json(nullptr)},
                  {"inputs", ctx.inputs},
                  {"exit_code", code},
                  {"pass", code == 0}};
    if (code != 2 || error.empty()) {
        const std::string text = outcome.report.dump(2) + "\n";
        try {
            ctx.write("report.json", text);
        } catch (const Error& e) {
            err << "error: " << e.what() << '\n';
            return 2;
        }
        out << text;
    }
    if (!error.empty()) {
        err << "error: " << error << '\n';
        manifest["error"] = error;
    }
    manifest["outputs"] = ctx.outputs;
    manifest["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    try {
        if (fs::is_directory(ctx.out_dir)) io::write_text(ctx.out_dir / "manifest.json", manifest.dump(2) + "\n");
    } catch (const Error&) {
    }
    return code;
}

}  // namespace ot::cli
