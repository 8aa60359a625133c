#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "io.hpp"
#include "ot/majorization.hpp"
#include "ot/annulus.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "orbit-transport");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = ot::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / "orbit_transport_cli_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("cli: usage errors exit 2") {
    const auto dir = scratch("usage").string();
    CHECK(invoke({"--out-dir", dir, "ot", "solve", "--input", dir + "/missing.json"}).code == 2);
    CHECK(invoke({"--out-dir", dir, "ot", "solve"}).code == 2);
    const auto r = invoke({"--out-dir", dir, "verify", "m-k-d", "--no-such-flag"});
    CHECK(r.code == 2);
    CHECK(r.err.find("Usage") != std::string::npos);
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"--help"}).code == 0);
    CHECK(invoke({"--out-dir", dir, "major", "transform", "--x", "1,1", "--y", "3,0"}).code == 2);
}

TEST_CASE("cli: verify m-k-d passes and writes a manifest") {
    const auto dir = scratch("mkd");
    const auto r = invoke({"--out-dir", dir.string(), "--seed", "7", "verify", "m-k-d", "--n", "5", "--instances", "200"});
    CHECK(r.code == 0);
    const auto report = ot::io::json::parse(slurp(dir / "report.json"));
    CHECK(report.at("pass").get<bool>());
    CHECK(report.at("max_gap_mk").get<double>() <= 1e-8);
    CHECK(report.at("max_gap_kd").get<double>() <= 1e-8);
    CHECK(report.at("instances").size() == 200);
    const auto manifest = ot::io::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest.at("exit_code").get<int>() == 0);
    CHECK(manifest.at("seed").get<int>() == 7);
    CHECK(r.out == slurp(dir / "report.json"));
}

TEST_CASE("cli: verify reports are byte-identical across reruns and execution modes") {
    const auto a = scratch("rerun_a"), b = scratch("rerun_b"), c = scratch("rerun_c");
    const std::vector<std::string> cmd{"verify", "m-k-d", "--instances", "40"};
    auto with_dir = [&](const fs::path& d, std::vector<std::string> extra) {
        std::vector<std::string> args{"--out-dir", d.string(), "--seed", "11"};
        args.insert(args.end(), cmd.begin(), cmd.end());
        args.insert(args.end(), extra.begin(), extra.end());
        return invoke(args).code;
    };
    CHECK(with_dir(a, {}) == 0);
    CHECK(with_dir(b, {}) == 0);
    CHECK(with_dir(c, {"--serial"}) == 0);
    CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
    CHECK(slurp(a / "report.json") == slurp(c / "report.json"));
}

TEST_CASE("cli: ot solve reports three values and their gaps") {
    const auto dir = scratch("solve");
    std::ofstream(dir / "cost.json") << R"({"cost": [[4, 1, 3], [2, 0, 5], [3, 2, 2]]})";
    const auto r = invoke({"--out-dir", dir.string(), "ot", "solve", "--problem", "all", "--input", (dir / "cost.json").string()});
    CHECK(r.code == 0);
    const auto report = ot::io::json::parse(r.out);
    CHECK(report.at("monge").at("value").get<double>() == doctest::Approx(5.0));
    CHECK(report.at("kantorovich").at("value").get<double>() == doctest::Approx(5.0 / 3.0));
    CHECK(report.at("dual").at("value").get<double>() == doctest::Approx(5.0 / 3.0));
    CHECK(report.at("gaps").at("mk").get<double>() <= 1e-8);
    CHECK(report.at("gaps").at("kd").get<double>() <= 1e-8);
    const auto manifest = ot::io::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest.at("inputs").at(0).at("fnv1a64").get<std::string>().size() == 16);
}

TEST_CASE("cli: generate ds, orbit and grid") {
    const auto dir = scratch("generate");
    CHECK(invoke({"--out-dir", dir.string(), "--seed", "1", "generate", "ds", "--n", "4"}).code == 0);
    const auto p = ot::io::real_matrix_from_json(ot::io::read_json(dir / "ds.json"));
    CHECK(ot::is_doubly_stochastic(p, 1e-12));

    CHECK(invoke({"--out-dir", dir.string(), "generate", "orbit", "--lambda", "3,2,1", "--ndiag", "1,2,3"}).code == 0);
    const auto c = ot::io::real_matrix_from_json(ot::io::read_json(dir / "orbit.json").at("cost"));
    const double lambda[] = {3, 2, 1}, nd[] = {1, 2, 3};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(c(i, j) == lambda[i] * nd[j]);

    CHECK(invoke({"--out-dir", dir.string(), "generate", "grid", "--nz", "16", "--ntheta", "16"}).code == 0);
    const auto g = ot::io::grid_from_json(ot::io::read_json(dir / "grid.json"));
    CHECK(g.nz() == 16);
    CHECK(ot::schur_check(g).holds);

    const auto again = scratch("generate_again");
    CHECK(invoke({"--out-dir", again.string(), "generate", "grid"}).code == 0);
    CHECK(slurp(dir / "grid.json") == slurp(again / "grid.json"));
}

TEST_CASE("cli: flow bracket and annulus flow write traces with headers") {
    const auto dir = scratch("traces");
    CHECK(invoke({"--out-dir", dir.string(), "flow", "bracket", "--n", "3", "--t-end", "20"}).code == 0);
    CHECK(slurp(dir / "flow_trace.csv").rfind("t,trace_ln,comm_norm,dist_sq,spec_drift\n", 0) == 0);
    CHECK(invoke({"--out-dir", dir.string(), "annulus", "flow", "--nz", "8", "--ntheta", "8", "--t-end", "0.01",
                  "--step", "1e-3"})
              .code == 0);
    CHECK(slurp(dir / "pde_trace.csv").rfind("t,I1,I2,I3,I4,xtheta_norm,maxgrad\n", 0) == 0);
}

TEST_CASE("cli: major and schur-horn subcommands") {
    const auto dir = scratch("major");
    auto r = invoke({"--out-dir", dir.string(), "major", "transform", "--x", "2,1,0", "--y", "3,0,0"});
    CHECK(r.code == 0);
    CHECK(ot::io::json::parse(r.out).at("residual").get<double>() <= 1e-12);
    r = invoke({"--out-dir", dir.string(), "major", "check", "--x", "3,0,0", "--y", "2,1,0"});
    CHECK(r.code == 0);
    CHECK_FALSE(ot::io::json::parse(r.out).at("certificate").at("holds").get<bool>());
    r = invoke({"--out-dir", dir.string(), "schur-horn", "construct", "--spectrum", "3,1,0", "--diag", "2,1,1"});
    CHECK(r.code == 0);
    CHECK(invoke({"--out-dir", dir.string(), "schur-horn", "construct", "--spectrum", "3,1,0", "--diag", "4,0,0"}).code ==
          2);
}
