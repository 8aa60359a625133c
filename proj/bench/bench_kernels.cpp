#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "ot/annulus.hpp"
#include "ot/instances.hpp"
#include "ot/kernels.hpp"
#include "ot/verify.hpp"

using namespace ot;

namespace {

double seconds(const std::function<void()>& f, int reps) {
    f();
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

void row(const char* name, double serial, double parallel) {
    std::printf("%-34s serial %10.3f ms  parallel %10.3f ms  speedup %5.2fx\n", name, serial * 1e3, parallel * 1e3,
                serial / parallel);
}

}  // namespace

int main() {
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
    Rng rng(1);
    for (std::size_t n : {64u, 256u, 512u}) {
        const auto x = instances::smooth_monotone_grid(n, n, rng);
        std::vector<double> out(x.cells());
        const int reps = n <= 64 ? 2000 : n <= 256 ? 100 : 25;
        for (auto scheme : {BracketScheme::Centered, BracketScheme::Arakawa}) {
            char name[64];
            std::snprintf(name, sizeof name, "bracket rhs %zux%zu %s", n, n,
                          scheme == BracketScheme::Centered ? "centered" : "arakawa");
            row(name, seconds([&] { bracket_rhs_serial(x, scheme, out); }, reps),
                seconds([&] { bracket_rhs_parallel(x, scheme, out); }, reps));
        }
    }

    verify::MkdConfig mkd;
    row("verify m-k-d (200 instances)", seconds([&] { verify::run_mkd(mkd, verify::Execution::Serial); }, 3),
        seconds([&] { verify::run_mkd(mkd, verify::Execution::Parallel); }, 3));
    verify::SchurHornConfig sh;
    row("verify schur-horn (100 instances)", seconds([&] { verify::run_schur_horn(sh, verify::Execution::Serial); }, 3),
        seconds([&] { verify::run_schur_horn(sh, verify::Execution::Parallel); }, 3));
    verify::FlowLimitConfig fl;
    fl.instances = 10;
    row("verify flow-limit (10 instances)", seconds([&] { verify::run_flow_limit(fl, verify::Execution::Serial); }, 1),
        seconds([&] { verify::run_flow_limit(fl, verify::Execution::Parallel); }, 1));
    return 0;
}
