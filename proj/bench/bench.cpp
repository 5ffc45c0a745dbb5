// Serial reference vs OpenMP kernels on the resampling and simulation loops.
//
//   vaxnet_bench [threads]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "vaxnet/epi.hpp"
#include "vaxnet/homophily.hpp"
#include "vaxnet/synth.hpp"

using namespace vaxnet;

namespace {

double time_it(const std::function<void()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void compare(const char* name, const std::function<void(Execution)>& kernel) {
    const double serial = time_it([&] { kernel(Execution::serial); });
    const double parallel = time_it([&] { kernel(Execution::parallel); });
    std::printf("%-16s serial %8.3f s   parallel %8.3f s   speedup %5.2fx\n", name, serial, parallel,
                serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) omp_set_num_threads(std::atoi(argv[1]));
    std::printf("threads: %d\n", omp_get_max_threads());

    const auto g = synth::opinion_network(2000, 0.6, 0.008, 0.002, 1);
    compare("bootstrap_null", [&](Execution e) { bootstrap_null(g, 10000, 2, e); });
    compare("in_fraction_test", [&](Execution e) { in_fraction_test(g, 500, 3, e); });

    const auto net = epi::generate_synthetic_contact_network({}, 4).network;
    compare("estimate_r0", [&](Execution e) { epi::estimate_r0(net, {}, 100000, 5, e); });
    const double grid[] = {0.0, 0.075, 0.145};
    compare("sweep", [&](Execution e) {
        epi::SweepOptions opt;
        opt.runs_per_point = 5000;
        opt.exec = e;
        epi::sweep(net, 0.624, grid, 6, {}, opt);
    });
}
