// Timing harness for the data-parallel kernels: each runs in its serial
// reference form and with OpenMP, and the outputs are compared bit for bit.

#include <chrono>
#include <cstdio>
#include <string>

#include "putkit/closed_form.hpp"
#include "putkit/lattice.hpp"
#include "putkit/monte_carlo.hpp"
#include "putkit/volterra.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace putkit;

namespace {

template <typename F>
double time_seconds(F&& f) {
    const auto start = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void row(const std::string& name, double serial, double parallel, bool identical) {
    std::printf("%-40s serial %8.3f s   openmp %8.3f s   speedup %5.2fx   identical %s\n",
                name.c_str(), serial, parallel, serial / parallel, identical ? "yes" : "NO");
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both columns run the serial path\n");
#endif

    {
        ModelSpec spec{ModelFamily::standard, 100.0, 1.0, 0.05, 0.02, 0.2, 0.0};
        double ps = 0.0, pp = 0.0;
        const double ts = time_seconds([&] { ps = crr_price(spec, {20000, Exec::serial}, 0.0, 100.0); });
        const double tp = time_seconds([&] { pp = crr_price(spec, {20000, Exec::parallel}, 0.0, 100.0); });
        row("crr lattice, 20000 steps", ts, tp, ps == pp);
    }
    {
        ModelSpec spec{ModelFamily::rate, 1.0, 10.0, 0.0, 0.0, 0.3, 0.0};
        const BoundaryCurve curve =
            sample_closed_form_boundary(spec, TimeGrid::refined(10.0, 1024));
        McConfig ser{100000, 500, 42, Exec::serial};
        McConfig par = ser;
        par.exec = Exec::parallel;
        McEstimate es{}, ep{};
        const double ts = time_seconds([&] { es = mc_policy_value(spec, curve, ser, 0.0, 1.0); });
        const double tp = time_seconds([&] { ep = mc_policy_value(spec, curve, par, 0.0, 1.0); });
        row("mc policy value, 100k paths x 5000 steps", ts, tp,
            es.value == ep.value && es.std_error == ep.std_error);
    }
    {
        ModelSpec spec{ModelFamily::vol, 1.0, 10.0, 0.05, 0.0, 0.0, 0.0};
        double ls = 0.0, lp = 0.0;
        const double ts = time_seconds([&] { ls = lattice_price(spec, {8000, Exec::serial}, 0.0, 1.0); });
        const double tp = time_seconds([&] { lp = lattice_price(spec, {8000, Exec::parallel}, 0.0, 1.0); });
        row("equal-variance lattice, 8000 steps", ts, tp, ls == lp);
    }
    return 0;
}
