#include <cmath>
#include <limits>
#include <ostream>

#include "vaxnet/epi.hpp"
#include "vaxnet/stats.hpp"
#include "vaxnet/timeseries.hpp"

namespace vaxnet::epi {

std::vector<double> default_r_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 29; ++i) grid.push_back(0.005 * i);
    return grid;
}

namespace {

struct RunOutcome {
    double achieved_r = 0.0;
    std::size_t ever_infected = 0;
    std::string error;
    bool stalled = false;
    double best_r = 0.0;
};

double ratio(double p, double base) {
    if (base > 0) return p / base;
    return p > 0 ? std::numeric_limits<double>::infinity() : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

SweepReport sweep(const ContactNetwork& net, double coverage, std::span<const double> r_grid, std::uint64_t seed,
                  const SeirParams& params, const SweepOptions& options) {
    if (r_grid.empty()) throw Error("sweep: empty r grid");
    for (std::size_t i = 1; i < r_grid.size(); ++i)
        if (!(r_grid[i] > r_grid[i - 1])) throw Error("sweep: r grid must be strictly ascending");
    if (options.runs_per_point == 0) throw Error("sweep: runs per point must be >= 1");
    params.validate();

    SweepReport report;
    report.coverage = coverage;
    report.vaccinated = vaccinated_count_for(net.size(), coverage);
    if (report.vaccinated == 0 || report.vaccinated >= net.size())
        throw Error("sweep: coverage leaves no vaccinated or no unvaccinated node");

    const std::size_t runs = options.runs_per_point;
    const auto tasks = static_cast<std::int64_t>(r_grid.size() * runs);
    std::vector<RunOutcome> outcome(static_cast<std::size_t>(tasks));

    auto task = [&](std::int64_t t) {
        const auto g = static_cast<std::size_t>(t) / runs;
        const auto k = static_cast<std::size_t>(t) % runs;
        RunOutcome& out = outcome[static_cast<std::size_t>(t)];
        try {
            RandomStream rng(seed, {g, k});
            const auto start = random_assignment(net.size(), report.vaccinated, rng);
            const auto redistributed = redistribute(net, start, r_grid[g], rng, options.redistribute);
            out.achieved_r = redistributed.r;
            out.ever_infected = run_seir(net, redistributed.assignment, params, rng).ever_infected;
        } catch (const StallError& e) {
            out.error = e.what();
            out.stalled = true;
            out.best_r = e.best_r;
        } catch (const std::exception& e) {
            out.error = e.what();
        }
    };
    if (options.exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t t = 0; t < tasks; ++t) task(t);
    } else {
        for (std::int64_t t = 0; t < tasks; ++t) task(t);
    }

    for (std::size_t t = 0; t < outcome.size(); ++t) {
        if (outcome[t].error.empty()) continue;
        const std::size_t g = t / runs;
        const std::string what = "sweep: grid point r = " + format_number(r_grid[g]) + " (index " +
                                 std::to_string(g) + "), run " + std::to_string(t % runs) + ": " + outcome[t].error;
        if (outcome[t].stalled) throw StallError(what, outcome[t].best_r);
        throw Error(what);
    }

    // Thresholds are compared on integer counts: infected / N >= x.
    const double n = static_cast<double>(net.size());
    for (std::size_t g = 0; g < r_grid.size(); ++g) {
        SweepPoint pt;
        pt.target_r = r_grid[g];
        pt.runs = runs;
        double r_sum = 0.0;
        for (std::size_t k = 0; k < runs; ++k) {
            const RunOutcome& o = outcome[g * runs + k];
            r_sum += o.achieved_r;
            const auto infected = static_cast<double>(o.ever_infected);
            if (infected * 100.0 >= 3.0 * n) ++pt.n_ge_3pct;
            if (infected * 100.0 >= 5.0 * n) ++pt.n_ge_5pct;
        }
        pt.achieved_r_mean = r_sum / static_cast<double>(runs);
        pt.p_ge_3pct = static_cast<double>(pt.n_ge_3pct) / static_cast<double>(runs);
        pt.p_ge_5pct = static_cast<double>(pt.n_ge_5pct) / static_cast<double>(runs);
        const auto ci = stats::wilson_interval(static_cast<long>(pt.n_ge_3pct), static_cast<long>(runs));
        pt.ci_low = ci.low;
        pt.ci_high = ci.high;
        report.points.push_back(pt);
    }
    const SweepPoint& base = report.points.front();
    // The baseline is 1 against itself even when it saw no outbreaks.
    for (std::size_t i = 1; i < report.points.size(); ++i) {
        auto& pt = report.points[i];
        pt.rr_3pct = ratio(pt.p_ge_3pct, base.p_ge_3pct);
        pt.rr_5pct = ratio(pt.p_ge_5pct, base.p_ge_5pct);
    }
    return report;
}

void write_sweep_csv(std::ostream& out, const SweepReport& report) {
    out << "target_r,achieved_r_mean,runs,p_ge_3pct,p_ge_5pct,rr_3pct,rr_5pct,ci_low,ci_high\n";
    for (const auto& p : report.points) {
        out << format_number(p.target_r) << ',' << format_number(p.achieved_r_mean) << ',' << p.runs << ','
            << format_number(p.p_ge_3pct) << ',' << format_number(p.p_ge_5pct) << ',' << format_number(p.rr_3pct)
            << ',' << format_number(p.rr_5pct) << ',' << format_number(p.ci_low) << ',' << format_number(p.ci_high)
            << '\n';
    }
}

}  // namespace vaxnet::epi
