#include "pmol/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "pmol/errors.hpp"
#include "pmol/weakdrive.hpp"

namespace pmol {

SweepParam parse_sweep_param(const std::string& name)
{
    if (name == "U")
        return SweepParam::U;
    if (name == "dE")
        return SweepParam::DeltaE;
    if (name == "g")
        return SweepParam::G;
    if (name == "J2")
        return SweepParam::J2;
    throw SpecError("unknown sweep parameter '" + name + "' (expected U, dE, g, or J2)");
}

std::vector<double> linspace(double lo, double hi, std::size_t n)
{
    if (n == 0)
        throw SpecError("linspace needs at least one point");
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k)
        out[k] = lo + step * static_cast<double>(k);
    out.back() = hi; // land exactly on the closed upper end
    return out;
}

SystemSpec with_param(const SystemSpec& base, SweepParam param, double value)
{
    SystemSpec spec = base;
    std::size_t touched = 0;
    switch (param) {
    case SweepParam::U:
        for (std::size_t s = 0; s < spec.sites.size(); ++s)
            if (spec.sites[s].is_boson()) {
                spec.kerr[s] = value;
                ++touched;
            }
        break;
    case SweepParam::DeltaE:
        for (std::size_t s = 0; s < spec.sites.size(); ++s)
            if (spec.sites[s].is_boson()) {
                spec.detuning[s] = value;
                ++touched;
            }
        break;
    case SweepParam::G:
        for (JcCoupling& c : spec.jc) {
            c.strength = value;
            ++touched;
        }
        break;
    case SweepParam::J2:
        for (Hop& h : spec.hops)
            if (h.group == "J2") {
                h.strength = value;
                ++touched;
            }
        break;
    }
    if (touched == 0)
        throw SpecError("sweep parameter does not apply to this spec");
    return spec;
}

namespace {

void fill_weakdrive(const SystemSpec& spec, const SweepResult& shape, int n_exc, SweepRow& row)
{
    const AmplitudeVector av = solve_manifold(spec, n_exc);
    std::vector<int> occ(spec.num_sites(), 0);
    row.occupation_wd.reserve(shape.boson_sites.size());
    for (std::size_t s : shape.boson_sites) {
        occ[s] = 1;
        row.occupation_wd.push_back(std::norm(av.amp(occ)));
        occ[s] = 0;
    }
    row.g2_wd.reserve(shape.pairs.size());
    for (const auto& [i, j] : shape.pairs)
        row.g2_wd.push_back(g2_from_amplitudes(av, i, j));
}

void fill_dynamics(const SystemSpec& spec, const SweepResult& shape, SteadyMethod method,
                   const EvolveOptions& evolve, SweepRow& row)
{
    const Liouvillian L = build_liouvillian(spec);
    const DensityState ss = steady_state(L, method, evolve);
    row.occupation_dyn.reserve(shape.boson_sites.size());
    for (std::size_t s : shape.boson_sites)
        row.occupation_dyn.push_back(mode_occupation(ss, s));
    row.g2_dyn.reserve(shape.pairs.size());
    for (const auto& [i, j] : shape.pairs)
        row.g2_dyn.push_back(g2_equal_time(ss, i, j));
}

} // namespace

SweepResult run_sweep(const SystemSpec& base, const SweepOptions& opts)
{
    base.validate();
    if (opts.values.empty())
        throw SpecError("sweep needs at least one parameter value");

    SweepResult result;
    for (std::size_t s = 0; s < base.sites.size(); ++s)
        if (base.sites[s].is_boson())
            result.boson_sites.push_back(s);
    for (std::size_t a = 0; a < result.boson_sites.size(); ++a)
        for (std::size_t b = a; b < result.boson_sites.size(); ++b)
            result.pairs.emplace_back(result.boson_sites[a], result.boson_sites[b]);
    result.rows.assign(opts.values.size(), SweepRow{});

    const auto compute_row = [&](std::size_t k) {
        SweepRow& row = result.rows[k];
        row.value = opts.values[k];
        const SystemSpec spec = with_param(base, opts.param, row.value);
        if (opts.path != SweepPath::Dynamics)
            fill_weakdrive(spec, result, opts.n_exc, row);
        if (opts.path != SweepPath::WeakDrive)
            fill_dynamics(spec, result, opts.method, opts.evolve, row);
    };

    std::size_t workers = opts.threads != 0
        ? opts.threads
        : std::max<std::size_t>(1, std::thread::hardware_concurrency());
    workers = std::min(workers, opts.values.size());

    if (workers <= 1) {
        for (std::size_t k = 0; k < opts.values.size(); ++k)
            compute_row(k);
        return result;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            while (!failed.load(std::memory_order_relaxed)) {
                const std::size_t k = next.fetch_add(1);
                if (k >= opts.values.size())
                    return;
                try {
                    compute_row(k);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    failed.store(true);
                }
            }
        });
    for (std::thread& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
    return result;
}

RefineResult refine_minimum(const SystemSpec& base, const SweepOptions& opts, double lo,
                            double hi)
{
    if (!(lo < hi))
        throw SpecError("refine_minimum needs lo < hi");

    std::size_t monitored = base.sites.size();
    for (std::size_t s = 0; s < base.sites.size(); ++s)
        if (base.sites[s].is_boson()) {
            monitored = s;
            break;
        }
    if (monitored == base.sites.size())
        throw SpecError("refine_minimum needs a boson mode to monitor");

    const auto eval = [&](double value) {
        const SystemSpec spec = with_param(base, opts.param, value);
        if (opts.path == SweepPath::Dynamics) {
            const DensityState ss = steady_state(build_liouvillian(spec), opts.method, opts.evolve);
            return g2_equal_time(ss, monitored, monitored);
        }
        return g2_from_amplitudes(solve_manifold(spec, opts.n_exc), monitored, monitored);
    };

    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo;
    double b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = eval(x1);
    double f2 = eval(x2);
    while (b - a > 1e-10 * std::max(1.0, std::abs(a) + std::abs(b))) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = eval(x2);
        }
    }
    const double mid = 0.5 * (a + b);
    return {mid, eval(mid)};
}

} // namespace pmol
