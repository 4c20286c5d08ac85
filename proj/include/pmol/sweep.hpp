#ifndef PMOL_SWEEP_HPP
#define PMOL_SWEEP_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "pmol/dynamics.hpp"
#include "pmol/models.hpp"

namespace pmol {

// Which knob a sweep turns. Each value rewrites one family of couplings on a
// copy of the base spec:
//   U      Kerr shift of every boson site
//   DeltaE detuning of every boson site (two-level detunings stay put)
//   G      strength of every boson <-> two-level exchange coupling
//   J2     strength of every hop tagged with group "J2"
enum class SweepParam { U, DeltaE, G, J2 };

// Accepts the CLI spellings "U", "dE", "g", "J2"; throws SpecError otherwise.
SweepParam parse_sweep_param(const std::string& name);

// n evenly spaced points on the closed interval [lo, hi]; n == 1 yields lo.
std::vector<double> linspace(double lo, double hi, std::size_t n);

// Copy of `base` with the chosen parameter set to `value`.  Throws SpecError
// when the spec has nothing the parameter applies to.
SystemSpec with_param(const SystemSpec& base, SweepParam param, double value);

enum class SweepPath { WeakDrive, Dynamics, Both };

struct SweepOptions {
    SweepParam param = SweepParam::U;
    std::vector<double> values;
    SweepPath path = SweepPath::WeakDrive;
    SteadyMethod method = SteadyMethod::Auto; // dynamics path
    EvolveOptions evolve{};
    int n_exc = 2;        // weak-pump manifold depth
    std::size_t threads = 0; // worker count; 0 picks the hardware concurrency
};

// One grid point.  Occupations are indexed like SweepResult::boson_sites,
// correlations like SweepResult::pairs.  The weak-pump occupations are the
// leading-order one-excitation populations |C(1_i)|^2.
struct SweepRow {
    double value = 0.0;
    std::vector<double> occupation_dyn;
    std::vector<double> g2_dyn;
    std::vector<double> occupation_wd;
    std::vector<double> g2_wd;
};

struct SweepResult {
    std::vector<std::size_t> boson_sites;
    std::vector<std::pair<std::size_t, std::size_t>> pairs; // boson site pairs, i <= j
    std::vector<SweepRow> rows; // one per requested value, in input order
};

// Evaluates every grid point on a small worker pool and assembles the rows
// in index order, so the result is deterministic regardless of the worker
// count.  The first worker failure aborts the sweep and is rethrown.
SweepResult run_sweep(const SystemSpec& base, const SweepOptions& opts);

struct RefineResult {
    double value = 0.0; // refined parameter
    double g2 = 0.0;    // g2 of the monitored mode at that parameter
};

// One golden-section pass over [lo, hi] minimizing the monitored mode's
// same-time correlation (first boson site), using the weak-pump path unless
// opts.path is Dynamics.  Converges the bracket to ~1e-10 of its span.
RefineResult refine_minimum(const SystemSpec& base, const SweepOptions& opts, double lo,
                            double hi);

} // namespace pmol

#endif
