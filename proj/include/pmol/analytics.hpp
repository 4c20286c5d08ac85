#ifndef PMOL_ANALYTICS_HPP
#define PMOL_ANALYTICS_HPP

#include <utility>
#include <vector>

namespace pmol {

// One solution of the destructive-interference conditions for the symmetric
// two-mode molecule (equal detunings and decay rates on both modes).  Energies
// are in units of the reference decay rate.
struct OptimalPoint {
    double delta_e = 0.0;
    double u = 0.0;
    int branch = +1; // sign of the detuning branch
    bool feasible = false;
};

// Both signs of the exact optimum.  Feasible only for 2 J^2 > gamma^2; at or
// below that boundary the fields are left at zero with feasible = false
// instead of evaluating a divergent expression.  Throws SpecError unless
// J > 0 and gamma > 0.
struct OptimalBranches {
    OptimalPoint plus;
    OptimalPoint minus;
};
OptimalBranches optimal_exact(double J, double gamma);

// Leading-order J >> gamma asymptotics of the positive branch:
// delta_e = gamma/(2*sqrt(3)), u = (2/(3*sqrt(3))) gamma^3/J^2.
OptimalPoint optimal_approx(double J, double gamma);

// Residuals of the two interference conditions; both vanish exactly at the
// optimum.  first = gamma^2 (3 dE + u2) - 4 dE^2 (dE + u2) - 2 J^2 u2,
// second = 12 dE^2 + 8 dE u2 - gamma^2.
std::pair<double, double> condition_residuals(double delta_e, double u2, double J, double gamma);

// Delay of the first interior local minimum of a sampled curve, refined by a
// parabolic fit through the bracketing samples.  For a correlation trace
// that revives once per cycle this is the oscillation period.  The dip must
// stand out from its neighbours by at least 1e-6 of the curve's total
// amplitude, which rejects flat curves and roundoff ripple.  Throws
// SpecError for a malformed grid and SolveError when no qualifying minimum
// exists.
double oscillation_period(const std::vector<double>& taus, const std::vector<double>& values);

struct Window {
    double lo = 0.0;
    double hi = 0.0;
    bool found = false;

    double width() const { return hi - lo; }
    double center() const { return 0.5 * (lo + hi); }
};

// Contiguous parameter interval around the curve's minimum where it stays
// below `threshold`.  Edges are located by linear interpolation between the
// bracketing samples and clamped to the grid ends; found is false when even
// the minimum does not reach below the threshold.
Window sub_threshold_window(const std::vector<double>& xs, const std::vector<double>& values,
                            double threshold);

} // namespace pmol

#endif
