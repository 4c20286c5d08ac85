#include "pmol/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pmol/errors.hpp"

namespace pmol {

namespace {

void check_positive(double J, double gamma)
{
    if (!(J > 0.0) || !(gamma > 0.0))
        throw SpecError("optimal conditions need J > 0 and gamma > 0");
}

} // namespace

OptimalBranches optimal_exact(double J, double gamma)
{
    check_positive(J, gamma);
    OptimalBranches out;
    out.plus.branch = +1;
    out.minus.branch = -1;

    const double J2 = J * J;
    const double g2 = gamma * gamma;
    if (!(2.0 * J2 > g2))
        return out; // boundary or below: zero detuning / divergent u

    const double root = std::sqrt(9.0 * J2 * J2 + 8.0 * g2 * J2);
    const double arg = std::max(0.0, root - g2 - 3.0 * J2);
    const double delta_e = 0.5 * std::sqrt(arg);
    const double u = delta_e * (5.0 * g2 + 4.0 * delta_e * delta_e) / (2.0 * (2.0 * J2 - g2));

    out.plus.delta_e = delta_e;
    out.plus.u = u;
    out.plus.feasible = true;
    out.minus.delta_e = -delta_e;
    out.minus.u = -u;
    out.minus.feasible = true;
    return out;
}

OptimalPoint optimal_approx(double J, double gamma)
{
    check_positive(J, gamma);
    OptimalPoint out;
    const double sqrt3 = std::sqrt(3.0);
    out.delta_e = gamma / (2.0 * sqrt3);
    out.u = 2.0 * gamma * gamma * gamma / (3.0 * sqrt3 * J * J);
    out.branch = +1;
    out.feasible = true;
    return out;
}

std::pair<double, double> condition_residuals(double delta_e, double u2, double J, double gamma)
{
    const double g2 = gamma * gamma;
    const double first = g2 * (3.0 * delta_e + u2) - 4.0 * delta_e * delta_e * (delta_e + u2)
        - 2.0 * J * J * u2;
    const double second = 12.0 * delta_e * delta_e + 8.0 * delta_e * u2 - g2;
    return {first, second};
}

namespace {

void check_curve(const std::vector<double>& xs, const std::vector<double>& values,
                 std::size_t min_points, const char* what)
{
    if (xs.size() != values.size())
        throw SpecError(std::string(what) + ": grid and values differ in length");
    if (xs.size() < min_points)
        throw SpecError(std::string(what) + ": needs at least "
                        + std::to_string(min_points) + " samples");
    for (std::size_t k = 1; k < xs.size(); ++k)
        if (!(xs[k] > xs[k - 1]))
            throw SpecError(std::string(what) + ": grid must be strictly increasing");
}

} // namespace

double oscillation_period(const std::vector<double>& taus, const std::vector<double>& values)
{
    check_curve(taus, values, 3, "oscillation_period");

    double lo = values[0];
    double hi = values[0];
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double prominence = 1e-6 * (hi - lo);

    for (std::size_t k = 1; k + 1 < values.size(); ++k) {
        const double vl = values[k - 1];
        const double vc = values[k];
        const double vr = values[k + 1];
        if (!(vc <= vl && vc <= vr))
            continue;
        if (std::max(vl, vr) - vc <= prominence)
            continue;
        // vertex of the parabola through the three bracketing samples
        // (Newton form: q(x) = vl + dl (x - x_{k-1}) + c (x - x_{k-1})(x - x_k))
        const double hl = taus[k] - taus[k - 1];
        const double hr = taus[k + 1] - taus[k];
        const double dl = (vc - vl) / hl;
        const double dr = (vr - vc) / hr;
        const double curvature = (dr - dl) / (hl + hr);
        if (curvature <= 0.0)
            return taus[k];
        return taus[k] - 0.5 * hl - dl / (2.0 * curvature);
    }
    throw SolveError("oscillation_period: no interior minimum with the required prominence");
}

Window sub_threshold_window(const std::vector<double>& xs, const std::vector<double>& values,
                            double threshold)
{
    check_curve(xs, values, 2, "sub_threshold_window");

    std::size_t k0 = 0;
    for (std::size_t k = 1; k < values.size(); ++k)
        if (values[k] < values[k0])
            k0 = k;

    Window w;
    if (!(values[k0] < threshold))
        return w;
    w.found = true;

    std::size_t left = k0;
    while (left > 0 && values[left - 1] < threshold)
        --left;
    if (left == 0)
        w.lo = xs.front();
    else
        w.lo = xs[left - 1]
            + (threshold - values[left - 1]) * (xs[left] - xs[left - 1])
                / (values[left] - values[left - 1]);

    std::size_t right = k0;
    while (right + 1 < values.size() && values[right + 1] < threshold)
        ++right;
    if (right + 1 == values.size())
        w.hi = xs.back();
    else
        w.hi = xs[right]
            + (threshold - values[right]) * (xs[right + 1] - xs[right])
                / (values[right + 1] - values[right]);
    return w;
}

} // namespace pmol
