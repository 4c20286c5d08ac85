#ifndef PMOL_DYNAMICS_HPP
#define PMOL_DYNAMICS_HPP

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "pmol/fock.hpp"
#include "pmol/models.hpp"

namespace pmol {

struct Collapse {
    SparseOperator op;
    double rate = 0.0;
};

// Rotating-frame generator of the master equation
//   d rho/dt = -i [H, rho] + sum_c rate_c (c rho c^dag - 1/2 {c^dag c, rho}).
// The rate convention makes a single empty mode respond with amplitude
// 1/(detuning - i rate/2).
struct Liouvillian {
    FockBasis basis;
    SparseOperator hamiltonian;
    std::vector<Collapse> collapse;

    std::size_t dim() const { return basis.dim(); }
};

// H = sum_s [detuning_s n_s + kerr_s n_s(n_s-1)] + hops + JC + drives, with
// one decay channel per site with a positive rate.  Throws SpecError for an
// invalid spec and SolveError if the assembled H fails its Hermiticity check
// (relative max-entry tolerance 1e-12).
Liouvillian build_liouvillian(const SystemSpec& spec);

struct DensityState {
    FockBasis basis;
    Eigen::MatrixXcd rho;

    double hermiticity_error() const; // max-entry norm of rho - rho^dag
    Complex trace() const;
    double min_eigenvalue() const;    // most negative eigenvalue of the Hermitian part
    void renormalize();               // hermitize and scale to unit trace
};

DensityState vacuum_state(const FockBasis& basis);

enum class SteadyMethod { Auto, Direct, Evolve };

// Direct solves are limited to this many vectorized unknowns (dim^2); Auto
// switches to Evolve above it, and an explicit Direct request fails.
inline constexpr std::size_t direct_unknown_limit = 4'000'000;

struct EvolveOptions {
    double rtol = 1e-9;            // relative accuracy of the adaptive stepper
    double atol = 1e-19;           // absolute floor, far below any physical scale here
    double trace_drift_tol = 1e-9; // per-step trace change that forces a retry
    double tol_ss = 1e-10;         // steady-state residual: entrywise 1-norm of d rho/dt
    double max_time = 1e5;         // give up on steady-state convergence past this
    std::size_t max_steps = 50'000'000;
};

// Steady state of the Liouvillian.  Direct replaces one row of the
// vectorized generator with the trace constraint and factorizes; a singular
// factorization reports a non-unique steady manifold.  Evolve integrates
// from the vacuum until the residual drops below tol_ss.  Either way the
// result is hermitized and trace-normalized.
DensityState steady_state(const Liouvillian& L, SteadyMethod method = SteadyMethod::Auto,
                          const EvolveOptions& opts = {});

// Entrywise 1-norm of d rho/dt at the given state; the steady state keeps
// this below 10 * tol_ss.
double residual_l1(const Liouvillian& L, const DensityState& state);

// Tr(op rho)
Complex expectation(const DensityState& state, const SparseOperator& op);

// <n_site> (real part; the matrix is Hermitian up to solver tolerance)
double mode_occupation(const DensityState& state, std::size_t site);

// g2_ij = <adag_i adag_j a_j a_i> / (<n_i> <n_j>) for Boson modes i, j.
// Throws SolveError when an occupation in the denominator vanishes or the
// numerator keeps an imaginary residue above 1e-10.
double g2_equal_time(const DensityState& state, std::size_t i, std::size_t j);

// Two-time correlation of mode i via the quantum regression theorem:
// propagate a_i rho_ss a_i^dag and read out <n_i> at each requested delay.
// tau_grid must be nondecreasing and start at >= 0.
std::vector<double> g2_two_time(const Liouvillian& L, const DensityState& rho_ss,
                                std::size_t i, const std::vector<double>& tau_grid,
                                const EvolveOptions& opts = {});

// Integrate the master equation for a fixed duration.
DensityState propagate(const Liouvillian& L, const DensityState& initial, double duration,
                       const EvolveOptions& opts = {});

} // namespace pmol

#endif
