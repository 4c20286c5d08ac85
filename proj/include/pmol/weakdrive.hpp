#ifndef PMOL_WEAKDRIVE_HPP
#define PMOL_WEAKDRIVE_HPP

#include <cstddef>
#include <vector>

#include "pmol/models.hpp"

namespace pmol {

// Steady-state excitation amplitudes of the weak-pump ansatz.  The manifold
// holds every occupation vector with total excitation count <= n_exc (bosons
// capped by their n_max, two-level sites by 1), sorted by total excitation
// number and lexicographically within each block; the vacuum amplitude is
// fixed at 1.
struct AmplitudeVector {
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    int n_exc = 0;
    std::vector<std::vector<int>> manifold;
    std::vector<Complex> amps;

    std::size_t size() const { return manifold.size(); }
    std::size_t num_sites() const { return manifold.empty() ? 0 : manifold.front().size(); }

    // Index of an occupation vector, or npos when it lies outside the
    // manifold.  Throws SpecError if occ has the wrong number of sites.
    std::size_t find(const std::vector<int>& occ) const;

    // Amplitude of an occupation vector; 0 for states outside the manifold
    // (e.g. double occupation of a two-level site).
    Complex amp(const std::vector<int>& occ) const;
};

// Solves the block-triangular steady-state equations one excitation block at
// a time: within each block the effective non-Hermitian energies
// (detuning - i decay/2), Kerr shifts, hopping, and JC coupling act; the
// pump feeds each block from the one below it, and higher blocks never feed
// back.  Throws SpecError for an invalid spec, a spec without drives, or a
// manifold that would exceed the internal size limit; throws SolveError when
// an excitation block is singular.
AmplitudeVector solve_manifold(const SystemSpec& spec, int n_exc = 2);

// Equal-time second-order correlations in the weak-pump limit:
//   g2_ii = 2 |C(2 at i)|^2 / |C(1 at i)|^4
//   g2_ij = |C(1 at i, 1 at j)|^2 / (|C(1 at i)|^2 |C(1 at j)|^2)
// Throws SolveError when a one-excitation amplitude in the denominator
// vanishes.
double g2_from_amplitudes(const AmplitudeVector& av, std::size_t i, std::size_t j);

// Dimensionless double-occupation residual C_20 / (F C_10) of a two-mode
// molecule with a single driven mode; vanishes exactly when the interference
// conditions hold.
Complex c20_residual(const SystemSpec& spec);

} // namespace pmol

#endif
