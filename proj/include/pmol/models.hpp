#ifndef PMOL_MODELS_HPP
#define PMOL_MODELS_HPP

#include <string>
#include <vector>

#include "pmol/fock.hpp"

namespace pmol {

// Tunnel coupling J (a_i^dag a_j + h.c.). `group` tags related couplings so
// sweeps can address them together ("J", "J2", ...).
struct Hop {
    std::size_t i = 0;
    std::size_t j = 0;
    double strength = 0.0;
    std::string group = "J";
};

// Exchange coupling g (a_boson^dag sigma^-_two_level + h.c.)
struct JcCoupling {
    std::size_t boson = 0;
    std::size_t two_level = 0;
    double strength = 0.0;
};

// Coherent drive F a_site^dag + F^* a_site (rotating frame)
struct Drive {
    std::size_t site = 0;
    Complex amplitude{0.0, 0.0};
};

// Declarative description of a driven-dissipative mode graph. All energies
// and rates are in units of a reference linewidth gamma_ref with hbar = 1;
// detunings are measured from the pump (E_i - hbar*omega_p), which makes the
// rotating-frame Hamiltonian time-independent.
struct SystemSpec {
    std::vector<SiteKind> sites;
    std::vector<double> detuning; // per site; for a TwoLevel site: E_ex - hbar*omega_p
    std::vector<double> kerr;     // per site; must be 0 on TwoLevel sites
    std::vector<Hop> hops;
    std::vector<JcCoupling> jc;
    std::vector<Drive> drives;
    std::vector<double> decay; // per site, >= 0; at least one channel > 0

    // throws SpecError on any structural or range problem
    void validate() const;

    FockBasis basis(std::size_t max_dim = FockBasis::default_max_dim) const;

    std::size_t num_sites() const { return sites.size(); }

    // all boson cutoffs set to n_max (convergence re-runs)
    SystemSpec with_boson_cutoff(int n_max) const;
};

// Two tunnel-coupled Kerr modes, drive on mode 0 (the monitored one).
SystemSpec kerr_molecule(double delta_e, double u1, double u2, double J,
                         double gamma1, double gamma2, double F, int cutoff = 3);

// Linear cavity pair where the auxiliary cavity couples to a two-level
// emitter: sites [boson, boson, twolevel], drive on site 0.
SystemSpec cavity_jc_molecule(double delta_e1, double e2_minus_e1, double eex_minus_e2,
                              double J, double g, double gamma, double gamma_ex,
                              double F, int cutoff = 3);

// Reference system: one cavity + one two-level emitter, pump tuned to the
// lower one-particle eigenenergy of the dressed ladder.
SystemSpec single_jc_reference(double g, double eex_minus_e1, double gamma,
                               double gamma_ex, double F, int cutoff = 3);

// n_molecules two-mode molecules; the driven modes (even sites) are coupled
// in a cycle with strength J2 and share a common drive F.
SystemSpec ring_of_molecules(int n_molecules, double delta_e, double u, double J,
                             double J2, double gamma, double F, int cutoff = 3);

} // namespace pmol

#endif
