#include "pmol/models.hpp"

#include <cmath>
#include <set>

namespace pmol {

namespace {

void require(bool ok, const std::string &msg)
{
    if (!ok)
        throw SpecError(msg);
}

void check_finite(double x, const char *what)
{
    require(std::isfinite(x), std::string(what) + " must be finite");
}

} // namespace

void SystemSpec::validate() const
{
    require(!sites.empty(), "spec has no sites");
    const std::size_t n = sites.size();
    require(detuning.size() == n, "detuning list size != number of sites");
    require(kerr.size() == n, "kerr list size != number of sites");
    require(decay.size() == n, "decay list size != number of sites");

    for (std::size_t s = 0; s < n; ++s) {
        check_finite(detuning[s], "detuning");
        check_finite(kerr[s], "kerr");
        check_finite(decay[s], "decay");
        require(decay[s] >= 0.0, "decay rate on site " + std::to_string(s) + " is negative");
        if (!sites[s].is_boson())
            require(kerr[s] == 0.0,
                    "kerr nonlinearity on two-level site " + std::to_string(s));
    }

    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto &h : hops) {
        require(h.i < n && h.j < n, "hop references site out of range");
        require(h.i != h.j, "hop connects a site to itself");
        check_finite(h.strength, "hop strength");
        const auto key = std::minmax(h.i, h.j);
        require(seen.insert(key).second,
                "duplicate hop between sites " + std::to_string(h.i) + " and "
                    + std::to_string(h.j));
    }
    for (const auto &c : jc) {
        require(c.boson < n && c.two_level < n, "jc coupling references site out of range");
        require(c.boson != c.two_level, "jc coupling connects a site to itself");
        require(sites[c.boson].is_boson(), "jc boson side is not a boson mode");
        require(!sites[c.two_level].is_boson(), "jc emitter side is not a two-level site");
        check_finite(c.strength, "jc strength");
    }
    for (const auto &d : drives) {
        require(d.site < n, "drive references site out of range");
        require(sites[d.site].is_boson(), "drive on a two-level site is unsupported");
        check_finite(d.amplitude.real(), "drive amplitude");
        check_finite(d.amplitude.imag(), "drive amplitude");
    }

    bool any_decay = false;
    for (double g : decay)
        any_decay = any_decay || g > 0.0;
    require(any_decay, "spec has no decay channel; steady state would not be unique");
}

FockBasis SystemSpec::basis(std::size_t max_dim) const
{
    return FockBasis(sites, max_dim);
}

SystemSpec SystemSpec::with_boson_cutoff(int n_max) const
{
    SystemSpec out = *this;
    for (auto &s : out.sites)
        if (s.is_boson())
            s = SiteKind::boson(n_max);
    return out;
}

SystemSpec kerr_molecule(double delta_e, double u1, double u2, double J,
                         double gamma1, double gamma2, double F, int cutoff)
{
    SystemSpec spec;
    spec.sites = {SiteKind::boson(cutoff), SiteKind::boson(cutoff)};
    spec.detuning = {delta_e, delta_e};
    spec.kerr = {u1, u2};
    spec.hops = {{0, 1, J, "J"}};
    spec.drives = {{0, Complex(F, 0.0)}};
    spec.decay = {gamma1, gamma2};
    spec.validate();
    return spec;
}

SystemSpec cavity_jc_molecule(double delta_e1, double e2_minus_e1, double eex_minus_e2,
                              double J, double g, double gamma, double gamma_ex,
                              double F, int cutoff)
{
    SystemSpec spec;
    spec.sites = {SiteKind::boson(cutoff), SiteKind::boson(cutoff), SiteKind::two_level()};
    spec.detuning = {delta_e1, delta_e1 + e2_minus_e1, delta_e1 + e2_minus_e1 + eex_minus_e2};
    spec.kerr = {0.0, 0.0, 0.0};
    spec.hops = {{0, 1, J, "J"}};
    spec.jc = {{1, 2, g}};
    spec.drives = {{0, Complex(F, 0.0)}};
    spec.decay = {gamma, gamma, gamma_ex};
    spec.validate();
    return spec;
}

SystemSpec single_jc_reference(double g, double eex_minus_e1, double gamma,
                               double gamma_ex, double F, int cutoff)
{
    // pump at the lower one-particle eigenenergy:
    //   E_mp = E_1 + d/2 - sqrt(d^2/4 + g^2),  d = E_ex - E_1
    const double half_d = 0.5 * eex_minus_e1;
    const double delta_e1 = std::sqrt(half_d * half_d + g * g) - half_d;
    SystemSpec spec;
    spec.sites = {SiteKind::boson(cutoff), SiteKind::two_level()};
    spec.detuning = {delta_e1, delta_e1 + eex_minus_e1};
    spec.kerr = {0.0, 0.0};
    spec.jc = {{0, 1, g}};
    spec.drives = {{0, Complex(F, 0.0)}};
    spec.decay = {gamma, gamma_ex};
    spec.validate();
    return spec;
}

SystemSpec ring_of_molecules(int n_molecules, double delta_e, double u, double J,
                             double J2, double gamma, double F, int cutoff)
{
    if (n_molecules < 2)
        throw SpecError("ring needs at least 2 molecules");
    SystemSpec spec;
    const std::size_t m = static_cast<std::size_t>(n_molecules);
    for (std::size_t k = 0; k < m; ++k) {
        // driven mode 2k, auxiliary mode 2k+1
        spec.sites.push_back(SiteKind::boson(cutoff));
        spec.sites.push_back(SiteKind::boson(cutoff));
        spec.detuning.insert(spec.detuning.end(), {delta_e, delta_e});
        spec.kerr.insert(spec.kerr.end(), {u, u});
        spec.decay.insert(spec.decay.end(), {gamma, gamma});
        spec.hops.push_back({2 * k, 2 * k + 1, J, "J"});
        spec.drives.push_back({2 * k, Complex(F, 0.0)});
    }
    // cycle among the driven modes; for two molecules it is a single edge
    const std::size_t n_cycle = (m == 2) ? 1 : m;
    for (std::size_t k = 0; k < n_cycle; ++k)
        spec.hops.push_back({2 * k, 2 * ((k + 1) % m), J2, "J2"});
    spec.validate();
    return spec;
}

} // namespace pmol
