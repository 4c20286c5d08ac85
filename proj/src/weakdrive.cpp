#include "pmol/weakdrive.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "pmol/errors.hpp"

namespace pmol {

namespace {

constexpr std::size_t max_manifold_states = 1u << 20;

int total_excitation(const std::vector<int>& occ)
{
    return std::accumulate(occ.begin(), occ.end(), 0);
}

bool manifold_less(const std::vector<int>& a, const std::vector<int>& b)
{
    const int ta = total_excitation(a);
    const int tb = total_excitation(b);
    if (ta != tb)
        return ta < tb;
    return a < b;
}

int site_cap(const SiteKind& kind)
{
    return kind.is_boson() ? kind.n_max : 1;
}

// Matrix element of the raising operator taking occupation `occ` to `occ+1`
// at a site of the given kind; 0 when the step is forbidden.
double raise_amp(const SiteKind& kind, int occ)
{
    if (occ + 1 > site_cap(kind))
        return 0.0;
    return kind.is_boson() ? std::sqrt(static_cast<double>(occ + 1)) : 1.0;
}

// Matrix element of the lowering operator taking `occ` to `occ-1`.
double lower_amp(const SiteKind& kind, int occ)
{
    if (occ < 1)
        return 0.0;
    return kind.is_boson() ? std::sqrt(static_cast<double>(occ)) : 1.0;
}

void enumerate_manifold(const SystemSpec& spec, int n_exc, std::vector<int>& occ,
                        std::size_t site, int used,
                        std::vector<std::vector<int>>& out)
{
    if (site == spec.sites.size()) {
        if (out.size() >= max_manifold_states)
            throw SpecError("excitation manifold exceeds "
                            + std::to_string(max_manifold_states) + " states");
        out.push_back(occ);
        return;
    }
    const int cap = std::min(site_cap(spec.sites[site]), n_exc - used);
    for (int k = 0; k <= cap; ++k) {
        occ[site] = k;
        enumerate_manifold(spec, n_exc, occ, site + 1, used + k, out);
    }
    occ[site] = 0;
}

// Couples |occ> to |occ - e_from + e_to> within one excitation block,
// accumulating strength * <target| a_to^dag a_from |occ> into the matrix.
void add_transfer(Eigen::MatrixXcd& M, const SystemSpec& spec,
                  const std::vector<std::vector<int>>& block,
                  const std::vector<int>& occ, std::size_t col,
                  std::size_t from, std::size_t to, Complex strength)
{
    const double down = lower_amp(spec.sites[from], occ[from]);
    if (down == 0.0)
        return;
    std::vector<int> target = occ;
    --target[from];
    const double up = raise_amp(spec.sites[to], target[to]);
    if (up == 0.0)
        return;
    ++target[to];
    const auto it = std::lower_bound(block.begin(), block.end(), target);
    if (it == block.end() || *it != target)
        throw SolveError("internal: transfer target missing from excitation block");
    const std::size_t row = static_cast<std::size_t>(it - block.begin());
    M(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += strength * down * up;
}

} // namespace

std::size_t AmplitudeVector::find(const std::vector<int>& occ) const
{
    if (occ.size() != num_sites())
        throw SpecError("occupation vector has wrong number of sites");
    const auto it = std::lower_bound(manifold.begin(), manifold.end(), occ, manifold_less);
    if (it == manifold.end() || *it != occ)
        return npos;
    return static_cast<std::size_t>(it - manifold.begin());
}

Complex AmplitudeVector::amp(const std::vector<int>& occ) const
{
    const std::size_t k = find(occ);
    return k == npos ? Complex(0.0, 0.0) : amps[k];
}

AmplitudeVector solve_manifold(const SystemSpec& spec, int n_exc)
{
    spec.validate();
    if (n_exc < 1)
        throw SpecError("solve_manifold needs n_exc >= 1");
    if (spec.drives.empty())
        throw SpecError("solve_manifold needs at least one drive");

    AmplitudeVector av;
    av.n_exc = n_exc;
    std::vector<int> occ(spec.sites.size(), 0);
    enumerate_manifold(spec, n_exc, occ, 0, 0, av.manifold);
    std::sort(av.manifold.begin(), av.manifold.end(), manifold_less);
    av.amps.assign(av.manifold.size(), Complex(0.0, 0.0));
    av.amps[0] = Complex(1.0, 0.0); // vacuum

    std::size_t block_begin = 1; // states with total excitation == n start here
    for (int n = 1; n <= n_exc; ++n) {
        std::size_t block_end = block_begin;
        while (block_end < av.manifold.size()
               && total_excitation(av.manifold[block_end]) == n)
            ++block_end;
        const std::size_t m = block_end - block_begin;
        if (m == 0)
            break; // caps exhausted; higher blocks are empty too
        const std::vector<std::vector<int>> block(av.manifold.begin() + block_begin,
                                                  av.manifold.begin() + block_end);

        Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(m, m);
        Eigen::VectorXcd b = Eigen::VectorXcd::Zero(m);
        for (std::size_t c = 0; c < m; ++c) {
            const std::vector<int>& state = block[c];
            Complex diag(0.0, 0.0);
            for (std::size_t s = 0; s < spec.sites.size(); ++s) {
                const double k = state[s];
                diag += Complex(spec.detuning[s] * k + spec.kerr[s] * k * (k - 1.0),
                                -0.5 * spec.decay[s] * k);
            }
            M(c, c) += diag;
            for (const Hop& h : spec.hops) {
                add_transfer(M, spec, block, state, c, h.i, h.j, Complex(h.strength, 0.0));
                add_transfer(M, spec, block, state, c, h.j, h.i, Complex(h.strength, 0.0));
            }
            for (const JcCoupling& jc : spec.jc) {
                add_transfer(M, spec, block, state, c, jc.two_level, jc.boson,
                             Complex(jc.strength, 0.0));
                add_transfer(M, spec, block, state, c, jc.boson, jc.two_level,
                             Complex(jc.strength, 0.0));
            }
        }
        // Pump feeding from the (n-1)-excitation block.
        for (std::size_t r = 0; r < m; ++r) {
            std::vector<int> state = block[r];
            for (const Drive& d : spec.drives) {
                if (state[d.site] < 1)
                    continue;
                --state[d.site];
                const double up = raise_amp(spec.sites[d.site], state[d.site]);
                b(static_cast<Eigen::Index>(r)) -= d.amplitude * up * av.amp(state);
                ++state[d.site];
            }
        }

        Eigen::FullPivLU<Eigen::MatrixXcd> lu(M);
        if (!lu.isInvertible())
            throw SolveError("singular " + std::to_string(n)
                             + "-excitation block in the weak-pump solve");
        const Eigen::VectorXcd x = lu.solve(b);
        for (std::size_t r = 0; r < m; ++r)
            av.amps[block_begin + r] = x(static_cast<Eigen::Index>(r));
        block_begin = block_end;
    }
    return av;
}

double g2_from_amplitudes(const AmplitudeVector& av, std::size_t i, std::size_t j)
{
    const std::size_t n = av.num_sites();
    if (i >= n || j >= n)
        throw SpecError("g2 mode index out of range");

    std::vector<int> occ(n, 0);
    occ[i] = 1;
    const double pi = std::norm(av.amp(occ));
    occ[i] = 0;
    occ[j] = 1;
    const double pj = std::norm(av.amp(occ));
    if (pi == 0.0 || pj == 0.0)
        throw SolveError("one-excitation amplitude vanishes; g2 undefined");

    occ[j] = 0;
    if (i == j) {
        occ[i] = 2;
        return 2.0 * std::norm(av.amp(occ)) / (pi * pi);
    }
    occ[i] = 1;
    occ[j] = 1;
    return std::norm(av.amp(occ)) / (pi * pj);
}

Complex c20_residual(const SystemSpec& spec)
{
    if (spec.sites.size() != 2 || !spec.sites[0].is_boson() || !spec.sites[1].is_boson())
        throw SpecError("c20_residual expects a two-mode bosonic molecule");
    if (spec.drives.size() != 1)
        throw SpecError("c20_residual expects exactly one driven mode");
    const std::size_t d = spec.drives[0].site;
    if (spec.sites[d].n_max < 2)
        throw SpecError("c20_residual needs n_max >= 2 on the driven mode");

    const AmplitudeVector av = solve_manifold(spec, 2);
    std::vector<int> occ(2, 0);
    occ[d] = 1;
    const Complex c10 = av.amp(occ);
    occ[d] = 2;
    const Complex c20 = av.amp(occ);
    const Complex denom = spec.drives[0].amplitude * c10;
    if (denom == Complex(0.0, 0.0))
        throw SolveError("driven-mode amplitude vanishes; residual undefined");
    return c20 / denom;
}

} // namespace pmol
