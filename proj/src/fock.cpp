#include "pmol/fock.hpp"

#include <algorithm>
#include <cassert>
#include <ostream>

#include "pmol/format.hpp"

namespace pmol {

FockBasis::FockBasis(std::vector<SiteKind> sites, std::size_t max_dim)
    : sites_(std::move(sites))
{
    if (sites_.empty())
        throw SpecError("FockBasis requires at least one site");
    // last site fastest: strides built right to left
    strides_.assign(sites_.size(), 1);
    std::size_t dim = 1;
    for (std::size_t s = sites_.size(); s-- > 0;) {
        strides_[s] = dim;
        const std::size_t local = static_cast<std::size_t>(sites_[s].local_dim());
        if (dim > max_dim / local)
            throw SpecError("basis dimension exceeds limit " + std::to_string(max_dim)
                            + " (requires at least " + std::to_string(dim * local)
                            + "); raise max_dim or lower cutoffs");
        dim *= local;
    }
    dim_ = dim;
}

std::size_t FockBasis::flat_index(std::span<const int> occupation) const
{
    assert(occupation.size() == sites_.size());
    std::size_t flat = 0;
    for (std::size_t s = 0; s < sites_.size(); ++s) {
        assert(occupation[s] >= 0 && occupation[s] < sites_[s].local_dim());
        flat += static_cast<std::size_t>(occupation[s]) * strides_[s];
    }
    return flat;
}

std::vector<int> FockBasis::occupation(std::size_t flat) const
{
    assert(flat < dim_);
    std::vector<int> occ(sites_.size());
    for (std::size_t s = 0; s < sites_.size(); ++s) {
        occ[s] = static_cast<int>(flat / strides_[s]);
        flat %= strides_[s];
    }
    return occ;
}

int FockBasis::occupation_of(std::size_t flat, std::size_t site) const
{
    assert(flat < dim_ && site < sites_.size());
    return static_cast<int>((flat / strides_[site])
                            % static_cast<std::size_t>(sites_[site].local_dim()));
}

std::string FockBasis::signature() const
{
    std::string sig;
    for (std::size_t s = 0; s < sites_.size(); ++s) {
        if (s)
            sig += ' ';
        if (sites_[s].is_boson())
            sig += "boson(" + std::to_string(sites_[s].n_max) + ")";
        else
            sig += "twolevel";
    }
    return sig;
}

namespace {

SparseMatrix canonicalize(SparseMatrix m)
{
    m.prune([](const SparseMatrix::StorageIndex &, const SparseMatrix::StorageIndex &,
               const Complex &v) { return v != Complex(0.0, 0.0); });
    m.makeCompressed();
    return m;
}

void check_same_basis(const SparseOperator &a, const SparseOperator &b)
{
    if (!(a.basis() == b.basis()))
        throw SpecError("operator algebra on mismatched bases: " + a.basis().signature()
                        + " vs " + b.basis().signature());
}

void check_site(const FockBasis &basis, std::size_t site, bool want_boson, const char *what)
{
    if (site >= basis.num_sites())
        throw SpecError(std::string(what) + ": site " + std::to_string(site)
                        + " out of range (have " + std::to_string(basis.num_sites()) + " sites)");
    if (basis.site(site).is_boson() != want_boson)
        throw SpecError(std::string(what) + ": site " + std::to_string(site)
                        + (want_boson ? " is not a boson mode (use lowering)"
                                      : " is not a two-level site (use annihilation)"));
}

// Generic one-site ladder operator embedded in the product space: matrix
// element amp(n) between local occupations n-1 <- n, identity elsewhere.
template <typename AmpFn>
SparseOperator site_lowering(const FockBasis &basis, std::size_t site, AmpFn amp)
{
    std::vector<Triplet> trips;
    const std::size_t dim = basis.dim();
    for (std::size_t col = 0; col < dim; ++col) {
        const int n = basis.occupation_of(col, site);
        if (n == 0)
            continue;
        auto occ = basis.occupation(col);
        occ[site] = n - 1;
        const std::size_t row = basis.flat_index(occ);
        trips.emplace_back(static_cast<int>(row), static_cast<int>(col), Complex(amp(n), 0.0));
    }
    return SparseOperator::from_triplets(basis, trips);
}

} // namespace

SparseOperator::SparseOperator(FockBasis basis, SparseMatrix mat)
    : basis_(std::move(basis)), mat_(canonicalize(std::move(mat)))
{
    assert(mat_.rows() == static_cast<Eigen::Index>(basis_.dim())
           && mat_.cols() == static_cast<Eigen::Index>(basis_.dim()));
}

SparseOperator SparseOperator::zero(const FockBasis &basis)
{
    const auto n = static_cast<Eigen::Index>(basis.dim());
    return SparseOperator(basis, SparseMatrix(n, n));
}

SparseOperator SparseOperator::identity(const FockBasis &basis)
{
    const auto n = static_cast<Eigen::Index>(basis.dim());
    SparseMatrix m(n, n);
    m.setIdentity();
    return SparseOperator(basis, std::move(m));
}

SparseOperator SparseOperator::from_triplets(const FockBasis &basis,
                                             const std::vector<Triplet> &entries)
{
    const auto n = static_cast<Eigen::Index>(basis.dim());
    SparseMatrix m(n, n);
    m.setFromTriplets(entries.begin(), entries.end()); // duplicates summed
    return SparseOperator(basis, std::move(m));
}

SparseOperator SparseOperator::adjoint() const
{
    return SparseOperator(basis_, SparseMatrix(mat_.adjoint()));
}

std::vector<Triplet> SparseOperator::entries() const
{
    std::vector<Triplet> out;
    out.reserve(static_cast<std::size_t>(mat_.nonZeros()));
    for (int k = 0; k < mat_.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(mat_, k); it; ++it)
            out.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    std::sort(out.begin(), out.end(), [](const Triplet &a, const Triplet &b) {
        return a.row() != b.row() ? a.row() < b.row() : a.col() < b.col();
    });
    return out;
}

double SparseOperator::max_abs() const
{
    double m = 0.0;
    for (int k = 0; k < mat_.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(mat_, k); it; ++it)
            m = std::max(m, std::abs(it.value()));
    return m;
}

SparseOperator operator+(const SparseOperator &a, const SparseOperator &b)
{
    check_same_basis(a, b);
    return SparseOperator(a.basis_, SparseMatrix(a.mat_ + b.mat_));
}

SparseOperator operator-(const SparseOperator &a, const SparseOperator &b)
{
    check_same_basis(a, b);
    return SparseOperator(a.basis_, SparseMatrix(a.mat_ - b.mat_));
}

SparseOperator operator*(const SparseOperator &a, const SparseOperator &b)
{
    check_same_basis(a, b);
    return SparseOperator(a.basis_, SparseMatrix(a.mat_ * b.mat_));
}

SparseOperator operator*(Complex s, const SparseOperator &a)
{
    return SparseOperator(a.basis_, SparseMatrix(s * a.mat_));
}

SparseOperator commutator(const SparseOperator &a, const SparseOperator &b)
{
    check_same_basis(a, b);
    return SparseOperator(a.basis(), SparseMatrix(a.matrix() * b.matrix() - b.matrix() * a.matrix()));
}

SparseOperator annihilation(const FockBasis &basis, std::size_t site)
{
    check_site(basis, site, true, "annihilation");
    return site_lowering(basis, site, [](int n) { return std::sqrt(double(n)); });
}

SparseOperator creation(const FockBasis &basis, std::size_t site)
{
    return annihilation(basis, site).adjoint();
}

SparseOperator lowering(const FockBasis &basis, std::size_t site)
{
    check_site(basis, site, false, "lowering");
    return site_lowering(basis, site, [](int) { return 1.0; });
}

SparseOperator raising(const FockBasis &basis, std::size_t site)
{
    return lowering(basis, site).adjoint();
}

SparseOperator number_op(const FockBasis &basis, std::size_t site)
{
    if (site >= basis.num_sites())
        throw SpecError("number_op: site " + std::to_string(site) + " out of range");
    std::vector<Triplet> trips;
    for (std::size_t k = 0; k < basis.dim(); ++k) {
        const int n = basis.occupation_of(k, site);
        if (n > 0)
            trips.emplace_back(static_cast<int>(k), static_cast<int>(k), Complex(n, 0.0));
    }
    return SparseOperator::from_triplets(basis, trips);
}

void dump_operator(std::ostream &os, const SparseOperator &op)
{
    os << "# basis: " << op.basis().signature() << "\n";
    os << "# dim: " << op.dim() << "\n";
    for (const auto &t : op.entries())
        os << t.row() << ' ' << t.col() << ' ' << fmt_g17(t.value().real()) << ' '
           << fmt_g17(t.value().imag()) << "\n";
}

} // namespace pmol
