#ifndef PMOL_FOCK_HPP
#define PMOL_FOCK_HPP

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "pmol/errors.hpp"

namespace pmol {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using Triplet = Eigen::Triplet<Complex>;

// One site of the product space: a bosonic mode truncated at n_max photons,
// or a two-level system (ground/excited).
struct SiteKind {
    enum class Kind { Boson, TwoLevel };

    Kind kind = Kind::Boson;
    int n_max = 1; // Boson only: largest photon number kept

    static SiteKind boson(int n_max)
    {
        if (n_max < 1)
            throw SpecError("boson cutoff must be >= 1, got " + std::to_string(n_max));
        return SiteKind{Kind::Boson, n_max};
    }
    static SiteKind two_level() { return SiteKind{Kind::TwoLevel, 1}; }

    bool is_boson() const { return kind == Kind::Boson; }
    int local_dim() const { return is_boson() ? n_max + 1 : 2; }

    bool operator==(const SiteKind &o) const
    {
        return kind == o.kind && local_dim() == o.local_dim();
    }
};

// Truncated product Fock basis. Multi-indices (n_1,...,n_S) are ordered
// lexicographically with the last site fastest, so the flat index is
//   flat = n_1*stride_1 + ... + n_S  with  stride_S = 1.
// The ordering is fixed: serialized operators and CSVs must be bit-stable.
class FockBasis {
public:
    static constexpr std::size_t default_max_dim = 16384;

    explicit FockBasis(std::vector<SiteKind> sites,
                       std::size_t max_dim = default_max_dim);

    std::size_t dim() const { return dim_; }
    std::size_t num_sites() const { return sites_.size(); }
    const SiteKind &site(std::size_t s) const { return sites_[s]; }
    const std::vector<SiteKind> &sites() const { return sites_; }

    std::size_t flat_index(std::span<const int> occupation) const;
    std::vector<int> occupation(std::size_t flat) const;
    // occupation of one site in the given flat state
    int occupation_of(std::size_t flat, std::size_t site) const;

    // e.g. "boson(3) boson(3) twolevel" -- used in dump headers
    std::string signature() const;

    bool operator==(const FockBasis &o) const { return sites_ == o.sites_; }

private:
    std::vector<SiteKind> sites_;
    std::vector<std::size_t> strides_;
    std::size_t dim_ = 0;
};

// Complex sparse matrix tied to a FockBasis. Immutable after construction;
// the canonical form has column-major compressed storage with exact zeros
// pruned, so equal operators have equal entry lists.
class SparseOperator {
public:
    SparseOperator(FockBasis basis, SparseMatrix mat);

    static SparseOperator zero(const FockBasis &basis);
    static SparseOperator identity(const FockBasis &basis);
    static SparseOperator from_triplets(const FockBasis &basis,
                                        const std::vector<Triplet> &entries);

    const FockBasis &basis() const { return basis_; }
    const SparseMatrix &matrix() const { return mat_; }
    std::size_t dim() const { return basis_.dim(); }

    SparseOperator adjoint() const;
    long nonzeros() const { return mat_.nonZeros(); }

    // coordinate entries sorted by (row, col); exact zeros absent
    std::vector<Triplet> entries() const;

    // max |entry|; 0 for an empty operator
    double max_abs() const;

    friend SparseOperator operator+(const SparseOperator &a, const SparseOperator &b);
    friend SparseOperator operator-(const SparseOperator &a, const SparseOperator &b);
    friend SparseOperator operator*(const SparseOperator &a, const SparseOperator &b);
    friend SparseOperator operator*(Complex s, const SparseOperator &a);

private:
    FockBasis basis_;
    SparseMatrix mat_;
};

SparseOperator commutator(const SparseOperator &a, const SparseOperator &b);

// Ladder operators. annihilation/creation require a Boson site,
// lowering/raising a TwoLevel site; number_op works on either
// (a^dag a, or the excited-state projector).
SparseOperator annihilation(const FockBasis &basis, std::size_t site);
SparseOperator creation(const FockBasis &basis, std::size_t site);
SparseOperator lowering(const FockBasis &basis, std::size_t site);
SparseOperator raising(const FockBasis &basis, std::size_t site);
SparseOperator number_op(const FockBasis &basis, std::size_t site);

// Coordinate text dump: `# basis: <signature>` header, then one
// `row col re im` line per entry in canonical order.
void dump_operator(std::ostream &os, const SparseOperator &op);

} // namespace pmol

#endif
