#include "pmol/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/SparseLU>

#include "pmol/errors.hpp"

namespace pmol {

namespace {

SparseOperator site_lower(const FockBasis& basis, std::size_t s)
{
    return basis.site(s).is_boson() ? annihilation(basis, s) : lowering(basis, s);
}

SparseOperator site_raise(const FockBasis& basis, std::size_t s)
{
    return basis.site(s).is_boson() ? creation(basis, s) : raising(basis, s);
}

void check_same_basis(const FockBasis& a, const FockBasis& b, const char* what)
{
    if (!(a == b))
        throw SpecError(std::string(what) + ": basis mismatch");
}

// Right-hand side of the master equation in non-Hermitian form,
//   d rho/dt = -i (A rho - rho A^dag) + sum_c rate_c c rho c^dag
// with A = H - (i/2) sum_c rate_c c^dag c.
class MasterRhs {
public:
    explicit MasterRhs(const Liouvillian& L)
    {
        SparseOperator a_op = L.hamiltonian;
        for (const Collapse& c : L.collapse) {
            if (c.rate == 0.0)
                continue;
            a_op = a_op + Complex(0.0, -0.5 * c.rate) * (c.op.adjoint() * c.op);
            jumps_.push_back({c.op.matrix(),
                              SparseMatrix(Complex(c.rate, 0.0) * c.op.matrix().adjoint())});
        }
        neg_i_a_ = (Complex(0.0, -1.0) * a_op).matrix();
        pos_i_a_adj_ = (Complex(0.0, 1.0) * a_op.adjoint()).matrix();
        tmp_.resize(L.dim(), L.dim());
    }

    void operator()(const Eigen::MatrixXcd& y, Eigen::MatrixXcd& f) const
    {
        f.noalias() = neg_i_a_ * y;
        f.noalias() += y * pos_i_a_adj_;
        for (const Jump& j : jumps_) {
            tmp_.noalias() = j.c * y;
            f.noalias() += tmp_ * j.scaled_c_adj;
        }
    }

private:
    struct Jump {
        SparseMatrix c;
        SparseMatrix scaled_c_adj; // rate * c^dag
    };

    SparseMatrix neg_i_a_;
    SparseMatrix pos_i_a_adj_;
    std::vector<Jump> jumps_;
    mutable Eigen::MatrixXcd tmp_;
};

// Adaptive Dormand-Prince 5(4) stepper with FSAL, a scaled-RMS error norm,
// and per-step trace-drift rejection.
class Dp45Stepper {
public:
    Dp45Stepper(const MasterRhs& rhs, const EvolveOptions& opts, Eigen::MatrixXcd y0)
        : rhs_(rhs), o_(opts), y_(std::move(y0))
    {
        const Eigen::Index n = y_.rows();
        for (Eigen::MatrixXcd* m : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &stage_,
                                    &y_new_, &y_err_})
            m->resize(n, n);
        rhs_(y_, k1_);
        h_ = initial_step();
    }

    double time() const { return t_; }
    const Eigen::MatrixXcd& state() const { return y_; }

    // entrywise 1-norm of d rho/dt at the current state (fresh via FSAL)
    double rhs_l1() const { return k1_.cwiseAbs().sum(); }

    // Take one accepted step, not beyond t_limit (landing on it exactly when
    // the controller step reaches it).
    void step(double t_limit)
    {
        while (true) {
            if (++attempts_ > o_.max_steps)
                throw SolveError("integrator exceeded its step budget");
            const bool clamped = t_ + h_ >= t_limit;
            const double h = clamped ? t_limit - t_ : h_;

            stage_.noalias() = y_ + (h * a21) * k1_;
            rhs_(stage_, k2_);
            stage_.noalias() = y_ + (h * a31) * k1_ + (h * a32) * k2_;
            rhs_(stage_, k3_);
            stage_.noalias() = y_ + (h * a41) * k1_ + (h * a42) * k2_ + (h * a43) * k3_;
            rhs_(stage_, k4_);
            stage_.noalias() = y_ + (h * a51) * k1_ + (h * a52) * k2_ + (h * a53) * k3_
                + (h * a54) * k4_;
            rhs_(stage_, k5_);
            stage_.noalias() = y_ + (h * a61) * k1_ + (h * a62) * k2_ + (h * a63) * k3_
                + (h * a64) * k4_ + (h * a65) * k5_;
            rhs_(stage_, k6_);
            y_new_.noalias() = y_ + (h * b1) * k1_ + (h * b3) * k3_ + (h * b4) * k4_
                + (h * b5) * k5_ + (h * b6) * k6_;
            rhs_(y_new_, k7_);
            y_err_.noalias() = (h * e1) * k1_ + (h * e3) * k3_ + (h * e4) * k4_
                + (h * e5) * k5_ + (h * e6) * k6_ + (h * e7) * k7_;

            const double err = scaled_rms_error();
            const double drift = std::abs(y_new_.trace() - y_.trace());
            if (err <= 1.0 && drift <= o_.trace_drift_tol) {
                t_ = clamped ? t_limit : t_ + h;
                y_.swap(y_new_);
                k1_.swap(k7_); // FSAL
                if (!clamped)
                    h_ = h * growth(err);
                return;
            }
            const double fac = err > 1.0 ? std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9)
                                         : 0.5; // trace drift: plain halving
            h_ = h * fac;
            if (h_ < 1e-14 * std::max(1.0, std::abs(t_)))
                throw SolveError("time step underflow at t=" + std::to_string(t_));
        }
    }

private:
    // Dormand-Prince coefficients (autonomous system: stage times unused).
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                            a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                            a65 = -5103.0 / 18656.0;
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                            b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                            e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

    double growth(double err) const
    {
        if (err <= 0.0)
            return 5.0;
        return std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    }

    double scaled_rms_error() const
    {
        const auto scale = (o_.atol
                            + o_.rtol * y_.cwiseAbs().cwiseMax(y_new_.cwiseAbs()).array())
                               .eval();
        const double acc = (y_err_.cwiseAbs().array() / scale).square().sum();
        return std::sqrt(acc / static_cast<double>(y_.size()));
    }

    double scaled_rms(const Eigen::MatrixXcd& v) const
    {
        const auto scale = (o_.atol + o_.rtol * y_.cwiseAbs().array()).eval();
        const double acc = (v.cwiseAbs().array() / scale).square().sum();
        return std::sqrt(acc / static_cast<double>(y_.size()));
    }

    double initial_step()
    {
        const double d0 = scaled_rms(y_);
        const double d1 = scaled_rms(k1_);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        stage_.noalias() = y_ + h0 * k1_;
        rhs_(stage_, k2_);
        y_err_.noalias() = k2_ - k1_;
        const double d2 = scaled_rms(y_err_) / h0;
        const double dmax = std::max(d1, d2);
        const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3)
                                        : std::pow(0.01 / dmax, 0.2);
        return std::min(100.0 * h0, h1);
    }

    const MasterRhs& rhs_;
    EvolveOptions o_;
    Eigen::MatrixXcd y_, k1_, k2_, k3_, k4_, k5_, k6_, k7_, stage_, y_new_, y_err_;
    double t_ = 0.0;
    double h_ = 0.0;
    std::size_t attempts_ = 0;
};

void require_positive_rate(const Liouvillian& L)
{
    for (const Collapse& c : L.collapse)
        if (c.rate > 0.0)
            return;
    throw SpecError("no decay channel; steady state would not be unique");
}

DensityState steady_direct(const Liouvillian& L)
{
    const std::size_t dim = L.dim();
    const std::size_t unknowns = dim * dim;
    if (unknowns > direct_unknown_limit)
        throw SpecError("direct steady-state solve is limited to " + std::to_string(direct_unknown_limit)
                        + " vectorized unknowns (got " + std::to_string(unknowns)
                        + "); use the evolve method");

    // Column-stacking vectorization: vec(A X B) = kron(B^T, A) vec(X).  Row 0
    // of the generator is replaced by the trace constraint.
    std::vector<Triplet> trip;
    auto add_kron = [&](const SparseMatrix& B, const SparseMatrix& A, Complex scale) {
        for (int jb = 0; jb < B.outerSize(); ++jb)
            for (SparseMatrix::InnerIterator itb(B, jb); itb; ++itb)
                for (int ja = 0; ja < A.outerSize(); ++ja)
                    for (SparseMatrix::InnerIterator ita(A, ja); ita; ++ita) {
                        const std::size_t row = static_cast<std::size_t>(itb.row()) * dim
                            + static_cast<std::size_t>(ita.row());
                        if (row == 0)
                            continue;
                        const std::size_t col = static_cast<std::size_t>(itb.col()) * dim
                            + static_cast<std::size_t>(ita.col());
                        trip.emplace_back(static_cast<int>(row), static_cast<int>(col),
                                          scale * itb.value() * ita.value());
                    }
    };

    SparseMatrix id(dim, dim);
    id.setIdentity();
    const SparseMatrix& H = L.hamiltonian.matrix();
    const SparseMatrix Ht = H.transpose();
    add_kron(id, H, Complex(0.0, -1.0));
    add_kron(Ht, id, Complex(0.0, 1.0));
    for (const Collapse& c : L.collapse) {
        if (c.rate == 0.0)
            continue;
        const SparseMatrix& cm = c.op.matrix();
        const SparseMatrix c_conj = cm.conjugate();
        const SparseMatrix n = (c.op.adjoint() * c.op).matrix();
        const SparseMatrix nt = n.transpose();
        add_kron(c_conj, cm, Complex(c.rate, 0.0));
        add_kron(id, n, Complex(-0.5 * c.rate, 0.0));
        add_kron(nt, id, Complex(-0.5 * c.rate, 0.0));
    }
    for (std::size_t k = 0; k < dim; ++k)
        trip.emplace_back(0, static_cast<int>(k * dim + k), Complex(1.0, 0.0));

    SparseMatrix M(static_cast<Eigen::Index>(unknowns), static_cast<Eigen::Index>(unknowns));
    M.setFromTriplets(trip.begin(), trip.end());
    M.makeCompressed();

    Eigen::SparseLU<SparseMatrix> lu;
    lu.compute(M);
    if (lu.info() != Eigen::Success)
        throw SolveError("steady state is not unique (degenerate null space) "
                         "or the factorization failed");
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(unknowns));
    b(0) = Complex(1.0, 0.0);
    Eigen::VectorXcd x = lu.solve(b);
    if (lu.info() != Eigen::Success)
        throw SolveError("steady-state linear solve failed");

    // Iterative refinement. The generator only couples excitation sectors
    // that sit within one step of each other, so residual rows of the weakly
    // populated sectors are sums of commensurately small terms and the
    // refinement restores componentwise accuracy that a norm-stable LU
    // cannot (two-photon populations scale like |F|^4 and would otherwise
    // drown in roundoff from the vacuum sector).
    double prev = std::numeric_limits<double>::infinity();
    for (int round = 0; round < 8; ++round) {
        const Eigen::VectorXcd r = b - M * x;
        const double rnorm = r.norm();
        if (!(rnorm < prev) || rnorm == 0.0)
            break;
        prev = rnorm;
        x += lu.solve(r);
    }

    DensityState state{L.basis,
                       Eigen::Map<const Eigen::MatrixXcd>(x.data(),
                                                          static_cast<Eigen::Index>(dim),
                                                          static_cast<Eigen::Index>(dim))};
    state.renormalize();
    return state;
}

DensityState steady_evolve(const Liouvillian& L, const EvolveOptions& opts)
{
    const MasterRhs rhs(L);
    Dp45Stepper stepper(rhs, opts, vacuum_state(L.basis).rho);
    while (stepper.rhs_l1() >= opts.tol_ss) {
        if (stepper.time() >= opts.max_time)
            throw SolveError("steady-state evolution did not converge by t="
                             + std::to_string(opts.max_time) + " (residual "
                             + std::to_string(stepper.rhs_l1()) + ")");
        stepper.step(opts.max_time);
    }
    DensityState state{L.basis, stepper.state()};
    state.renormalize();
    return state;
}

double checked_real(Complex value, const char* what)
{
    if (std::abs(value.imag()) > 1e-10)
        throw SolveError(std::string(what) + " has imaginary residue "
                         + std::to_string(value.imag()));
    return value.real();
}

void require_boson(const FockBasis& basis, std::size_t site, const char* what)
{
    if (site >= basis.num_sites())
        throw SpecError(std::string(what) + ": site index out of range");
    if (!basis.site(site).is_boson())
        throw SpecError(std::string(what) + ": site " + std::to_string(site)
                        + " is not a Boson mode");
}

} // namespace

double DensityState::hermiticity_error() const
{
    return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

Complex DensityState::trace() const
{
    return rho.trace();
}

double DensityState::min_eigenvalue() const
{
    const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void DensityState::renormalize()
{
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const Complex tr = rho.trace();
    if (std::abs(tr) < 1e-300)
        throw SolveError("density matrix has zero trace");
    rho /= tr;
}

DensityState vacuum_state(const FockBasis& basis)
{
    DensityState state{basis, Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(basis.dim()),
                                                     static_cast<Eigen::Index>(basis.dim()))};
    state.rho(0, 0) = Complex(1.0, 0.0);
    return state;
}

Liouvillian build_liouvillian(const SystemSpec& spec)
{
    spec.validate();
    FockBasis basis = spec.basis();
    const std::size_t dim = basis.dim();

    std::vector<Triplet> diag;
    for (std::size_t f = 0; f < dim; ++f) {
        const std::vector<int> occ = basis.occupation(f);
        double e = 0.0;
        for (std::size_t s = 0; s < occ.size(); ++s) {
            const double n = occ[s];
            e += spec.detuning[s] * n + spec.kerr[s] * n * (n - 1.0);
        }
        if (e != 0.0)
            diag.emplace_back(static_cast<int>(f), static_cast<int>(f), Complex(e, 0.0));
    }
    SparseOperator H = SparseOperator::from_triplets(basis, diag);
    for (const Hop& h : spec.hops) {
        const SparseOperator t = Complex(h.strength, 0.0)
            * (site_raise(basis, h.i) * site_lower(basis, h.j));
        H = H + t + t.adjoint();
    }
    for (const JcCoupling& c : spec.jc) {
        const SparseOperator t = Complex(c.strength, 0.0)
            * (site_raise(basis, c.boson) * lowering(basis, c.two_level));
        H = H + t + t.adjoint();
    }
    for (const Drive& d : spec.drives) {
        const SparseOperator t = d.amplitude * site_raise(basis, d.site);
        H = H + t + t.adjoint();
    }

    const double scale = H.max_abs();
    if (scale > 0.0 && (H - H.adjoint()).max_abs() > 1e-12 * scale)
        throw SolveError("assembled Hamiltonian failed its Hermiticity check");

    Liouvillian L{basis, H, {}};
    for (std::size_t s = 0; s < spec.sites.size(); ++s)
        if (spec.decay[s] > 0.0)
            L.collapse.push_back({site_lower(basis, s), spec.decay[s]});
    return L;
}

DensityState steady_state(const Liouvillian& L, SteadyMethod method, const EvolveOptions& opts)
{
    require_positive_rate(L);
    if (method == SteadyMethod::Auto)
        method = L.dim() * L.dim() <= direct_unknown_limit ? SteadyMethod::Direct
                                                           : SteadyMethod::Evolve;
    return method == SteadyMethod::Direct ? steady_direct(L) : steady_evolve(L, opts);
}

double residual_l1(const Liouvillian& L, const DensityState& state)
{
    check_same_basis(L.basis, state.basis, "residual_l1");
    const MasterRhs rhs(L);
    Eigen::MatrixXcd f(state.rho.rows(), state.rho.cols());
    rhs(state.rho, f);
    return f.cwiseAbs().sum();
}

Complex expectation(const DensityState& state, const SparseOperator& op)
{
    check_same_basis(state.basis, op.basis(), "expectation");
    Complex sum(0.0, 0.0);
    const SparseMatrix& m = op.matrix();
    for (int j = 0; j < m.outerSize(); ++j)
        for (SparseMatrix::InnerIterator it(m, j); it; ++it)
            sum += it.value() * state.rho(it.col(), it.row());
    return sum;
}

double mode_occupation(const DensityState& state, std::size_t site)
{
    return expectation(state, number_op(state.basis, site)).real();
}

double g2_equal_time(const DensityState& state, std::size_t i, std::size_t j)
{
    require_boson(state.basis, i, "g2_equal_time");
    require_boson(state.basis, j, "g2_equal_time");
    const SparseOperator ai = annihilation(state.basis, i);
    const SparseOperator aj = annihilation(state.basis, j);
    const SparseOperator num_op = ai.adjoint() * (aj.adjoint() * (aj * ai));
    const double den = mode_occupation(state, i) * mode_occupation(state, j);
    if (den == 0.0)
        throw SolveError("zero mode occupation; correlation undefined");
    const double num = checked_real(expectation(state, num_op), "g2 numerator");
    return num / den;
}

std::vector<double> g2_two_time(const Liouvillian& L, const DensityState& rho_ss,
                                std::size_t i, const std::vector<double>& tau_grid,
                                const EvolveOptions& opts)
{
    check_same_basis(L.basis, rho_ss.basis, "g2_two_time");
    require_boson(L.basis, i, "g2_two_time");
    if (tau_grid.empty())
        throw SpecError("g2_two_time: empty delay grid");
    if (tau_grid.front() < 0.0 || !std::is_sorted(tau_grid.begin(), tau_grid.end()))
        throw SpecError("g2_two_time: delays must be nondecreasing and >= 0");

    const double n_ss = mode_occupation(rho_ss, i);
    if (n_ss == 0.0)
        throw SolveError("zero mode occupation; correlation undefined");

    const SparseMatrix a = annihilation(L.basis, i).matrix();
    const SparseMatrix n_op = (SparseMatrix(a.adjoint()) * a).pruned();
    Eigen::MatrixXcd seeded = a * rho_ss.rho;
    seeded = seeded * SparseMatrix(a.adjoint());

    const MasterRhs rhs(L);
    Dp45Stepper stepper(rhs, opts, std::move(seeded));
    std::vector<double> out;
    out.reserve(tau_grid.size());
    for (double tau : tau_grid) {
        while (stepper.time() < tau)
            stepper.step(tau);
        Complex corr(0.0, 0.0);
        for (int j = 0; j < n_op.outerSize(); ++j)
            for (SparseMatrix::InnerIterator it(n_op, j); it; ++it)
                corr += it.value() * stepper.state()(it.col(), it.row());
        out.push_back(checked_real(corr / (n_ss * n_ss), "g2(tau)"));
    }
    return out;
}

DensityState propagate(const Liouvillian& L, const DensityState& initial, double duration,
                       const EvolveOptions& opts)
{
    check_same_basis(L.basis, initial.basis, "propagate");
    if (!(duration >= 0.0))
        throw SpecError("propagate: duration must be >= 0");
    const MasterRhs rhs(L);
    Dp45Stepper stepper(rhs, opts, initial.rho);
    while (stepper.time() < duration)
        stepper.step(duration);
    return DensityState{L.basis, stepper.state()};
}

} // namespace pmol
