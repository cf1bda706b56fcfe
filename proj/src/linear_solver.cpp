#include "transonic/linear_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SparseLU>
#include <Eigen/IterativeLinearSolvers>

#include "transonic/errors.hpp"
#include "transonic/fd.hpp"
#include "transonic/spectral.hpp"

namespace transonic {

namespace {

// x2 action of one coefficient row: either a scalar times base, or a full matrix.
struct RowOperator {
    bool zero = false;
    bool uniform = true;
    double value = 0.0;
    Eigen::MatrixXd mat;
};

class Discretization {
public:
    Discretization(const CoefficientSet& cs, double eps)
        : cs_(cs), eps_(eps), n_(cs.grid().size()), n2_(cs.n2())
    {
        const double dx = cs.grid().dx();
        d1_ = spectral::differentiation_matrix(n2_, 1);
        d2_ = spectral::differentiation_matrix(n2_, 2);
        c1_ = fd::offset_stencil(1, 0, -1, 3, dx);
        c2_ = fd::offset_stencil(2, 0, -1, 3, dx);
        b2_ = fd::backward_stencil(2, 0, dx);
        d3c_ = fd::offset_stencil(3, 0, -2, 5, dx);
        d3b_ = fd::offset_stencil(3, 0, -3, 5, dx);
        const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n2_, n2_);
        k_.resize(n_);
        b_.resize(n_);
        a_.resize(n_);
        alpha_.resize(n_);
        for (int i = 0; i < n_; ++i) {
            k_[i] = row_operator(cs.k_field.row(i), eye);
            b_[i] = row_operator(cs.b_field.row(i), d1_);
            a_[i] = row_operator(cs.a_field.row(i), d2_);
            alpha_[i] = row_operator(cs.alpha_h_field.row(i), eye);
        }
    }

    int size() const { return n_; }
    int n2() const { return n2_; }

    // emit(ii, jj, weight) for interior node (i, j); ii may be -1 (ghost).
    template <class Emit>
    void interior_row(int i, int j, Emit&& emit) const
    {
        const bool upwind = cs_.k_field(i, j) <= 0.0;
        const fd::Stencil& s2 = (upwind && i >= 3) ? b2_ : c2_;
        const fd::Stencil& s1 = c1_;
        term(k_[i], s2, i, j, false, emit);
        term(b_[i], s1, i, j, true, emit);
        term(alpha_[i], s1, i, j, false, emit, -1.0);
        if (!a_[i].zero) {
            if (a_[i].uniform)
                for (int jj = 0; jj < n2_; ++jj)
                    emit(i, jj, a_[i].value * d2_(j, jj));
            else
                for (int jj = 0; jj < n2_; ++jj)
                    emit(i, jj, a_[i].mat(j, jj));
        }
        if (eps_ != 0.0) {
            const fd::Stencil& s3 = (i + 2 < n_) ? d3c_ : d3b_;
            for (std::size_t k = 0; k < s3.weights.size(); ++k)
                emit(i + s3.first + static_cast<int>(k), j, eps_ * s3.weights[k]);
        }
    }

private:
    RowOperator row_operator(std::span<const double> c, const Eigen::MatrixXd& base) const
    {
        RowOperator op;
        const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
        const double scale = std::max(std::abs(*lo), std::abs(*hi));
        if (scale == 0.0) {
            op.zero = true;
            return op;
        }
        if (*hi - *lo <= 1e-14 * scale) {
            op.value = c[0];
            return op;
        }
        op.uniform = false;
        op.mat = spectral::dealiased_product_matrix(c) * base;
        return op;
    }

    // Coefficient row times (x1 stencil) x (x2 base); mixed means base = d1_.
    template <class Emit>
    void term(const RowOperator& op, const fd::Stencil& s, int i, int j, bool mixed, Emit& emit,
              double sign = 1.0) const
    {
        if (op.zero)
            return;
        for (std::size_t k = 0; k < s.weights.size(); ++k) {
            const int ii = i + s.first + static_cast<int>(k);
            const double w = sign * s.weights[k];
            if (op.uniform && !mixed) {
                emit(ii, j, w * op.value);
            } else if (op.uniform) {
                for (int jj = 0; jj < n2_; ++jj)
                    emit(ii, jj, w * op.value * d1_(j, jj));
            } else {
                for (int jj = 0; jj < n2_; ++jj)
                    emit(ii, jj, w * op.mat(j, jj));
            }
        }
    }

    const CoefficientSet& cs_;
    double eps_;
    int n_;
    int n2_;
    Eigen::MatrixXd d1_, d2_;
    fd::Stencil c1_, c2_, b2_, d3c_, d3b_;
    std::vector<RowOperator> k_, b_, a_, alpha_;
};

}  // namespace

LinearSystem assemble(const CoefficientSet& cs, double eps)
{
    if (!(eps >= 0.0))
        throw std::invalid_argument("eps must be nonnegative");
    const Discretization disc(cs, eps);
    const int n = disc.size(), n2 = disc.n2();
    const double dx = cs.grid().dx();
    const int unknowns = (n + 1) * n2;

    LinearSystem sys;
    sys.grid = cs.grid();
    sys.n2 = n2;
    sys.eps = eps;
    sys.rhs = Eigen::VectorXd::Zero(unknowns);

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(unknowns) * 12);
    auto col = [n2](int i, int j) { return LinearSystem::unknown(i, j, n2); };

    for (int j = 0; j < n2; ++j) {
        // d1 u(-1) = 0 through the ghost layer, then u(-1) = 0.
        triplets.emplace_back(col(-1, j), col(1, j), 0.5 / dx);
        triplets.emplace_back(col(-1, j), col(-1, j), -0.5 / dx);
        triplets.emplace_back(col(0, j), col(0, j), 1.0);
        const int last = n - 1;
        triplets.emplace_back(col(last, j), col(last, j), 1.5 / dx);
        triplets.emplace_back(col(last, j), col(last - 1, j), -2.0 / dx);
        triplets.emplace_back(col(last, j), col(last - 2, j), 0.5 / dx);
    }
    sys.entry_rows = 2 * n2;
    sys.exit_rows = n2;

    for (int i = 1; i + 1 < n; ++i)
        for (int j = 0; j < n2; ++j) {
            const int r = col(i, j);
            disc.interior_row(i, j, [&](int ii, int jj, double w) {
                if (w != 0.0)
                    triplets.emplace_back(r, col(ii, jj), w);
            });
            sys.rhs[r] = cs.rhs_field(i, j);
        }

    sys.matrix.resize(unknowns, unknowns);
    sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
    sys.matrix.makeCompressed();
    return sys;
}

namespace {

Field2D to_field(const LinearSystem& sys, const Eigen::VectorXd& x)
{
    Field2D u(sys.grid, sys.n2);
    for (int i = 0; i < sys.grid.size(); ++i)
        for (int j = 0; j < sys.n2; ++j)
            u(i, j) = x[LinearSystem::unknown(i, j, sys.n2)];
    return u;
}

// Residual accumulated in long double so that the check is not limited by
// cancellation in A x at fine grids.
Eigen::VectorXd residual(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& b, const Eigen::VectorXd& x)
{
    std::vector<long double> r(b.data(), b.data() + b.size());
    for (int k = 0; k < a.outerSize(); ++k) {
        const long double xk = x[k];
        for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it)
            r[it.row()] -= static_cast<long double>(it.value()) * xk;
    }
    Eigen::VectorXd out(b.size());
    for (int i = 0; i < b.size(); ++i)
        out[i] = static_cast<double>(r[i]);
    return out;
}

double relative(const LinearSystem& sys, const Eigen::VectorXd& x)
{
    const double bn = sys.rhs.norm();
    const double rn = residual(sys.matrix, sys.rhs, x).norm();
    return bn > 0.0 ? rn / bn : x.norm();
}

}  // namespace

Field2D solve_linear(const LinearSystem& sys, double tol)
{
    if (sys.rhs.isZero(0.0))
        return Field2D(sys.grid, sys.n2);

    // Rows mix 1/dx, 1/dx^2 and eps/dx^3 scales; equilibrate before factoring.
    Eigen::VectorXd scale = Eigen::VectorXd::Zero(sys.unknowns());
    for (int k = 0; k < sys.matrix.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(sys.matrix, k); it; ++it)
            scale[it.row()] = std::max(scale[it.row()], std::abs(it.value()));
    for (int r = 0; r < scale.size(); ++r)
        scale[r] = scale[r] > 0.0 ? 1.0 / scale[r] : 1.0;
    const Eigen::SparseMatrix<double> a = scale.asDiagonal() * sys.matrix;
    const Eigen::VectorXd b = scale.asDiagonal() * sys.rhs;

    Eigen::VectorXd x;
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(a);
    const bool factored = lu.info() == Eigen::Success;
    if (factored) {
        x = lu.solve(b);
        double res = relative(sys, x);
        for (int it = 0; it < 8 && res > 0.01 * tol; ++it) {
            const Eigen::VectorXd y = x + lu.solve(residual(a, b, x));
            const double r = relative(sys, y);
            if (!(r < res))
                break;
            x = y;
            res = r;
        }
    }
    if (!factored || !x.allFinite() || relative(sys, x) > tol) {
        Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> it;
        it.setTolerance(0.1 * tol);
        it.setMaxIterations(2000);
        it.compute(a);
        if (it.info() == Eigen::Success) {
            Eigen::VectorXd y;
            if (factored && x.allFinite())
                y = it.solveWithGuess(b, x);
            else
                y = it.solve(b);
            if (y.allFinite() && (x.size() == 0 || !x.allFinite() || relative(sys, y) < relative(sys, x)))
                x = y;
        }
    }
    if (x.size() == 0 || !x.allFinite() || relative(sys, x) > tol) {
        std::ostringstream os;
        os << "linear system not solved to tolerance " << tol;
        if (x.size() > 0 && x.allFinite())
            os << " (relative residual " << relative(sys, x) << ")";
        os << "; factorization " << (factored ? "succeeded" : "failed: " + lu.lastErrorMessage());
        throw SingularSystemError(os.str());
    }
    return to_field(sys, x);
}

double relative_residual(const LinearSystem& sys, const Field2D& u)
{
    Eigen::VectorXd x(sys.unknowns());
    for (int j = 0; j < sys.n2; ++j)
        x[LinearSystem::unknown(-1, j, sys.n2)] = u(1, j);
    for (int i = 0; i < sys.grid.size(); ++i)
        for (int j = 0; j < sys.n2; ++j)
            x[LinearSystem::unknown(i, j, sys.n2)] = u(i, j);
    return relative(sys, x);
}

Field2D apply_operator(const CoefficientSet& cs, const Field2D& u, double eps)
{
    if (u.n1() != cs.grid().size() || u.n2() != cs.n2())
        throw std::invalid_argument("field does not live on the coefficient grid");
    const Discretization disc(cs, eps);
    Field2D out(u.grid(), u.n2());
    for (int i = 1; i + 1 < disc.size(); ++i)
        for (int j = 0; j < disc.n2(); ++j) {
            double sum = 0.0;
            disc.interior_row(i, j, [&](int ii, int jj, double w) { sum += w * u(ii < 0 ? 1 : ii, jj); });
            out(i, j) = sum;
        }
    return out;
}

EnergyReport energy_report(const CoefficientSet& cs, const Field2D& u, double eps, double residual)
{
    EnergyReport e;
    const double d11 = l2_norm(derivative(u, 2, 0));
    const double h1 = sobolev_norm(u, 1);
    const double f0 = l2_norm(cs.rhs_field);
    e.lhs = eps * d11 * d11 + h1 * h1;
    e.rhs_norm = f0 * f0;
    e.ratio = e.rhs_norm > 0.0 ? e.lhs / e.rhs_norm : 0.0;
    e.residual_norm = residual;
    return e;
}

std::vector<double> default_eps_schedule()
{
    return {1e-2, 3e-3, 1e-3, 3e-4, 0.0};
}

ContinuationResult solve_with_continuation(const CoefficientSet& cs, std::span<const double> schedule,
                                           double tol)
{
    if (schedule.empty())
        throw std::invalid_argument("empty eps schedule");
    for (std::size_t k = 1; k < schedule.size(); ++k)
        if (!(schedule[k] < schedule[k - 1]))
            throw std::invalid_argument("eps schedule must be strictly decreasing");

    ContinuationResult out;
    const double dx = cs.grid().dx();
    Field2D previous;
    for (double eps : schedule) {
        if (eps > 0.0 && eps < dx * dx) {
            std::ostringstream os;
            os << "eps=" << eps << " is below dx^2=" << dx * dx << "; d111 term is under-resolved";
            out.warnings.push_back(os.str());
        }
        const LinearSystem sys = assemble(cs, eps);
        Field2D u = solve_linear(sys, tol);
        const double res = relative_residual(sys, u);
        out.energy_history.push_back(energy_report(cs, u, eps, res));
        out.eps_values.push_back(eps);
        if (previous.n1() > 0)
            out.eps_differences.push_back(sobolev_norm(u - previous, 1));
        previous = std::move(u);
    }
    out.energy = out.energy_history.back();
    out.extended_solution = previous;
    out.solution = previous.restricted_to_physical();

    const auto& d = out.eps_differences;
    if (d.size() >= 2) {
        const double last = d.back(), before = d[d.size() - 2];
        const double noise = 1e-9 * sobolev_norm(out.extended_solution, 1) + 1e-14;
        if (last > before && last > noise) {
            std::ostringstream os;
            os << "eps-differences grow: " << before << " -> " << last;
            throw ContinuationDivergence(os.str());
        }
    }

    const Field2D& u = out.extended_solution;
    const int last = u.n1() - 1;
    for (int j = 0; j < u.n2(); ++j) {
        out.entry_value_max = std::max(out.entry_value_max, std::abs(u(0, j)));
        const double d1 = (3.0 * u(last, j) - 4.0 * u(last - 1, j) + u(last - 2, j)) / (2.0 * dx);
        out.exit_derivative_max = std::max(out.exit_derivative_max, std::abs(d1));
    }
    return out;
}

}  // namespace transonic
