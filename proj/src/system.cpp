#include "molcol/system.hpp"

#include <Eigen/SPQRSupport>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

namespace molcol {

namespace {

template <class F>
void parallel_for(std::size_t n, F&& f) {
    const std::size_t workers = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) f(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

struct LocalRow {
    RowKind kind;
    double scale;
    double rhs;
    // (field, basis column, value)
    std::vector<std::tuple<int, Eigen::Index, double>> entries;
};

void add(LocalRow& row, int field, const SparseRow& r, double factor) {
    if (factor == 0.0) return;
    for (std::size_t k = 0; k < r.size(); ++k) row.entries.emplace_back(field, r.cols[k], factor * r.vals[k]);
}

std::vector<LocalRow> interior_rows(const ProblemCase& p, const BasisSet& b, const Point& x, double h_m, bool scaled) {
    const int dim = b.dim();
    const Eigen::Vector2d src = p.source(x);
    std::vector<LocalRow> out;
    if (p.pde == Pde::Poisson) {
        const double sc = scaled ? h_m * h_m : 1.0;
        std::vector<Deriv> d{{2, 0}};
        if (dim == 2) d.push_back({0, 2});
        const auto rows = b.evaluate(x, d);
        LocalRow row{RowKind::Interior, sc, sc * src[0], {}};
        for (const auto& r : rows) add(row, 0, r, -sc);
        out.push_back(std::move(row));
    } else if (p.pde == Pde::Biharmonic) {
        // Divided through by D so the weight against boundary rows does not
        // depend on the stiffness units.
        const double sc = (scaled ? std::pow(h_m, 4) : 1.0) / p.material.D;
        const double D = p.material.D;
        LocalRow row{RowKind::Interior, sc, sc * src[0], {}};
        if (dim == 1) {
            const Deriv d[] = {{4, 0}};
            add(row, 0, b.evaluate(x, d)[0], sc * D);
        } else {
            const Deriv d[] = {{4, 0}, {2, 2}, {0, 4}};
            const auto rows = b.evaluate(x, d);
            add(row, 0, rows[0], sc * D);
            add(row, 0, rows[1], 2 * sc * D);
            add(row, 0, rows[2], sc * D);
        }
        out.push_back(std::move(row));
    } else {
        // Divided through by mu, as for the plate rows above.
        const double mu = p.material.mu(), lm = p.material.lambda_star() + mu;
        const double sc = (scaled ? h_m * h_m : 1.0) / mu;
        const Deriv d[] = {{2, 0}, {1, 1}, {0, 2}};
        const auto rows = b.evaluate(x, d);
        const SparseRow& xx = rows[0];
        const SparseRow& xy = rows[1];
        const SparseRow& yy = rows[2];
        // -(mu lap u_a + (lambda* + mu) d_a div u) = b_a
        LocalRow rx{RowKind::Interior, sc, sc * src[0], {}};
        add(rx, 0, xx, -sc * (mu + lm));
        add(rx, 0, yy, -sc * mu);
        add(rx, 1, xy, -sc * lm);
        LocalRow ry{RowKind::Interior, sc, sc * src[1], {}};
        add(ry, 0, xy, -sc * lm);
        add(ry, 1, xx, -sc * mu);
        add(ry, 1, yy, -sc * (mu + lm));
        out.push_back(std::move(rx));
        out.push_back(std::move(ry));
    }
    return out;
}

std::vector<LocalRow> boundary_rows(const ProblemCase& p, const BasisSet& b, const BoundaryPoint& bp, double h_m,
                                    bool scaled) {
    const int dim = b.dim();
    std::vector<Deriv> d{{0, 0}};
    if (bp.tag == BcTag::Clamped) {
        d.push_back({1, 0});
        if (dim == 2) d.push_back({0, 1});
    }
    const auto rows = b.evaluate(bp.x, d);
    const Eigen::Vector2d u = p.exact(bp.x);
    std::vector<LocalRow> out;
    for (int f = 0; f < p.fields; ++f) {
        LocalRow row{RowKind::BoundaryValue, 1.0, u[f], {}};
        add(row, f, rows[0], 1.0);
        out.push_back(std::move(row));
    }
    if (bp.tag == BcTag::Clamped) {
        const double sc = scaled ? h_m : 1.0;
        const Eigen::Matrix2d g = p.gradient(bp.x);
        for (int f = 0; f < p.fields; ++f) {
            const double dn = g(f, 0) * bp.normal.x() + (dim == 2 ? g(f, 1) * bp.normal.y() : 0.0);
            LocalRow row{RowKind::BoundaryNormal, sc, sc * dn, {}};
            add(row, f, rows[1], sc * bp.normal.x());
            if (dim == 2) add(row, f, rows[2], sc * bp.normal.y());
            out.push_back(std::move(row));
        }
    }
    return out;
}

}  // namespace

CollocationSystem assemble(const ProblemCase& problem, const BasisSet& basis, const CollocationSet& points,
                           bool scale_derivatives) {
    if (basis.dim() != problem.dim()) throw std::invalid_argument("basis and problem dimensions differ");
    if (basis.mollifier().smoothness() < problem.required_smoothness())
        throw std::invalid_argument(problem.name + " needs a C" + std::to_string(problem.required_smoothness()) +
                                    " mollifier, got C" + std::to_string(basis.mollifier().smoothness()) + " (" +
                                    to_string(basis.mollifier().family()) + ")");
    if (points.size() < basis.size())
        throw std::invalid_argument("underdetermined: n_z = " + std::to_string(points.size()) +
                                    " < n_b = " + std::to_string(basis.size()));

    const double h_m = basis.mollifier().width();
    const std::size_t ni = points.interior.size();
    std::vector<std::vector<LocalRow>> blocks(points.size());
    parallel_for(points.size(), [&](std::size_t k) {
        blocks[k] = k < ni ? interior_rows(problem, basis, points.interior[k], h_m, scale_derivatives)
                           : boundary_rows(problem, basis, points.boundary[k - ni], h_m, scale_derivatives);
    });

    CollocationSystem sys;
    sys.fields = problem.fields;
    sys.basis_size = basis.size();
    std::size_t n_rows = 0, nnz = 0;
    for (const auto& blk : blocks) {
        n_rows += blk.size();
        for (const auto& r : blk) nnz += r.entries.size();
    }
    std::vector<Eigen::Triplet<double, long>> trip;
    trip.reserve(nnz);
    sys.s.resize(static_cast<Eigen::Index>(n_rows));
    long row = 0;
    const auto nb = static_cast<long>(basis.size());
    for (const auto& blk : blocks) {
        for (const auto& r : blk) {
            for (const auto& [f, c, v] : r.entries) trip.emplace_back(row, f * nb + c, v);
            sys.s[row] = r.rhs;
            sys.row_kind.push_back(r.kind);
            sys.row_scale.push_back(r.scale);
            ++row;
        }
    }
    sys.C.resize(row, nb * problem.fields);
    sys.C.setFromTriplets(trip.begin(), trip.end());
    sys.C.makeCompressed();
    return sys;
}

LeastSquares least_squares(const SparseMatrix& C, const Eigen::VectorXd& s, double rank_tol) {
    if (C.rows() != s.size()) throw std::invalid_argument("matrix and right-hand side sizes differ");
    if (C.rows() < C.cols()) throw std::invalid_argument("underdetermined system");

    // Equilibrate columns and drop the empty ones.
    std::vector<long> keep;
    std::vector<double> inv_norm;
    for (long j = 0; j < C.cols(); ++j) {
        double n2 = 0.0;
        for (SparseMatrix::InnerIterator it(C, j); it; ++it) n2 += it.value() * it.value();
        if (n2 > 0.0) {
            keep.push_back(j);
            inv_norm.push_back(1.0 / std::sqrt(n2));
        }
    }
    SparseMatrix A(C.rows(), static_cast<long>(keep.size()));
    {
        std::vector<Eigen::Triplet<double, long>> trip;
        trip.reserve(static_cast<std::size_t>(C.nonZeros()));
        for (std::size_t k = 0; k < keep.size(); ++k)
            for (SparseMatrix::InnerIterator it(C, keep[k]); it; ++it)
                trip.emplace_back(it.row(), static_cast<long>(k), it.value() * inv_norm[k]);
        A.setFromTriplets(trip.begin(), trip.end());
        A.makeCompressed();
    }

    Eigen::SPQR<SparseMatrix> qr;
    qr.setPivotThreshold(rank_tol);
    qr.compute(A);
    if (qr.info() != Eigen::Success) throw std::runtime_error("sparse QR factorisation failed");

    const SparseMatrix R = qr.matrixR();
    double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
    const long nd = std::min(R.rows(), R.cols());
    for (long i = 0; i < nd; ++i) {
        const double d = std::abs(R.coeff(i, i));
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
    }
    const double cond = dmin > 0.0 ? dmax / dmin : std::numeric_limits<double>::infinity();
    if (qr.rank() < A.cols() || !(dmin > rank_tol * dmax)) {
        std::ostringstream msg;
        msg << "rank-deficient collocation matrix: rank " << qr.rank() << " of " << A.cols()
            << " columns, condition estimate " << cond;
        throw RankDeficientError(msg.str(), cond);
    }
    const Eigen::VectorXd y = qr.solve(s);

    LeastSquares out;
    out.x = Eigen::VectorXd::Zero(C.cols());
    for (std::size_t k = 0; k < keep.size(); ++k) out.x[keep[k]] = y[static_cast<Eigen::Index>(k)] * inv_norm[k];
    out.condition_estimate = cond;
    return out;
}

Solution solve(const CollocationSystem& system, std::shared_ptr<const BasisSet> basis) {
    // Row scaling multiplies both sides, so the minimiser needs no unscaling.
    auto ls = least_squares(system.C, system.s);
    Solution sol;
    sol.basis = std::move(basis);
    sol.u = std::move(ls.x);
    sol.fields = system.fields;
    sol.condition_estimate = ls.condition_estimate;
    if (!sol.u.allFinite()) throw std::runtime_error("non-finite solution coefficients");
    return sol;
}

Eigen::Vector2d evaluate_field(const Solution& solution, const Point& x, Deriv deriv) {
    const auto row = solution.basis->eval_at(x, deriv);
    const auto nb = static_cast<Eigen::Index>(solution.basis->size());
    Eigen::Vector2d v = Eigen::Vector2d::Zero();
    for (int f = 0; f < solution.fields; ++f) {
        double acc = 0.0;
        for (std::size_t k = 0; k < row.size(); ++k) acc += row.vals[k] * solution.u[f * nb + row.cols[k]];
        v[f] = acc;
    }
    return v;
}

Eigen::Matrix2d evaluate_gradient(const Solution& solution, const Point& x) {
    const auto& b = *solution.basis;
    std::vector<Deriv> d{{1, 0}};
    if (b.dim() == 2) d.push_back({0, 1});
    const auto rows = b.evaluate(x, d);
    const auto nb = static_cast<Eigen::Index>(b.size());
    Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
    for (int f = 0; f < solution.fields; ++f)
        for (std::size_t a = 0; a < rows.size(); ++a)
            for (std::size_t k = 0; k < rows[a].size(); ++k)
                g(f, static_cast<Eigen::Index>(a)) += rows[a].vals[k] * solution.u[f * nb + rows[a].cols[k]];
    return g;
}

double relative_error(std::span<const Eigen::VectorXd> exact, std::span<const Eigen::VectorXd> approx) {
    if (exact.size() != approx.size()) throw std::invalid_argument("field sample counts differ");
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < exact.size(); ++k) {
        num += (exact[k] - approx[k]).squaredNorm();
        den += exact[k].squaredNorm();
    }
    if (!(den > 0.0)) throw std::invalid_argument("relative error of a vanishing field");
    return std::sqrt(num / den);
}

ErrorNorms compute_errors(const ProblemCase& problem, const Solution& solution, std::span<const Point> points) {
    const int nf = problem.fields, dim = problem.dim();
    std::vector<Eigen::VectorXd> ue(points.size()), uh(points.size()), ge(points.size()), gh(points.size());
    std::vector<Eigen::Matrix2d> gre(points.size()), grh(points.size());
    parallel_for(points.size(), [&](std::size_t k) {
        const Point& x = points[k];
        ue[k] = problem.exact(x).head(nf);
        uh[k] = evaluate_field(solution, x).head(nf);
        gre[k] = problem.gradient(x);
        grh[k] = evaluate_gradient(solution, x);
        ge[k] = gre[k].topLeftCorner(nf, dim).reshaped();
        gh[k] = grh[k].topLeftCorner(nf, dim).reshaped();
    });
    ErrorNorms e;
    e.l2 = relative_error(ue, uh);
    e.h1 = relative_error(ge, gh);
    e.energy = std::numeric_limits<double>::quiet_NaN();
    if (problem.pde == Pde::Elasticity) {
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < points.size(); ++k) {
            const Eigen::Matrix2d de = gre[k] - grh[k];
            const Eigen::Matrix2d eps_d = 0.5 * (de + de.transpose());
            const Eigen::Matrix2d eps = 0.5 * (gre[k] + gre[k].transpose());
            num += (eps_d.array() * plane_stress(problem.material, de).array()).sum();
            den += (eps.array() * plane_stress(problem.material, gre[k]).array()).sum();
        }
        if (!(den > 0.0)) throw std::invalid_argument("relative error of a vanishing field");
        e.energy = std::sqrt(num / den);
    }
    return e;
}

void write_matrix(std::ostream& os, const SparseMatrix& m) {
    os << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
    os.precision(17);
    for (long j = 0; j < m.outerSize(); ++j)
        for (SparseMatrix::InnerIterator it(m, j); it; ++it) os << it.row() + 1 << ' ' << j + 1 << ' ' << it.value() << '\n';
}

void write_vector(std::ostream& os, const Eigen::VectorXd& v) {
    os << v.size() << " 1 " << v.size() << '\n';
    os.precision(17);
    for (Eigen::Index i = 0; i < v.size(); ++i) os << i + 1 << " 1 " << v[i] << '\n';
}

}  // namespace molcol
