#pragma once

#include "molcol/basis.hpp"
#include "molcol/collocation.hpp"
#include "molcol/problems.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace molcol {

enum class RowKind { Interior, BoundaryValue, BoundaryNormal };

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, long>;

/// Rectangular collocation system C u = s. Columns are laid out field-major:
/// component f of basis function j sits at f * basis_size + j.
struct CollocationSystem {
    SparseMatrix C;
    Eigen::VectorXd s;
    std::vector<RowKind> row_kind;
    /// Factor applied to both sides of a row: h_m^n for n-th derivatives,
    /// divided by the stiffness (mu or D) on interior rows.
    std::vector<double> row_scale;
    int fields = 1;
    std::size_t basis_size = 0;

    Eigen::Index rows() const { return C.rows(); }
    Eigen::Index cols() const { return C.cols(); }
};

/// Builds interior operator rows and boundary rows. Throws std::invalid_argument
/// when the mollifier is not smooth enough for the operator or the system is
/// underdetermined.
CollocationSystem assemble(const ProblemCase& problem, const BasisSet& basis, const CollocationSet& points,
                           bool scale_derivatives = true);

class RankDeficientError : public std::runtime_error {
public:
    RankDeficientError(const std::string& what, double condition)
        : std::runtime_error(what), condition_estimate(condition) {}
    double condition_estimate;
};

struct LeastSquares {
    Eigen::VectorXd x;
    /// Ratio of extreme |R_ii| after column equilibration.
    double condition_estimate = 0.0;
};

/// Minimises |C x - s| by sparse QR on the column-equilibrated matrix.
/// Exactly-zero columns get x = 0. Throws RankDeficientError when the
/// factorisation reveals rank below the column count at relative tolerance
/// rank_tol.
LeastSquares least_squares(const SparseMatrix& C, const Eigen::VectorXd& s, double rank_tol = 1e-12);

struct Solution {
    std::shared_ptr<const BasisSet> basis;
    Eigen::VectorXd u;
    int fields = 1;
    double condition_estimate = 0.0;
};

Solution solve(const CollocationSystem& system, std::shared_ptr<const BasisSet> basis);

/// u_h or one of its derivatives at x, one entry per component.
Eigen::Vector2d evaluate_field(const Solution& solution, const Point& x, Deriv deriv = {});
/// Gradient as (component, axis).
Eigen::Matrix2d evaluate_gradient(const Solution& solution, const Point& x);

/// sqrt(sum |v_k - w_k|^2 / sum |v_k|^2). Throws on a zero denominator.
double relative_error(std::span<const Eigen::VectorXd> exact, std::span<const Eigen::VectorXd> approx);

struct ErrorNorms {
    double l2 = 0.0;
    double h1 = 0.0;
    /// Elasticity only; NaN otherwise.
    double energy = 0.0;
};

/// Relative value, gradient and (for elasticity) energy errors at the points.
ErrorNorms compute_errors(const ProblemCase& problem, const Solution& solution, std::span<const Point> points);

/// "ROWS COLS NNZ" header followed by one-based "i j v" triplets.
void write_matrix(std::ostream& os, const SparseMatrix& m);
void write_vector(std::ostream& os, const Eigen::VectorXd& v);

}  // namespace molcol
