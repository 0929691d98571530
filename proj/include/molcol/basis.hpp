#pragma once

#include "molcol/mesh.hpp"
#include "molcol/mollifier.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace molcol {

/// Scaled monomials of one cell, p(x) = prod_j xi_j^e_j with
/// xi = 2 (x - centroid) / h.
struct MonomialSet {
    int order = 0;
    std::vector<std::array<int, 2>> exponents;
    Point centroid = Point::Zero();
    double h = 1.0;

    static MonomialSet make(int dim, int order, const Point& centroid, double h);
    std::size_t size() const { return exponents.size(); }
};

/// Number of monomials of total degree <= order.
std::size_t monomial_count(int dim, int order);

struct SparseRow {
    std::vector<Eigen::Index> cols;
    std::vector<double> vals;

    std::size_t size() const { return cols.size(); }
    double dot(const Eigen::VectorXd& u) const;
};

/// All mollified basis functions N_{i,k}(x) = int_{group i} m(x - y) p_{i,k}(y) dy
/// of a padded mesh, where a group is one cell or a cell with merged ghosts.
/// Column index of (group i, monomial k) is i * |p| + k.
class BasisSet {
public:
    BasisSet(Mesh mesh, Mollifier mollifier, int order);

    const Mesh& mesh() const { return mesh_; }
    const Mollifier& mollifier() const { return mollifier_; }
    int order() const { return order_; }
    int dim() const { return mesh_.dim(); }
    std::size_t monomials_per_cell() const { return per_cell_; }
    std::size_t group_count() const { return monomials_.size(); }
    std::size_t size() const { return group_count() * per_cell_; }
    Eigen::Index column(std::size_t group, std::size_t monomial) const {
        return static_cast<Eigen::Index>(group * per_cell_ + monomial);
    }
    const MonomialSet& monomials(std::size_t group) const { return monomials_[group]; }

    /// Minkowski support of the part of a group's basis functions coming from one cell.
    const ConvexPolytope& support_of(std::size_t cell) const { return supports_.at(cell); }

    /// Cells whose support box may contain x (superset of the true set).
    std::vector<std::size_t> candidate_cells(const Point& x) const;

    /// One sparse row per requested derivative, sharing a column pattern.
    /// Throws std::domain_error when a per-axis order exceeds the mollifier
    /// smoothness plus one.
    std::vector<SparseRow> evaluate(const Point& x, std::span<const Deriv> derivs) const;
    SparseRow eval_at(const Point& x, Deriv deriv = {}) const;

private:
    void check_derivs(std::span<const Deriv> derivs) const;

    Mesh mesh_;
    Mollifier mollifier_;
    int order_;
    std::size_t per_cell_;
    std::vector<MonomialSet> monomials_;
    std::vector<ConvexPolytope> supports_;
    std::vector<std::pair<Point, Point>> support_bounds_;
    // Uniform bucket grid over the support bounding boxes.
    Point grid_lo_ = Point::Zero();
    Point grid_cell_ = Point::Ones();
    int grid_nx_ = 1;
    int grid_ny_ = 1;
    std::vector<std::vector<std::size_t>> buckets_;
};

}  // namespace molcol
