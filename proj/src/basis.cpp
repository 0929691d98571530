#include "molcol/basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace molcol {

std::size_t monomial_count(int dim, int order) {
    if (order < 0) throw std::invalid_argument("polynomial order must be >= 0");
    const auto r = static_cast<std::size_t>(order);
    return dim == 1 ? r + 1 : (r + 1) * (r + 2) / 2;
}

MonomialSet MonomialSet::make(int dim, int order, const Point& centroid, double h) {
    MonomialSet m;
    m.order = order;
    m.centroid = centroid;
    m.h = h;
    for (int total = 0; total <= order; ++total) {
        if (dim == 1) {
            m.exponents.push_back({total, 0});
            continue;
        }
        for (int ey = 0; ey <= total; ++ey) m.exponents.push_back({total - ey, ey});
    }
    return m;
}

double SparseRow::dot(const Eigen::VectorXd& u) const {
    double s = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) s += vals[k] * u[cols[k]];
    return s;
}

BasisSet::BasisSet(Mesh mesh, Mollifier mollifier, int order)
    : mesh_(std::move(mesh)), mollifier_(std::move(mollifier)), order_(order),
      per_cell_(monomial_count(mesh_.dim(), order)) {
    if (mollifier_.dim() != mesh_.dim()) throw std::invalid_argument("mollifier and mesh dimensions differ");
    const double hw = 0.5 * mollifier_.width();
    const Point halfwidth(hw, hw);
    Point lo = Point::Constant(std::numeric_limits<double>::infinity());
    Point hi = -lo;
    // Monomials are centred on the area centroid of each group.
    const std::size_t groups = mesh_.group_count();
    std::vector<double> group_area(groups, 0.0);
    std::vector<Point> group_moment(groups, Point::Zero());
    std::vector<double> group_h(groups, mesh_.h_avg);
    for (std::size_t i = 0; i < mesh_.size(); ++i) {
        const auto [area, centroid] = area_centroid(mesh_.cells[i]);
        const std::size_t g = mesh_.owner_of(i);
        group_area[g] += area;
        group_moment[g] += area * centroid;
        if (mesh_.dim() == 1) group_h[g] = mesh_.h_cell[i];
    }
    for (std::size_t g = 0; g < groups; ++g)
        monomials_.push_back(MonomialSet::make(mesh_.dim(), order, group_moment[g] / group_area[g], group_h[g]));
    for (std::size_t i = 0; i < mesh_.size(); ++i) {
        const auto& cell = mesh_.cells[i];
        supports_.push_back(minkowski_with_box(cell, halfwidth));
        support_bounds_.push_back(supports_.back().bounds());
        lo = lo.cwiseMin(support_bounds_.back().first);
        hi = hi.cwiseMax(support_bounds_.back().second);
    }
    if (mesh_.dim() == 1) {
        lo.y() = -1.0;
        hi.y() = 1.0;
    }
    const int n = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(mesh_.size())))));
    grid_nx_ = mesh_.dim() == 1 ? static_cast<int>(mesh_.size()) : n;
    grid_ny_ = mesh_.dim() == 1 ? 1 : n;
    grid_lo_ = lo;
    grid_cell_ = Point((hi.x() - lo.x()) / grid_nx_, (hi.y() - lo.y()) / grid_ny_);
    buckets_.assign(static_cast<std::size_t>(grid_nx_ * grid_ny_), {});
    auto clamp_index = [](double v, int n) { return std::clamp(static_cast<int>(std::floor(v)), 0, n - 1); };
    for (std::size_t i = 0; i < mesh_.size(); ++i) {
        const auto& [blo, bhi] = support_bounds_[i];
        const int i0 = clamp_index((blo.x() - lo.x()) / grid_cell_.x(), grid_nx_);
        const int i1 = clamp_index((bhi.x() - lo.x()) / grid_cell_.x(), grid_nx_);
        const int j0 = mesh_.dim() == 1 ? 0 : clamp_index((blo.y() - lo.y()) / grid_cell_.y(), grid_ny_);
        const int j1 = mesh_.dim() == 1 ? 0 : clamp_index((bhi.y() - lo.y()) / grid_cell_.y(), grid_ny_);
        for (int j = j0; j <= j1; ++j)
            for (int k = i0; k <= i1; ++k) buckets_[static_cast<std::size_t>(j * grid_nx_ + k)].push_back(i);
    }
}

std::vector<std::size_t> BasisSet::candidate_cells(const Point& x) const {
    const double fx = (x.x() - grid_lo_.x()) / grid_cell_.x();
    const double fy = mesh_.dim() == 1 ? 0.0 : (x.y() - grid_lo_.y()) / grid_cell_.y();
    if (fx < 0.0 || fy < 0.0 || fx > grid_nx_ || fy > grid_ny_) return {};
    const int i = std::min(static_cast<int>(fx), grid_nx_ - 1);
    const int j = std::min(static_cast<int>(fy), grid_ny_ - 1);
    std::vector<std::size_t> out;
    for (std::size_t c : buckets_[static_cast<std::size_t>(j * grid_nx_ + i)]) {
        const auto& [lo, hi] = support_bounds_[c];
        if (x.x() < lo.x() || x.x() > hi.x()) continue;
        if (mesh_.dim() == 2 && (x.y() < lo.y() || x.y() > hi.y())) continue;
        out.push_back(c);
    }
    return out;
}

void BasisSet::check_derivs(std::span<const Deriv> derivs) const {
    const int limit = mollifier_.smoothness() + 1;
    for (const auto& d : derivs) {
        if (d.dx < 0 || d.dy < 0 || (mesh_.dim() == 1 && d.dy != 0))
            throw std::domain_error("invalid derivative multi-index");
        if (d.dx > limit || d.dy > limit)
            throw std::domain_error("derivative order exceeds mollifier class " +
                                    std::to_string(mollifier_.smoothness()) + " + 1");
    }
}

SparseRow BasisSet::eval_at(const Point& x, Deriv deriv) const {
    const Deriv d[] = {deriv};
    return std::move(evaluate(x, d).front());
}

std::vector<SparseRow> BasisSet::evaluate(const Point& x, std::span<const Deriv> derivs) const {
    check_derivs(derivs);
    const int dim = mesh_.dim();
    const std::size_t nd = derivs.size();
    std::vector<SparseRow> rows(nd);

    const double w = mollifier_.width();
    const double hw = 0.5 * w;
    const int piece_degree = mollifier_.piece_degree();
    int degree = 1;
    int max_dx = 0, max_dy = 0;
    for (const auto& d : derivs) {
        const int kd = (piece_degree - d.dx) + (dim == 2 ? piece_degree - d.dy : 0) + order_;
        degree = std::max(degree, kd);
        max_dx = std::max(max_dx, d.dx);
        max_dy = std::max(max_dy, d.dy);
    }
    degree = std::min(degree, kMaxTriangleDegree);

    // Kernel pieces in y: m(x - y) changes polynomial at y = x - s_k.
    const auto& tb = mollifier_.profile().breaks;
    std::vector<std::pair<double, double>> xs, ys;
    for (std::size_t k = 0; k + 1 < tb.size(); ++k) {
        xs.emplace_back(x.x() - tb[k + 1] * w, x.x() - tb[k] * w);
        if (dim == 2) ys.emplace_back(x.y() - tb[k + 1] * w, x.y() - tb[k] * w);
    }
    if (dim == 1) ys.emplace_back(x.y() - 1.0, x.y() + 1.0);
    const bool one_piece = tb.size() == 2;
    const AxisBox footprint(x, dim == 1 ? Point(hw, 1.0) : Point(hw, hw));

    const QuadratureRule& tri_rule = reference_triangle_rule(degree);
    const QuadratureRule line_rule = gauss_rule(-1.0, 1.0, degree);

    std::vector<double> acc(nd * per_cell_);
    std::vector<double> kx(static_cast<std::size_t>(max_dx + 1)), ky(static_cast<std::size_t>(max_dy + 1));
    std::vector<double> px(static_cast<std::size_t>(order_ + 1)), py(static_cast<std::size_t>(order_ + 1));

    const auto& profile = mollifier_.profile();
    std::vector<double> inv_w(static_cast<std::size_t>(std::max(max_dx, max_dy) + 2));
    inv_w[0] = 1.0;
    for (std::size_t k = 1; k < inv_w.size(); ++k) inv_w[k] = inv_w[k - 1] / w;

    auto add_point = [&](const MonomialSet& mono, const Point& y, double weight) {
        const double ox = (x.x() - y.x()) / w;
        for (int k = 0; k <= max_dx; ++k)
            kx[static_cast<std::size_t>(k)] = profile.eval(ox, k) * inv_w[static_cast<std::size_t>(k + 1)];
        if (dim == 2) {
            const double oy = (x.y() - y.y()) / w;
            for (int k = 0; k <= max_dy; ++k)
                ky[static_cast<std::size_t>(k)] = profile.eval(oy, k) * inv_w[static_cast<std::size_t>(k + 1)];
        } else {
            ky[0] = 1.0;
        }
        const double scale = 2.0 / mono.h;
        const double xi = scale * (y.x() - mono.centroid.x());
        const double eta = dim == 2 ? scale * (y.y() - mono.centroid.y()) : 0.0;
        px[0] = py[0] = 1.0;
        for (int k = 1; k <= order_; ++k) {
            px[static_cast<std::size_t>(k)] = px[static_cast<std::size_t>(k - 1)] * xi;
            py[static_cast<std::size_t>(k)] = py[static_cast<std::size_t>(k - 1)] * eta;
        }
        for (std::size_t d = 0; d < nd; ++d) {
            const double kern =
                weight * kx[static_cast<std::size_t>(derivs[d].dx)] * ky[static_cast<std::size_t>(derivs[d].dy)];
            if (kern == 0.0) continue;
            double* a = acc.data() + d * per_cell_;
            for (std::size_t m = 0; m < per_cell_; ++m) {
                const auto& e = mono.exponents[m];
                a[m] += kern * px[static_cast<std::size_t>(e[0])] * py[static_cast<std::size_t>(e[1])];
            }
        }
    };

    auto integrate = [&](const MonomialSet& mono, const ConvexPolytope& region) {
        if (dim == 1) {
            const double a = region.lo(), b = region.hi();
            const double half = 0.5 * (b - a);
            for (std::size_t q = 0; q < line_rule.size(); ++q) {
                const double t = line_rule.points[q].x();
                add_point(mono, Point(a + half * (t + 1.0), 0.0), half * line_rule.weights[q]);
            }
            return;
        }
        for (const auto& tri : fan_triangulate(region)) {
            const Point e1 = tri.v[1] - tri.v[0];
            const Point e2 = tri.v[2] - tri.v[0];
            const double jac = std::abs(e1.x() * e2.y() - e1.y() * e2.x());
            for (std::size_t q = 0; q < tri_rule.size(); ++q) {
                const Point& r = tri_rule.points[q];
                add_point(mono, tri.v[0] + r.x() * e1 + r.y() * e2, jac * tri_rule.weights[q]);
            }
        }
    };

    for (std::size_t c : candidate_cells(x)) {
        const ConvexPolytope tau = clip_to_box(mesh_.cells[c], footprint);
        if (tau.is_empty()) continue;
        std::fill(acc.begin(), acc.end(), 0.0);
        const std::size_t group = mesh_.owner_of(c);
        const MonomialSet& mono = monomials_[group];
        if (one_piece) {
            integrate(mono, tau);
        } else {
            const auto [tlo, thi] = tau.bounds();
            for (const auto& [x0, x1] : xs) {
                if (x1 <= tlo.x() || x0 >= thi.x()) continue;
                for (const auto& [y0, y1] : ys) {
                    if (dim == 2 && (y1 <= tlo.y() || y0 >= thi.y())) continue;
                    const AxisBox piece(Point(0.5 * (x0 + x1), 0.5 * (y0 + y1)),
                                        Point(0.5 * (x1 - x0), 0.5 * (y1 - y0)));
                    const ConvexPolytope sub = clip_to_box(tau, piece);
                    if (!sub.is_empty()) integrate(mono, sub);
                }
            }
        }
        for (std::size_t d = 0; d < nd; ++d) {
            for (std::size_t m = 0; m < per_cell_; ++m) {
                rows[d].cols.push_back(column(group, m));
                rows[d].vals.push_back(acc[d * per_cell_ + m]);
            }
        }
    }
    return rows;
}

}  // namespace molcol
