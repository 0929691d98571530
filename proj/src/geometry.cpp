#include "molcol/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace molcol {

namespace {

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

double cross(const Point& o, const Point& a, const Point& b) { return cross(a - o, b - o); }

double signed_area(const std::vector<Point>& v) {
    double twice = 0.0;
    for (std::size_t i = 0, n = v.size(); i < n; ++i) twice += cross(v[i], v[(i + 1) % n]);
    return 0.5 * twice;
}

double extent(const std::vector<Point>& v) {
    if (v.empty()) return 0.0;
    Point lo = v.front(), hi = v.front();
    for (const auto& p : v) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return (hi - lo).maxCoeff();
}

// Drops consecutive duplicates and vertices that are collinear with their
// neighbours.
std::vector<Point> simplify_loop(std::vector<Point> v, double eps) {
    bool changed = true;
    while (changed && v.size() >= 3) {
        changed = false;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::size_t n = v.size();
            const Point& prev = v[(i + n - 1) % n];
            const Point& next = v[(i + 1) % n];
            const bool duplicate = (v[i] - prev).norm() <= eps;
            const double base = (next - prev).norm();
            const bool collinear = !duplicate && base > eps &&
                                   std::abs(cross(prev, v[i], next)) <= eps * base;
            if (duplicate || collinear) {
                v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
        }
    }
    return v;
}

}  // namespace

double geometric_epsilon(double characteristic_length) { return 1e-12 * characteristic_length; }

// ConvexPolytope -------------------------------------------------------------

ConvexPolytope ConvexPolytope::interval(double a, double b) {
    if (!(a < b)) throw GeometryError("interval requires a < b");
    ConvexPolytope p;
    p.dim_ = 1;
    p.vertices_ = {Point(a, 0.0), Point(b, 0.0)};
    return p;
}

ConvexPolytope ConvexPolytope::polygon(std::vector<Point> ccw_vertices) {
    ConvexPolytope p;
    p.dim_ = 2;
    if (ccw_vertices.size() < 3) throw GeometryError("polygon needs at least 3 vertices");
    const double eps = geometric_epsilon(extent(ccw_vertices));
    auto v = simplify_loop(std::move(ccw_vertices), eps);
    if (v.size() < 3) throw GeometryError("degenerate polygon");
    if (signed_area(v) < 0.0) std::reverse(v.begin(), v.end());
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
        const Point& a = v[i];
        const Point& b = v[(i + 1) % n];
        const Point& c = v[(i + 2) % n];
        if (cross(a, b, c) < -eps * ((b - a).norm() + (c - b).norm()))
            throw GeometryError("polygon is not convex");
    }
    p.vertices_ = std::move(v);
    return p;
}

ConvexPolytope ConvexPolytope::rectangle(const Point& lo, const Point& hi) {
    return polygon({lo, Point(hi.x(), lo.y()), hi, Point(lo.x(), hi.y())});
}

std::pair<Point, Point> ConvexPolytope::bounds() const {
    Point lo = Point::Constant(std::numeric_limits<double>::infinity());
    Point hi = -lo;
    for (const auto& p : vertices_) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return {lo, hi};
}

bool ConvexPolytope::contains(const Point& p, double tol) const {
    if (is_empty()) return false;
    if (dim_ == 1) return p.x() >= lo() - tol && p.x() <= hi() + tol;
    for (std::size_t i = 0, n = vertices_.size(); i < n; ++i) {
        const Point& a = vertices_[i];
        const Point& b = vertices_[(i + 1) % n];
        if (cross(a, b, p) < -tol * (b - a).norm()) return false;
    }
    return true;
}

AxisBox::AxisBox(const Point& c, const Point& hw) : center(c), halfwidth(hw) {
    if (!(hw.x() > 0.0) || !(hw.y() > 0.0)) throw GeometryError("box halfwidth must be positive");
}

double Triangle::area() const { return 0.5 * cross(v[0], v[1], v[2]); }

double QuadratureRule::weight_sum() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

// Measures -------------------------------------------------------------------

std::pair<double, Point> area_centroid(const ConvexPolytope& poly) {
    if (poly.is_empty()) return {0.0, Point::Zero()};
    if (poly.dim() == 1) return {poly.hi() - poly.lo(), Point(0.5 * (poly.lo() + poly.hi()), 0.0)};
    const auto& v = poly.vertices();
    // Shift to the first vertex to limit cancellation.
    const Point o = v.front();
    double twice = 0.0;
    Point c = Point::Zero();
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
        const Point a = v[i] - o;
        const Point b = v[(i + 1) % n] - o;
        const double w = cross(a, b);
        twice += w;
        c += w * (a + b);
    }
    return {0.5 * twice, o + c / (3.0 * twice)};
}

double measure(const ConvexPolytope& poly) { return area_centroid(poly).first; }

// Clipping -------------------------------------------------------------------

ConvexPolytope clip_half_plane(const ConvexPolytope& poly, const Point& normal, double offset) {
    if (poly.is_empty()) return poly;
    const auto& in = poly.vertices();
    std::vector<Point> out;
    out.reserve(in.size() + 1);
    for (std::size_t i = 0, n = in.size(); i < n; ++i) {
        const Point& a = in[i];
        const Point& b = in[(i + 1) % n];
        const double da = normal.dot(a) - offset;
        const double db = normal.dot(b) - offset;
        if (da <= 0.0) out.push_back(a);
        if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
            const double t = da / (da - db);
            out.push_back(a + t * (b - a));
        }
    }
    const double eps = geometric_epsilon(extent(in));
    out = simplify_loop(std::move(out), eps);
    if (out.size() < 3 || signed_area(out) < eps * eps) return ConvexPolytope::empty(2);
    return ConvexPolytope::polygon(std::move(out));
}

ConvexPolytope clip_to_box(const ConvexPolytope& poly, const AxisBox& box) {
    if (poly.is_empty()) return poly;
    const Point lo = box.lo(), hi = box.hi();
    if (poly.dim() == 1) {
        const double a = std::max(poly.lo(), lo.x());
        const double b = std::min(poly.hi(), hi.x());
        const double eps = geometric_epsilon(std::max(poly.hi() - poly.lo(), hi.x() - lo.x()));
        if (b - a <= eps) return ConvexPolytope::empty(1);
        return ConvexPolytope::interval(a, b);
    }
    const auto [plo, phi] = poly.bounds();
    if (phi.x() <= lo.x() || plo.x() >= hi.x() || phi.y() <= lo.y() || plo.y() >= hi.y())
        return ConvexPolytope::empty(2);
    // Fully inside: nothing to clip.
    if (plo.x() >= lo.x() && phi.x() <= hi.x() && plo.y() >= lo.y() && phi.y() <= hi.y())
        return poly;

    ConvexPolytope r = poly;
    if (plo.x() < lo.x()) r = clip_half_plane(r, Point(-1, 0), -lo.x());
    if (phi.x() > hi.x()) r = clip_half_plane(r, Point(1, 0), hi.x());
    if (plo.y() < lo.y()) r = clip_half_plane(r, Point(0, -1), -lo.y());
    if (phi.y() > hi.y()) r = clip_half_plane(r, Point(0, 1), hi.y());
    if (r.is_empty()) return r;
    const double eps = geometric_epsilon(std::max((phi - plo).maxCoeff(), (hi - lo).maxCoeff()));
    if (measure(r) < eps * eps) return ConvexPolytope::empty(2);
    return r;
}

ConvexPolytope minkowski_with_box(const ConvexPolytope& poly, const Point& halfwidth) {
    if (poly.is_empty()) return poly;
    if (poly.dim() == 1) return ConvexPolytope::interval(poly.lo() - halfwidth.x(), poly.hi() + halfwidth.x());
    std::vector<Point> cloud;
    cloud.reserve(poly.size() * 4);
    for (const auto& v : poly.vertices()) {
        cloud.emplace_back(v.x() - halfwidth.x(), v.y() - halfwidth.y());
        cloud.emplace_back(v.x() + halfwidth.x(), v.y() - halfwidth.y());
        cloud.emplace_back(v.x() + halfwidth.x(), v.y() + halfwidth.y());
        cloud.emplace_back(v.x() - halfwidth.x(), v.y() + halfwidth.y());
    }
    return convex_hull(cloud);
}

ConvexPolytope convex_hull(std::span<const Point> points) {
    std::vector<Point> p(points.begin(), points.end());
    if (p.size() < 3) throw GeometryError("degenerate hull");
    std::sort(p.begin(), p.end(), [](const Point& a, const Point& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    const double eps = geometric_epsilon(extent(p));
    std::vector<Point> h(2 * p.size());
    std::size_t k = 0;
    // Strict turns only, so collinear points on hull edges are discarded.
    for (const auto& q : p) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], q) <= eps * (q - h[k - 2]).norm()) --k;
        h[k++] = q;
    }
    for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
        const Point& q = p[i];
        while (k >= t && cross(h[k - 2], h[k - 1], q) <= eps * (q - h[k - 2]).norm()) --k;
        h[k++] = q;
    }
    h.resize(k - 1);
    if (h.size() < 3 || signed_area(h) <= eps * eps) throw GeometryError("degenerate hull");
    return ConvexPolytope::polygon(std::move(h));
}

std::vector<Triangle> fan_triangulate(const ConvexPolytope& poly) {
    if (poly.dim() != 2 || poly.size() < 3) throw GeometryError("fan triangulation needs a polygon");
    const Point c = area_centroid(poly).second;
    const auto& v = poly.vertices();
    std::vector<Triangle> tris;
    tris.reserve(v.size());
    for (std::size_t i = 0, n = v.size(); i < n; ++i) tris.push_back({{c, v[i], v[(i + 1) % n]}});
    return tris;
}

// Quadrature -----------------------------------------------------------------

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute derivative at the converged node.
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[static_cast<std::size_t>(i)] = -x;
        nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        weights[static_cast<std::size_t>(i)] = w;
        weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)] = 0.0;
}

namespace {

int points_for_degree(int degree) { return std::max(1, (degree + 2) / 2); }

void check_degree(int degree) {
    if (degree < 1 || degree > kMaxTriangleDegree)
        throw std::invalid_argument("unsupported quadrature degree " + std::to_string(degree));
}

struct Bary {
    double a, b, c, w;
};

void add_orbit3(std::vector<Bary>& out, double a, double w) {
    const double c = 1.0 - 2.0 * a;
    out.push_back({a, a, c, w});
    out.push_back({a, c, a, w});
    out.push_back({c, a, a, w});
}

// Symmetric rules with positive weights (weights normalised to sum 1).
std::vector<Bary> symmetric_rule(int degree) {
    std::vector<Bary> r;
    switch (degree) {
    case 1:
        r.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0});
        break;
    case 2:
        add_orbit3(r, 1.0 / 6, 1.0 / 3);
        break;
    case 3:
    case 4:
        add_orbit3(r, 0.445948490915965, 0.223381589678011);
        add_orbit3(r, 0.091576213509771, 0.109951743655322);
        break;
    case 5:
        r.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3, 0.225});
        add_orbit3(r, 0.470142064105115, 0.132394152788506);
        add_orbit3(r, 0.101286507323456, 0.125939180544827);
        break;
    default:
        break;
    }
    return r;
}

// Collapsed-coordinate (conical product) rule: x = u, y = v (1 - u) with
// Jacobian (1 - u). Degree in u grows by one because of the Jacobian.
QuadratureRule collapsed_rule(int degree) {
    std::vector<double> xu, wu, xv, wv;
    gauss_legendre(points_for_degree(degree + 1), xu, wu);
    gauss_legendre(points_for_degree(degree), xv, wv);
    QuadratureRule rule;
    rule.degree = degree;
    for (std::size_t i = 0; i < xu.size(); ++i) {
        const double u = 0.5 * (xu[i] + 1.0);
        for (std::size_t j = 0; j < xv.size(); ++j) {
            const double v = 0.5 * (xv[j] + 1.0);
            rule.points.emplace_back(u, v * (1.0 - u));
            rule.weights.push_back(0.25 * wu[i] * wv[j] * (1.0 - u));
        }
    }
    return rule;
}

std::vector<QuadratureRule> build_reference_rules() {
    std::vector<QuadratureRule> rules(kMaxTriangleDegree + 1);
    for (int d = 1; d <= kMaxTriangleDegree; ++d) {
        const auto sym = symmetric_rule(d);
        if (sym.empty()) {
            rules[static_cast<std::size_t>(d)] = collapsed_rule(d);
            continue;
        }
        QuadratureRule& r = rules[static_cast<std::size_t>(d)];
        r.degree = d;
        for (const auto& b : sym) {
            r.points.emplace_back(b.b, b.c);
            r.weights.push_back(0.5 * b.w);
        }
    }
    return rules;
}

}  // namespace

const QuadratureRule& reference_triangle_rule(int degree) {
    check_degree(degree);
    static const std::vector<QuadratureRule> rules = build_reference_rules();
    return rules[static_cast<std::size_t>(degree)];
}

QuadratureRule gauss_rule(double a, double b, int degree) {
    check_degree(degree);
    std::vector<double> x, w;
    gauss_legendre(points_for_degree(degree), x, w);
    QuadratureRule rule;
    rule.degree = degree;
    const double half = 0.5 * (b - a);
    for (std::size_t i = 0; i < x.size(); ++i) {
        rule.points.emplace_back(a + half * (x[i] + 1.0), 0.0);
        rule.weights.push_back(half * w[i]);
    }
    return rule;
}

QuadratureRule gauss_rule(const Triangle& tri, int degree) {
    const QuadratureRule& ref = reference_triangle_rule(degree);
    const Point e1 = tri.v[1] - tri.v[0];
    const Point e2 = tri.v[2] - tri.v[0];
    const double jac = std::abs(cross(e1, e2));
    QuadratureRule rule;
    rule.degree = degree;
    rule.points.reserve(ref.size());
    rule.weights.reserve(ref.size());
    for (std::size_t q = 0; q < ref.size(); ++q) {
        rule.points.push_back(tri.v[0] + ref.points[q].x() * e1 + ref.points[q].y() * e2);
        rule.weights.push_back(ref.weights[q] * jac);
    }
    return rule;
}

QuadratureRule gauss_rule_quad(std::span<const Point, 4> quad, int degree) {
    check_degree(degree);
    std::vector<double> x, w;
    gauss_legendre(points_for_degree(degree), x, w);
    QuadratureRule rule;
    rule.degree = degree;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double s = x[i], t = x[j];
            const double n0 = 0.25 * (1 - s) * (1 - t), n1 = 0.25 * (1 + s) * (1 - t);
            const double n2 = 0.25 * (1 + s) * (1 + t), n3 = 0.25 * (1 - s) * (1 + t);
            const Point p = n0 * quad[0] + n1 * quad[1] + n2 * quad[2] + n3 * quad[3];
            const Point ds = 0.25 * (-(1 - t) * quad[0] + (1 - t) * quad[1] + (1 + t) * quad[2] - (1 + t) * quad[3]);
            const Point dt = 0.25 * (-(1 - s) * quad[0] - (1 + s) * quad[1] + (1 + s) * quad[2] + (1 - s) * quad[3]);
            rule.points.push_back(p);
            rule.weights.push_back(w[i] * w[j] * std::abs(cross(ds, dt)));
        }
    }
    return rule;
}

}  // namespace molcol
