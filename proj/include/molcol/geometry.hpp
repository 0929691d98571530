#pragma once

#include <Eigen/Core>

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

namespace molcol {

using Point = Eigen::Vector2d;

/// Thrown for invalid geometric input (degenerate hulls, bad polygons).
class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Convex cell or support region.
///
/// In 1D the polytope is an interval stored as two points whose x
/// coordinates satisfy a < b (y is ignored). In 2D it is a convex polygon
/// with vertices in counter-clockwise order. An empty polytope has no
/// vertices.
class ConvexPolytope {
public:
    ConvexPolytope() = default;

    static ConvexPolytope interval(double a, double b);
    static ConvexPolytope polygon(std::vector<Point> ccw_vertices);
    static ConvexPolytope rectangle(const Point& lo, const Point& hi);
    static ConvexPolytope empty(int dim) { ConvexPolytope p; p.dim_ = dim; return p; }

    int dim() const { return dim_; }
    bool is_empty() const { return vertices_.empty(); }
    const std::vector<Point>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }

    // 1D accessors
    double lo() const { return vertices_.front().x(); }
    double hi() const { return vertices_.back().x(); }

    /// Axis-aligned bounding box as (min corner, max corner).
    std::pair<Point, Point> bounds() const;

    bool contains(const Point& p, double tol = 0.0) const;

private:
    int dim_ = 2;
    std::vector<Point> vertices_;
};

/// Axis-aligned box with a half width per axis (the mollifier footprint).
struct AxisBox {
    Point center = Point::Zero();
    Point halfwidth = Point::Ones();

    AxisBox() = default;
    AxisBox(const Point& c, const Point& hw);
    AxisBox(const Point& c, double hw) : AxisBox(c, Point(hw, hw)) {}

    Point lo() const { return center - halfwidth; }
    Point hi() const { return center + halfwidth; }
};

struct Triangle {
    std::array<Point, 3> v;
    double area() const;
};

struct QuadratureRule {
    std::vector<Point> points;
    std::vector<double> weights;
    int degree = 0;

    std::size_t size() const { return points.size(); }
    double weight_sum() const;
};

// Absolute tolerance used for vertex merging and sliver rejection, scaled by
// the characteristic length of the inputs.
double geometric_epsilon(double characteristic_length);

/// Measure and centroid. 1D: length and midpoint; 2D: shoelace area and
/// area-weighted centroid.
std::pair<double, Point> area_centroid(const ConvexPolytope& poly);
double measure(const ConvexPolytope& poly);

/// Exact intersection of a convex polytope with an axis-aligned box. Slivers
/// below the geometric tolerance come back empty.
ConvexPolytope clip_to_box(const ConvexPolytope& poly, const AxisBox& box);

/// Clip a 2D convex polygon by the half-plane { x : n.x <= c }.
ConvexPolytope clip_half_plane(const ConvexPolytope& poly, const Point& normal, double offset);

/// Minkowski sum with an axis-aligned box centred at the origin.
ConvexPolytope minkowski_with_box(const ConvexPolytope& poly, const Point& halfwidth);

/// Monotone-chain hull; collinear input throws GeometryError("degenerate hull").
ConvexPolytope convex_hull(std::span<const Point> points);

/// Fan triangulation about the area centroid.
std::vector<Triangle> fan_triangulate(const ConvexPolytope& poly);

// Quadrature -----------------------------------------------------------------

constexpr int kMaxTriangleDegree = 40;

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Rule on [a, b] exact for polynomials of degree <= degree.
QuadratureRule gauss_rule(double a, double b, int degree);

/// Rule on a physical triangle exact for polynomials of total degree <= degree.
QuadratureRule gauss_rule(const Triangle& tri, int degree);

/// Tensor Gauss rule on a (possibly non-rectangular) convex quadrilateral,
/// mapped bilinearly from [-1,1]^2.
QuadratureRule gauss_rule_quad(std::span<const Point, 4> quad, int degree);

/// Barycentric rule on the reference triangle (0,0),(1,0),(0,1); weights sum to 1/2.
const QuadratureRule& reference_triangle_rule(int degree);

}  // namespace molcol
