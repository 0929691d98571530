#pragma once

#include "molcol/mesh.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace molcol {

enum class Scheme { Uniform, Gauss, QuasiRandom };

Scheme parse_scheme(std::string_view name);
std::string to_string(Scheme s);

/// Value: prescribe u. Clamped: prescribe u and the normal derivative.
enum class BcTag { Value, Clamped };

struct BoundaryPoint {
    Point x;
    Point normal;  // outward unit normal
    BcTag tag = BcTag::Value;
};

struct CollocationSet {
    std::vector<Point> interior;
    std::vector<BoundaryPoint> boundary;

    std::size_t size() const { return interior.size() + boundary.size(); }
    /// All point locations, interior first.
    std::vector<Point> locations() const;
};

/// Signed-distance threshold below which points are not treated as interior.
inline constexpr double kInteriorThreshold = 1e-5;

/// Equidistant interior points: 1D n points with spacing 1/(n+1), 2D an
/// n x n tensor grid. Throws on non-box domains.
std::vector<Point> uniform_points(const Domain& domain, std::size_t per_axis);

/// Uniform grid with iid per-axis U(-sigma, sigma) perturbations, sigma being
/// sigma_fraction times the grid spacing.
std::vector<Point> quasirandom_points(const Domain& domain, std::size_t per_axis, double sigma_fraction,
                                      std::uint64_t rng_seed, std::uint64_t stream = 0);

/// Quadrature points of degree gamma in every non-ghost cell. Quadrilaterals
/// use the tensor rule, other polygons a fan triangulation. Points closer to
/// the boundary than kInteriorThreshold are dropped when the domain has a hole.
std::vector<Point> gauss_points(const Mesh& mesh, int gamma);

/// Keeps points with signed distance above the threshold.
std::vector<Point> filter_interior(const Domain& domain, std::vector<Point> points,
                                   double threshold = kInteriorThreshold);

/// 1D: the two end points. 2D box: per_edge equally spaced points on every
/// edge, corners included once per incident edge.
std::vector<BoundaryPoint> box_boundary_points(const Domain& domain, std::size_t per_edge, BcTag tag);

/// Gauss points of degree gamma on boundary segments no longer than
/// max_segment, covering box edges and the hole arc.
std::vector<BoundaryPoint> gauss_boundary_points(const Domain& domain, double max_segment, int gamma, BcTag tag);

/// CSV with header "x,y,kind,tag".
void write_points_csv(std::ostream& os, const CollocationSet& set);

}  // namespace molcol
