#pragma once

#include "molcol/geometry.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace molcol {

/// Axis-aligned box (or interval when dim == 1), optionally with a circular
/// hole removed.
struct Domain {
    int dim = 2;
    Point lo = Point::Zero();
    Point hi = Point::Ones();

    struct Hole {
        Point center;
        double radius;
    };
    std::optional<Hole> hole;

    static Domain interval(double a, double b);
    static Domain box(const Point& lo, const Point& hi);

    /// Signed distance, positive inside.
    double signed_distance(const Point& p) const;
    /// Whether the domain has tensor-product structure.
    bool is_box() const { return !hole.has_value(); }
    double box_measure() const;
    /// True when the polytope overlaps the domain in a set of positive measure.
    bool overlaps(const ConvexPolytope& poly) const;
};

/// Polytopic partition of a domain plus the ghost cells padded around it.
struct Mesh {
    Domain domain;
    std::vector<ConvexPolytope> cells;
    std::vector<bool> is_ghost;
    /// Per-cell size: length in 1D, sqrt(area) in 2D.
    std::vector<double> h_cell;
    /// Square root of the average interior cell area (1D: average length).
    double h_avg = 0.0;
    /// Voronoi seeds for the interior cells, when the mesh came from a tessellation.
    std::vector<Point> seeds;
    /// Polynomial group of each cell; cells sharing a group carry one set of
    /// monomials. Empty means every cell is its own group.
    std::vector<std::size_t> owner;

    int dim() const { return domain.dim; }
    std::size_t size() const { return cells.size(); }
    std::size_t owner_of(std::size_t cell) const { return owner.empty() ? cell : owner[cell]; }
    std::size_t group_count() const;
    std::size_t interior_count() const;
    /// Groups made of ghost cells only.
    std::size_t ghost_count() const { return group_count() - interior_count(); }
    double max_interior_h() const;

    /// Recomputes h_cell and h_avg from the cells.
    void update_sizes();
};

/// Consecutive intervals between strictly increasing breakpoints.
Mesh intervals_1d(const std::vector<double>& breakpoints);
Mesh uniform_intervals_1d(double a, double b, int n);
/// Splits every interior cell in two.
Mesh bisect_1d(const Mesh& mesh);

/// Voronoi tessellation of a box by half-plane clipping.
Mesh voronoi_2d(const std::vector<Point>& seeds, const Point& lo, const Point& hi);

/// Quasi-uniform seeds: deterministic pseudo-random sampling in the box
/// followed by Lloyd relaxation.
std::vector<Point> quasi_uniform_seeds(std::size_t count, const Point& lo, const Point& hi,
                                       std::uint64_t rng_seed, int lloyd_iterations = 10);

/// Structured 4 x 4 quadrilateral mesh of the unit quarter plate with a hole
/// of radius 0.25 at the origin, refined `level` times by edge-midpoint
/// quadrisection. Cells lying entirely inside the hole are flagged ghost.
Mesh quarter_plate_hole_mesh(int level);

/// Pads the mesh with ghost cells. 1D: one cell of width h_m at each end.
/// 2D: interior cells mirrored across every edge and corner of the box,
/// clipped to the box enlarged by h_m. Ghosts whose basis support cannot
/// reach the domain are discarded. A ghost reaching less than h_m / 4 into
/// the domain sees too few points to carry its own polynomials and joins the
/// group of the neighbour it shares the longest edge with.
Mesh pad_ghost(const Mesh& mesh, double h_m);

/// Mollifier width: 2 kappa max h_c (1D) or 2 kappa sqrt(|box| / n_c) (2D).
double mollifier_width(const Mesh& mesh, double kappa);

/// Text format: "DIM n_vertices n_cells", vertex lines "x y", cell lines
/// "k i_1 ... i_k ghostflag".
void write_mesh(std::ostream& os, const Mesh& mesh);
Mesh read_mesh(std::istream& is, const Domain& domain);

}  // namespace molcol
