#include "molcol/mesh.hpp"

#include "molcol/random.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace molcol {

// Domain ---------------------------------------------------------------------

Domain Domain::interval(double a, double b) {
    if (!(a < b)) throw std::invalid_argument("interval domain requires a < b");
    Domain d;
    d.dim = 1;
    d.lo = Point(a, 0.0);
    d.hi = Point(b, 0.0);
    return d;
}

Domain Domain::box(const Point& lo, const Point& hi) {
    if (!(lo.x() < hi.x() && lo.y() < hi.y())) throw std::invalid_argument("box domain requires lo < hi");
    Domain d;
    d.dim = 2;
    d.lo = lo;
    d.hi = hi;
    return d;
}

double Domain::signed_distance(const Point& p) const {
    if (dim == 1) return std::min(p.x() - lo.x(), hi.x() - p.x());
    const Point outside = (lo - p).cwiseMax(p - hi);
    double sd;
    if (outside.maxCoeff() <= 0.0)
        sd = -outside.maxCoeff();
    else
        sd = -outside.cwiseMax(0.0).norm();
    if (hole) sd = std::min(sd, (p - hole->center).norm() - hole->radius);
    return sd;
}

double Domain::box_measure() const {
    return dim == 1 ? hi.x() - lo.x() : (hi.x() - lo.x()) * (hi.y() - lo.y());
}

bool Domain::overlaps(const ConvexPolytope& poly) const {
    if (poly.is_empty()) return false;
    const Point half = 0.5 * (hi - lo);
    const Point mid = 0.5 * (hi + lo);
    const AxisBox b(mid, dim == 1 ? Point(half.x(), 1.0) : half);
    const ConvexPolytope inside = clip_to_box(poly, b);
    if (inside.is_empty()) return false;
    if (!hole) return true;
    const double tol = 1e-9 * hole->radius;
    return std::any_of(inside.vertices().begin(), inside.vertices().end(), [&](const Point& v) {
        return (v - hole->center).norm() > hole->radius + tol;
    });
}

// Mesh -----------------------------------------------------------------------

std::size_t Mesh::group_count() const {
    if (owner.empty()) return size();
    return *std::max_element(owner.begin(), owner.end()) + 1;
}

std::size_t Mesh::interior_count() const {
    return static_cast<std::size_t>(std::count(is_ghost.begin(), is_ghost.end(), false));
}

double Mesh::max_interior_h() const {
    double h = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
        if (!is_ghost[i]) h = std::max(h, h_cell[i]);
    return h;
}

void Mesh::update_sizes() {
    h_cell.resize(cells.size());
    double total = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const double m = measure(cells[i]);
        h_cell[i] = dim() == 1 ? m : std::sqrt(m);
        if (!is_ghost[i]) {
            total += m;
            ++n;
        }
    }
    if (n == 0) throw std::invalid_argument("mesh has no interior cells");
    h_avg = dim() == 1 ? total / static_cast<double>(n) : std::sqrt(total / static_cast<double>(n));
}

Mesh intervals_1d(const std::vector<double>& breakpoints) {
    if (breakpoints.size() < 2) throw std::invalid_argument("need at least two breakpoints");
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        if (!(breakpoints[i] < breakpoints[i + 1]))
            throw std::invalid_argument("breakpoints must be strictly increasing");
    Mesh m;
    m.domain = Domain::interval(breakpoints.front(), breakpoints.back());
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        m.cells.push_back(ConvexPolytope::interval(breakpoints[i], breakpoints[i + 1]));
        m.is_ghost.push_back(false);
    }
    m.update_sizes();
    return m;
}

Mesh uniform_intervals_1d(double a, double b, int n) {
    if (n < 1) throw std::invalid_argument("need at least one cell");
    std::vector<double> x(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) x[static_cast<std::size_t>(i)] = a + (b - a) * i / n;
    x.back() = b;
    return intervals_1d(x);
}

Mesh bisect_1d(const Mesh& mesh) {
    if (mesh.dim() != 1) throw std::invalid_argument("bisect_1d needs a 1D mesh");
    std::vector<double> x;
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        if (mesh.is_ghost[i]) continue;
        const auto& c = mesh.cells[i];
        if (x.empty()) x.push_back(c.lo());
        x.push_back(0.5 * (c.lo() + c.hi()));
        x.push_back(c.hi());
    }
    return intervals_1d(x);
}

namespace {

ConvexPolytope voronoi_cell(std::size_t i, const std::vector<Point>& seeds, const ConvexPolytope& bbox,
                            std::vector<std::size_t>& order) {
    const Point& s = seeds[i];
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return (seeds[a] - s).squaredNorm() < (seeds[b] - s).squaredNorm();
    });
    ConvexPolytope cell = bbox;
    for (std::size_t j : order) {
        if (j == i) continue;
        const Point& t = seeds[j];
        double reach = 0.0;
        for (const auto& v : cell.vertices()) reach = std::max(reach, (v - s).norm());
        // Bisectors farther than every vertex cannot cut the cell.
        if (0.5 * (t - s).norm() > reach) break;
        const Point n = t - s;
        cell = clip_half_plane(cell, n, 0.5 * (t.squaredNorm() - s.squaredNorm()));
        if (cell.is_empty()) break;
    }
    return cell;
}

}  // namespace

Mesh voronoi_2d(const std::vector<Point>& seeds, const Point& lo, const Point& hi) {
    if (seeds.size() < 2) throw std::invalid_argument("voronoi_2d needs at least two seeds");
    const double scale = (hi - lo).maxCoeff();
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        if ((seeds[i] - lo).minCoeff() < 0.0 || (hi - seeds[i]).minCoeff() < 0.0)
            throw std::invalid_argument("voronoi seed outside bounding box");
        for (std::size_t j = 0; j < i; ++j)
            if ((seeds[i] - seeds[j]).norm() <= geometric_epsilon(scale))
                throw std::invalid_argument("duplicate voronoi seeds");
    }
    Mesh m;
    m.domain = Domain::box(lo, hi);
    m.seeds = seeds;
    const ConvexPolytope bbox = ConvexPolytope::rectangle(lo, hi);
    std::vector<std::size_t> order(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        ConvexPolytope cell = voronoi_cell(i, seeds, bbox, order);
        if (cell.is_empty()) throw std::runtime_error("empty voronoi cell");
        m.cells.push_back(std::move(cell));
        m.is_ghost.push_back(false);
    }
    m.update_sizes();
    return m;
}

std::vector<Point> quasi_uniform_seeds(std::size_t count, const Point& lo, const Point& hi,
                                       std::uint64_t rng_seed, int lloyd_iterations) {
    CounterRng rng(rng_seed);
    std::vector<Point> seeds(count);
    for (auto& s : seeds) {
        const double x = rng.uniform(lo.x(), hi.x());
        const double y = rng.uniform(lo.y(), hi.y());
        s = Point(x, y);
    }
    for (int it = 0; it < lloyd_iterations; ++it) {
        const Mesh m = voronoi_2d(seeds, lo, hi);
        for (std::size_t i = 0; i < count; ++i) seeds[i] = area_centroid(m.cells[i]).second;
    }
    return seeds;
}

Mesh quarter_plate_hole_mesh(int level) {
    if (level < 0) throw std::invalid_argument("level must be >= 0");
    constexpr double kHoleRadius = 0.25;
    const int n = 4 << level;
    Mesh m;
    m.domain = Domain::box(Point(0, 0), Point(1, 1));
    m.domain.hole = Domain::Hole{Point(0, 0), kHoleRadius};
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const Point lo(static_cast<double>(i) / n, static_cast<double>(j) / n);
            const Point hi(static_cast<double>(i + 1) / n, static_cast<double>(j + 1) / n);
            ConvexPolytope cell = ConvexPolytope::rectangle(lo, hi);
            const bool in_hole = hi.norm() <= kHoleRadius;
            m.cells.push_back(std::move(cell));
            m.is_ghost.push_back(in_hole);
        }
    }
    m.update_sizes();
    return m;
}

namespace {

ConvexPolytope reflect(const ConvexPolytope& poly, std::optional<double> x_axis, std::optional<double> y_axis) {
    std::vector<Point> v;
    v.reserve(poly.size());
    for (auto it = poly.vertices().rbegin(); it != poly.vertices().rend(); ++it) {
        Point p = *it;
        if (x_axis) p.x() = 2.0 * *x_axis - p.x();
        if (y_axis) p.y() = 2.0 * *y_axis - p.y();
        v.push_back(p);
    }
    // Mirroring in both axes preserves orientation; polygon() fixes it either way.
    return ConvexPolytope::polygon(std::move(v));
}

}  // namespace

namespace {

// Total length of the boundary two polygons share.
double shared_edge_length(const ConvexPolytope& a, const ConvexPolytope& b) {
    const auto& va = a.vertices();
    const auto& vb = b.vertices();
    double total = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        const Point p = va[i], q = va[(i + 1) % va.size()];
        const Point t = q - p;
        const double len = t.norm();
        const double tol = geometric_epsilon(len);
        const Point u = t / len;
        for (std::size_t j = 0; j < vb.size(); ++j) {
            const Point r = vb[j], s = vb[(j + 1) % vb.size()];
            auto off_line = [&](const Point& x) { return std::abs(u.x() * (x - p).y() - u.y() * (x - p).x()); };
            if (off_line(r) > tol || off_line(s) > tol) continue;
            const double r0 = u.dot(r - p), s0 = u.dot(s - p);
            total += std::max(0.0, std::min(len, std::max(r0, s0)) - std::max(0.0, std::min(r0, s0)));
        }
    }
    return total;
}

}  // namespace

Mesh pad_ghost(const Mesh& mesh, double h_m) {
    if (!(h_m > 0.0)) throw std::invalid_argument("pad_ghost: h_m must be positive");
    Mesh out = mesh;
    const Point reach(0.5 * h_m, 0.5 * h_m);
    if (mesh.dim() == 1) {
        const double a = mesh.domain.lo.x(), b = mesh.domain.hi.x();
        out.cells.insert(out.cells.begin(), ConvexPolytope::interval(a - h_m, a));
        out.is_ghost.insert(out.is_ghost.begin(), true);
        out.cells.push_back(ConvexPolytope::interval(b, b + h_m));
        out.is_ghost.push_back(true);
        out.update_sizes();
        return out;
    }

    const Domain& d = mesh.domain;
    // Whole reflected cells: clipping to a thin band would leave slivers whose
    // bases are numerically dependent.
    const AxisBox band(0.5 * (d.lo + d.hi), 0.5 * (d.hi - d.lo) + Point(h_m, h_m));
    const std::optional<double> none;
    const std::optional<double> xs[] = {none, d.lo.x(), d.hi.x()};
    const std::optional<double> ys[] = {none, d.lo.y(), d.hi.y()};
    for (const auto& cell : mesh.cells) {
        for (const auto& rx : xs) {
            for (const auto& ry : ys) {
                if (!rx && !ry) continue;
                ConvexPolytope ghost = clip_to_box(reflect(cell, rx, ry), band);
                if (ghost.is_empty()) continue;
                out.cells.push_back(std::move(ghost));
                out.is_ghost.push_back(true);
            }
        }
    }
    // Drop ghosts whose basis support never reaches the domain and merge the
    // ones that barely do.
    const Point weak_reach(0.25 * h_m, 0.25 * h_m);
    Mesh kept;
    kept.domain = out.domain;
    kept.seeds = out.seeds;
    std::vector<bool> weak;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out.is_ghost[i] && !d.overlaps(minkowski_with_box(out.cells[i], reach))) continue;
        kept.cells.push_back(out.cells[i]);
        kept.is_ghost.push_back(out.is_ghost[i]);
        weak.push_back(out.is_ghost[i] && !d.overlaps(minkowski_with_box(out.cells[i], weak_reach)));
    }
    std::vector<std::size_t> group(kept.size());
    std::size_t groups = 0;
    for (std::size_t i = 0; i < kept.size(); ++i)
        if (!weak[i]) group[i] = groups++;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (!weak[i]) continue;
        const Point ci = area_centroid(kept.cells[i]).second;
        std::size_t best = kept.size();
        double best_edge = 0.0, best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < kept.size(); ++j) {
            if (weak[j]) continue;
            const double edge = shared_edge_length(kept.cells[i], kept.cells[j]);
            const double dist = (area_centroid(kept.cells[j]).second - ci).norm();
            if (edge > best_edge || (best_edge == 0.0 && dist < best_dist)) {
                best = j;
                best_edge = edge;
                best_dist = dist;
            }
        }
        group[i] = group[best];
    }
    kept.owner = std::move(group);
    kept.update_sizes();
    return kept;
}

double mollifier_width(const Mesh& mesh, double kappa) {
    if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
    if (mesh.dim() == 1) {
        double h = 0.0;
        for (std::size_t i = 0; i < mesh.size(); ++i)
            if (!mesh.is_ghost[i]) h = std::max(h, mesh.h_cell[i]);
        return 2.0 * kappa * h;
    }
    // Counts every cell of the unpadded partition, including cells swallowed by a hole.
    return 2.0 * kappa * std::sqrt(mesh.domain.box_measure() / static_cast<double>(mesh.size()));
}

// Text I/O -------------------------------------------------------------------

void write_mesh(std::ostream& os, const Mesh& mesh) {
    std::map<std::pair<double, double>, std::size_t> index;
    std::vector<Point> verts;
    std::vector<std::vector<std::size_t>> cells;
    for (const auto& c : mesh.cells) {
        std::vector<std::size_t> ids;
        for (const auto& v : c.vertices()) {
            const auto key = std::make_pair(v.x(), v.y());
            auto [it, inserted] = index.emplace(key, verts.size());
            if (inserted) verts.push_back(v);
            ids.push_back(it->second);
        }
        cells.push_back(std::move(ids));
    }
    const auto old = os.precision(17);
    os << mesh.dim() << ' ' << verts.size() << ' ' << cells.size() << '\n';
    for (const auto& v : verts) os << v.x() << ' ' << v.y() << '\n';
    for (std::size_t i = 0; i < cells.size(); ++i) {
        os << cells[i].size();
        for (auto id : cells[i]) os << ' ' << id;
        os << ' ' << (mesh.is_ghost[i] ? 1 : 0) << '\n';
    }
    os.precision(old);
}

Mesh read_mesh(std::istream& is, const Domain& domain) {
    int dim = 0;
    std::size_t nv = 0, nc = 0;
    if (!(is >> dim >> nv >> nc) || (dim != 1 && dim != 2)) throw std::runtime_error("bad mesh header");
    if (dim != domain.dim) throw std::runtime_error("mesh dimension does not match domain");
    std::vector<Point> verts(nv);
    for (auto& v : verts)
        if (!(is >> v.x() >> v.y())) throw std::runtime_error("bad mesh vertex line");
    Mesh m;
    m.domain = domain;
    for (std::size_t c = 0; c < nc; ++c) {
        std::size_t k = 0;
        if (!(is >> k)) throw std::runtime_error("bad mesh cell line");
        std::vector<Point> pts(k);
        for (auto& p : pts) {
            std::size_t id = 0;
            if (!(is >> id) || id >= nv) throw std::runtime_error("bad vertex index in mesh");
            p = verts[id];
        }
        int ghost = 0;
        if (!(is >> ghost)) throw std::runtime_error("missing ghost flag in mesh");
        if (dim == 1) {
            if (k != 2) throw std::runtime_error("1D cells need two vertices");
            m.cells.push_back(ConvexPolytope::interval(pts[0].x(), pts[1].x()));
        } else {
            m.cells.push_back(ConvexPolytope::polygon(std::move(pts)));
        }
        m.is_ghost.push_back(ghost != 0);
    }
    m.update_sizes();
    return m;
}

}  // namespace molcol
