#include "molcol/collocation.hpp"

#include "molcol/random.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace molcol {

Scheme parse_scheme(std::string_view name) {
    if (name == "uniform") return Scheme::Uniform;
    if (name == "gauss") return Scheme::Gauss;
    if (name == "quasirandom") return Scheme::QuasiRandom;
    throw std::invalid_argument("unknown collocation scheme '" + std::string(name) + "'");
}

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::Uniform: return "uniform";
        case Scheme::Gauss: return "gauss";
        case Scheme::QuasiRandom: return "quasirandom";
    }
    return "?";
}

std::vector<Point> CollocationSet::locations() const {
    std::vector<Point> out(interior);
    for (const auto& b : boundary) out.push_back(b.x);
    return out;
}

namespace {

void require_box(const Domain& d, const char* what) {
    if (!d.is_box()) throw std::invalid_argument(std::string(what) + " points need a tensor-product domain");
}

}  // namespace

std::vector<Point> uniform_points(const Domain& domain, std::size_t per_axis) {
    return quasirandom_points(domain, per_axis, 0.0, 0);
}

std::vector<Point> quasirandom_points(const Domain& domain, std::size_t per_axis, double sigma_fraction,
                                      std::uint64_t rng_seed, std::uint64_t stream) {
    require_box(domain, "grid");
    if (per_axis == 0) throw std::invalid_argument("need at least one point per axis");
    if (!(sigma_fraction >= 0.0 && sigma_fraction < 0.5)) throw std::invalid_argument("sigma_fraction must lie in [0, 0.5)");
    const double n1 = static_cast<double>(per_axis) + 1.0;
    const Point step = (domain.hi - domain.lo) / n1;
    CounterRng rng(rng_seed, stream);
    auto jitter = [&](double spacing) { return sigma_fraction == 0.0 ? 0.0 : sigma_fraction * spacing * rng.uniform(-1.0, 1.0); };

    std::vector<Point> pts;
    const std::size_t ny = domain.dim == 1 ? 1 : per_axis;
    pts.reserve(per_axis * ny);
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < per_axis; ++i) {
            Point p(domain.lo.x() + static_cast<double>(i + 1) * step.x(), 0.0);
            p.x() += jitter(step.x());
            if (domain.dim == 2) p.y() = domain.lo.y() + static_cast<double>(j + 1) * step.y() + jitter(step.y());
            pts.push_back(p);
        }
    }
    return pts;
}

std::vector<Point> gauss_points(const Mesh& mesh, int gamma) {
    std::vector<Point> pts;
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        if (mesh.is_ghost[i]) continue;
        const auto& cell = mesh.cells[i];
        if (mesh.dim() == 1) {
            for (const auto& p : gauss_rule(cell.lo(), cell.hi(), gamma).points) pts.push_back(p);
        } else if (cell.size() == 4) {
            const auto& v = cell.vertices();
            const std::array<Point, 4> quad{v[0], v[1], v[2], v[3]};
            for (const auto& p : gauss_rule_quad(quad, gamma).points) pts.push_back(p);
        } else {
            for (const auto& tri : fan_triangulate(cell))
                for (const auto& p : gauss_rule(tri, gamma).points) pts.push_back(p);
        }
    }
    if (mesh.domain.hole) pts = filter_interior(mesh.domain, std::move(pts));
    return pts;
}

std::vector<Point> filter_interior(const Domain& domain, std::vector<Point> points, double threshold) {
    std::erase_if(points, [&](const Point& p) { return !(domain.signed_distance(p) > threshold); });
    return points;
}

std::vector<BoundaryPoint> box_boundary_points(const Domain& domain, std::size_t per_edge, BcTag tag) {
    require_box(domain, "box boundary");
    if (domain.dim == 1)
        return {{Point(domain.lo.x(), 0.0), Point(-1.0, 0.0), tag}, {Point(domain.hi.x(), 0.0), Point(1.0, 0.0), tag}};
    if (per_edge < 2) throw std::invalid_argument("need at least two points per edge");
    const Point lo = domain.lo, hi = domain.hi;
    const std::array<std::array<Point, 3>, 4> edges{{
        {lo, Point(hi.x(), lo.y()), Point(0, -1)},
        {Point(hi.x(), lo.y()), hi, Point(1, 0)},
        {hi, Point(lo.x(), hi.y()), Point(0, 1)},
        {Point(lo.x(), hi.y()), lo, Point(-1, 0)},
    }};
    std::vector<BoundaryPoint> out;
    for (const auto& [a, b, n] : edges) {
        for (std::size_t k = 0; k < per_edge; ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(per_edge - 1);
            out.push_back({a + t * (b - a), n, tag});
        }
    }
    return out;
}

namespace {

// Sub-intervals of the segment a + t (b - a), t in [0, 1], lying outside the hole.
std::vector<std::pair<double, double>> outside_hole(const Domain& d, const Point& a, const Point& b) {
    if (!d.hole) return {{0.0, 1.0}};
    const Point e = b - a;
    const Point f = a - d.hole->center;
    const double A = e.squaredNorm(), B = 2 * f.dot(e), C = f.squaredNorm() - d.hole->radius * d.hole->radius;
    const double disc = B * B - 4 * A * C;
    if (disc <= 0.0) return {{0.0, 1.0}};
    const double t0 = (-B - std::sqrt(disc)) / (2 * A), t1 = (-B + std::sqrt(disc)) / (2 * A);
    std::vector<std::pair<double, double>> out;
    if (t0 > 0.0) out.emplace_back(0.0, std::min(t0, 1.0));
    if (t1 < 1.0) out.emplace_back(std::max(t1, 0.0), 1.0);
    std::erase_if(out, [](const auto& iv) { return iv.second - iv.first <= 1e-14; });
    return out;
}

void emit_segment(std::vector<BoundaryPoint>& out, double length, double max_segment, int gamma,
                  const std::function<std::pair<Point, Point>(double)>& at, BcTag tag) {
    const int pieces = std::max(1, static_cast<int>(std::ceil(length / max_segment - 1e-9)));
    const QuadratureRule rule = gauss_rule(0.0, 1.0, gamma);
    for (int k = 0; k < pieces; ++k) {
        for (const auto& q : rule.points) {
            const auto [x, n] = at((k + q.x()) / pieces);
            out.push_back({x, n, tag});
        }
    }
}

}  // namespace

std::vector<BoundaryPoint> gauss_boundary_points(const Domain& domain, double max_segment, int gamma, BcTag tag) {
    if (domain.dim != 2) throw std::invalid_argument("gauss boundary points are two-dimensional");
    if (!(max_segment > 0.0)) throw std::invalid_argument("max_segment must be positive");
    const Point lo = domain.lo, hi = domain.hi;
    const std::array<std::array<Point, 3>, 4> edges{{
        {lo, Point(hi.x(), lo.y()), Point(0, -1)},
        {Point(hi.x(), lo.y()), hi, Point(1, 0)},
        {hi, Point(lo.x(), hi.y()), Point(0, 1)},
        {Point(lo.x(), hi.y()), lo, Point(-1, 0)},
    }};
    std::vector<BoundaryPoint> out;
    for (const auto& [a, b, n] : edges) {
        const double len = (b - a).norm();
        for (const auto& [t0, t1] : outside_hole(domain, a, b)) {
            emit_segment(out, (t1 - t0) * len, max_segment, gamma,
                         [&, t0 = t0, t1 = t1](double s) { return std::pair<Point, Point>(Point(a + (t0 + s * (t1 - t0)) * (b - a)), n); }, tag);
        }
    }
    if (!domain.hole) return out;

    // Arc pieces inside the box, found from the circle's crossings with the box edges.
    const Point c = domain.hole->center;
    const double r = domain.hole->radius;
    std::vector<double> angles{0.0, 2 * std::numbers::pi};
    auto add_crossings = [&](int axis, double value) {
        const double d = value - c[axis];
        if (std::abs(d) > r) return;
        const double base = axis == 0 ? std::acos(d / r) : std::asin(d / r);
        for (double th : axis == 0 ? std::array{base, -base} : std::array{base, std::numbers::pi - base}) {
            th = std::fmod(th + 2 * std::numbers::pi, 2 * std::numbers::pi);
            angles.push_back(th);
        }
    };
    add_crossings(0, lo.x());
    add_crossings(0, hi.x());
    add_crossings(1, lo.y());
    add_crossings(1, hi.y());
    std::sort(angles.begin(), angles.end());
    for (std::size_t k = 0; k + 1 < angles.size(); ++k) {
        const double a0 = angles[k], a1 = angles[k + 1];
        if (a1 - a0 <= 1e-12) continue;
        const double mid = 0.5 * (a0 + a1);
        const Point pm = c + r * Point(std::cos(mid), std::sin(mid));
        if ((pm - lo).minCoeff() < 0.0 || (hi - pm).minCoeff() < 0.0) continue;
        emit_segment(out, r * (a1 - a0), max_segment, gamma,
                     [&](double s) {
                         const double th = a0 + s * (a1 - a0);
                         const Point radial(std::cos(th), std::sin(th));
                         return std::pair<Point, Point>(Point(c + r * radial), Point(-radial));
                     },
                     tag);
    }
    return out;
}

void write_points_csv(std::ostream& os, const CollocationSet& set) {
    os << "x,y,kind,tag\n";
    os.precision(17);
    for (const auto& p : set.interior) os << p.x() << ',' << p.y() << ",interior,none\n";
    for (const auto& b : set.boundary)
        os << b.x.x() << ',' << b.x.y() << ",boundary," << (b.tag == BcTag::Value ? "value" : "clamped") << '\n';
}

}  // namespace molcol
