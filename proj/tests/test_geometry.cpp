#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "molcol/geometry.hpp"
#include "molcol/random.hpp"

#include <cmath>
#include <numbers>

using namespace molcol;

namespace {

ConvexPolytope random_convex(CounterRng& rng, int n, const Point& center, double radius) {
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) {
        const double a = 2.0 * std::numbers::pi * (i + rng.uniform(0.1, 0.9)) / n;
        const double r = radius * rng.uniform(0.7, 1.0);
        pts.push_back(center + r * Point(std::cos(a), std::sin(a)));
    }
    return convex_hull(pts);
}

double shoelace(const std::vector<Point>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point& a = v[i];
        const Point& b = v[(i + 1) % v.size()];
        s += a.x() * b.y() - a.y() * b.x();
    }
    return 0.5 * s;
}

double factorial(int n) { return std::tgamma(n + 1.0); }

// int_T x^a y^b over the reference triangle.
double reference_monomial_integral(int a, int b) {
    return factorial(a) * factorial(b) / factorial(a + b + 2);
}

}  // namespace

TEST_CASE("clip_to_box axis-aligned overlap and disjoint box") {
    const auto square = ConvexPolytope::rectangle(Point(0, 0), Point(1, 1));
    const auto r = clip_to_box(square, AxisBox(Point(1, 1), 0.5));
    CHECK(measure(r) == doctest::Approx(0.25).epsilon(1e-14));
    const auto [lo, hi] = r.bounds();
    CHECK(lo.x() == doctest::Approx(0.5));
    CHECK(lo.y() == doctest::Approx(0.5));
    CHECK(hi.x() == doctest::Approx(1.0));
    CHECK(hi.y() == doctest::Approx(1.0));

    CHECK(clip_to_box(square, AxisBox(Point(5, 5), 0.5)).is_empty());
}

TEST_CASE("clip_to_box matches Monte-Carlo membership area") {
    CounterRng rng(7);
    const auto pent = random_convex(rng, 5, Point(0.2, -0.1), 1.0);
    const AxisBox box(Point(0.6, 0.3), Point(0.7, 0.5));
    const double area = measure(clip_to_box(pent, box));

    const std::size_t n = 1'000'000;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point p(rng.uniform(box.lo().x(), box.hi().x()), rng.uniform(box.lo().y(), box.hi().y()));
        if (pent.contains(p)) ++hits;
    }
    const double box_area = 4.0 * box.halfwidth.x() * box.halfwidth.y();
    const double frac = static_cast<double>(hits) / n;
    const double estimate = box_area * frac;
    const double sigma = box_area * std::sqrt(frac * (1.0 - frac) / n);
    CHECK(area > 0.0);
    CHECK(std::abs(area - estimate) <= 3.0 * sigma);
}

TEST_CASE("clip_to_box 1D intervals") {
    const auto r = clip_to_box(ConvexPolytope::interval(0.0, 1.0), AxisBox(Point(0.9, 0.0), Point(0.2, 1.0)));
    CHECK(r.lo() == doctest::Approx(0.7));
    CHECK(r.hi() == doctest::Approx(1.0));
    CHECK(clip_to_box(ConvexPolytope::interval(0.0, 1.0), AxisBox(Point(1.2, 0.0), Point(0.2, 1.0))).is_empty());
}

TEST_CASE("clipping invariants on random polygons") {
    CounterRng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto poly = random_convex(rng, 3 + trial % 6, Point(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                                        rng.uniform(0.2, 1.5));
        const AxisBox box(Point(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                          Point(rng.uniform(0.1, 1.0), rng.uniform(0.1, 1.0)));
        const auto once = clip_to_box(poly, box);
        const double box_area = 4.0 * box.halfwidth.x() * box.halfwidth.y();
        CHECK(measure(once) <= std::min(measure(poly), box_area) * (1 + 1e-12));
        const auto twice = clip_to_box(once, box);
        REQUIRE(once.size() == twice.size());
        // Same vertex cycle, possibly starting elsewhere.
        if (!once.is_empty()) {
            std::size_t shift = 0;
            for (std::size_t i = 1; i < twice.size(); ++i)
                if ((twice.vertices()[i] - once.vertices()[0]).norm() <
                    (twice.vertices()[shift] - once.vertices()[0]).norm())
                    shift = i;
            for (std::size_t i = 0; i < once.size(); ++i)
                CHECK((once.vertices()[i] - twice.vertices()[(i + shift) % twice.size()]).norm() <= 1e-12);
        }

        // A box containing the polygon leaves it untouched.
        const auto [lo, hi] = poly.bounds();
        const AxisBox big(0.5 * (lo + hi), 0.5 * (hi - lo) + Point(0.01, 0.01));
        const auto same = clip_to_box(poly, big);
        REQUIRE(same.size() == poly.size());
        for (std::size_t i = 0; i < poly.size(); ++i)
            CHECK((same.vertices()[i] - poly.vertices()[i]).norm() <= 1e-12);

        const auto grown = minkowski_with_box(poly, Point(0.1, 0.2));
        CHECK(measure(grown) >= measure(poly));
    }
}

TEST_CASE("minkowski_with_box") {
    const auto sq = minkowski_with_box(ConvexPolytope::rectangle(Point(0, 0), Point(1, 1)), Point(0.1, 0.1));
    const auto [lo, hi] = sq.bounds();
    CHECK(sq.size() == 4);
    CHECK(lo.x() == doctest::Approx(-0.1));
    CHECK(hi.y() == doctest::Approx(1.1));

    const auto iv = minkowski_with_box(ConvexPolytope::interval(0.0, 1.0), Point(0.25, 0.0));
    CHECK(iv.lo() == doctest::Approx(-0.25));
    CHECK(iv.hi() == doctest::Approx(1.25));

    // Mixed-area formula for a box [-w,w]^2: A + 4 w^2 + 2 w (W_x + W_y).
    const auto tri = ConvexPolytope::polygon({Point(0, 0), Point(1, 0), Point(0, 1)});
    const auto sum = minkowski_with_box(tri, Point(0.1, 0.1));
    CHECK(measure(sum) == doctest::Approx(0.5 + 0.04 + 0.2 * 2.0).epsilon(1e-13));
    for (const auto& v : tri.vertices()) CHECK(sum.contains(v, 0.0));
}

TEST_CASE("convex_hull") {
    const std::vector<Point> sq = {Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1), Point(0.5, 0.5)};
    CHECK(convex_hull(sq).size() == 4);

    std::vector<Point> circle;
    for (int i = 0; i < 17; ++i) {
        const double a = 2.0 * std::numbers::pi * i / 17;
        circle.emplace_back(std::cos(a), std::sin(a));
    }
    const auto hc = convex_hull(circle);
    CHECK(hc.size() == 17);

    CounterRng rng(3);
    std::vector<Point> cloud;
    for (int i = 0; i < 100; ++i) cloud.emplace_back(rng.uniform(-1, 1), rng.uniform(-2, 2));
    const auto h = convex_hull(cloud);
    for (const auto& p : cloud) CHECK(h.contains(p, 1e-12));

    const std::vector<Point> line = {Point(0, 0), Point(1, 1), Point(2, 2)};
    CHECK_THROWS_WITH_AS(convex_hull(line), "degenerate hull", GeometryError);
}

TEST_CASE("fan_triangulate preserves area") {
    const auto sq = ConvexPolytope::rectangle(Point(0, 0), Point(1, 1));
    const auto t = fan_triangulate(sq);
    CHECK(t.size() == 4);
    const auto tri = ConvexPolytope::polygon({Point(0, 0), Point(2, 0), Point(0, 1)});
    double s = 0.0;
    for (const auto& x : fan_triangulate(tri)) s += x.area();
    CHECK(fan_triangulate(tri).size() == 3);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-14));

    CounterRng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto hex = random_convex(rng, 6, Point(rng.uniform(), rng.uniform()), rng.uniform(0.1, 3.0));
        double sum = 0.0;
        for (const auto& x : fan_triangulate(hex)) {
            CHECK(x.area() > 0.0);
            sum += x.area();
        }
        CHECK(std::abs(sum - shoelace(hex.vertices())) <= 1e-12 * shoelace(hex.vertices()));
    }
}

TEST_CASE("area_centroid") {
    const auto [a, c] = area_centroid(ConvexPolytope::rectangle(Point(0, 0), Point(1, 1)));
    CHECK(a == doctest::Approx(1.0));
    CHECK(c.x() == doctest::Approx(0.5));
    CHECK(c.y() == doctest::Approx(0.5));
    const auto [l, m] = area_centroid(ConvexPolytope::interval(0.0, 2.0));
    CHECK(l == doctest::Approx(2.0));
    CHECK(m.x() == doctest::Approx(1.0));

    CounterRng rng(9);
    const auto pent = random_convex(rng, 5, Point(0.3, 0.7), 1.2);
    Point weighted = Point::Zero();
    double total = 0.0;
    const Point anchor = pent.vertices().front();
    for (std::size_t i = 1; i + 1 < pent.size(); ++i) {
        const Triangle t{{anchor, pent.vertices()[i], pent.vertices()[i + 1]}};
        weighted += t.area() * (t.v[0] + t.v[1] + t.v[2]) / 3.0;
        total += t.area();
    }
    const auto [pa, pc] = area_centroid(pent);
    CHECK(pa == doctest::Approx(total).epsilon(1e-13));
    CHECK((pc - weighted / total).norm() <= 1e-13);
}

TEST_CASE("gauss rules") {
    const auto mid = gauss_rule(0.0, 1.0, 1);
    REQUIRE(mid.size() == 1);
    CHECK(mid.points[0].x() == doctest::Approx(0.5));
    CHECK(mid.weights[0] == doctest::Approx(1.0));

    for (int degree = 1; degree <= kMaxTriangleDegree; ++degree) {
        const auto& rule = reference_triangle_rule(degree);
        CHECK(std::abs(rule.weight_sum() - 0.5) <= 1e-14);
        for (double w : rule.weights) CHECK(w > 0.0);
        for (const auto& p : rule.points) {
            CHECK(p.x() > 0.0);
            CHECK(p.y() > 0.0);
            CHECK(p.x() + p.y() < 1.0);
        }
        for (int a = 0; a <= degree; ++a) {
            for (int b = 0; a + b <= degree; ++b) {
                double q = 0.0;
                for (std::size_t k = 0; k < rule.size(); ++k)
                    q += rule.weights[k] * std::pow(rule.points[k].x(), a) * std::pow(rule.points[k].y(), b);
                const double exact = reference_monomial_integral(a, b);
                CHECK_MESSAGE(std::abs(q - exact) <= 1e-13 * std::max(exact, 1e-3), "degree ", degree, " x^", a,
                              " y^", b);
            }
        }
    }
    // x^2 y^2 on the reference triangle is 1/180.
    const Triangle ref{{Point(0, 0), Point(1, 0), Point(0, 1)}};
    const auto r4 = gauss_rule(ref, 4);
    double q = 0.0;
    for (std::size_t k = 0; k < r4.size(); ++k)
        q += r4.weights[k] * std::pow(r4.points[k].x(), 2) * std::pow(r4.points[k].y(), 2);
    CHECK(q == doctest::Approx(1.0 / 180).epsilon(1e-13));

    // Mapped triangles integrate to their area.
    const Triangle phys{{Point(0.3, 0.1), Point(2.0, 0.4), Point(0.9, 1.7)}};
    CHECK(gauss_rule(phys, 7).weight_sum() == doctest::Approx(phys.area()).epsilon(1e-12));

    // 1D exactness.
    for (int degree = 1; degree <= 30; ++degree) {
        const auto rule = gauss_rule(-0.5, 1.5, degree);
        double s = 0.0;
        for (std::size_t k = 0; k < rule.size(); ++k) s += rule.weights[k] * std::pow(rule.points[k].x(), degree);
        const double exact = (std::pow(1.5, degree + 1) - std::pow(-0.5, degree + 1)) / (degree + 1);
        CHECK(s == doctest::Approx(exact).epsilon(1e-12));
    }

    const std::array<Point, 4> unit = {Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)};
    const auto quad = gauss_rule_quad(unit, 3);
    REQUIRE(quad.size() == 4);
    const double g = 0.5 - 0.5 / std::sqrt(3.0);
    CHECK(quad.points[0].x() == doctest::Approx(g));
    CHECK(quad.points[0].y() == doctest::Approx(g));
    CHECK(quad.weight_sum() == doctest::Approx(1.0));

    CHECK_THROWS(gauss_rule(0.0, 1.0, 0));
    CHECK_THROWS(reference_triangle_rule(kMaxTriangleDegree + 1));
}
