#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "molcol/mesh.hpp"
#include "molcol/random.hpp"

#include <cmath>
#include <sstream>

using namespace molcol;

namespace {

std::vector<Point> grid_seeds(int n) {
    std::vector<Point> s;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) s.emplace_back((i + 0.5) / n, (j + 0.5) / n);
    return s;
}

double interior_area(const Mesh& m) {
    double a = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i)
        if (!m.is_ghost[i]) a += measure(m.cells[i]);
    return a;
}

}  // namespace

TEST_CASE("1D interval meshes") {
    const auto m = intervals_1d({0, 0.15, 0.35, 0.5, 0.65, 0.85, 1.0});
    REQUIRE(m.size() == 6);
    const double expected[] = {0.15, 0.2, 0.15, 0.15, 0.2, 0.15};
    for (std::size_t i = 0; i < 6; ++i) CHECK(m.h_cell[i] == doctest::Approx(expected[i]));

    const auto u = uniform_intervals_1d(0.0, 1.0, 8);
    for (double h : u.h_cell) CHECK(h == doctest::Approx(0.125));

    const auto b = bisect_1d(m);
    CHECK(b.size() == 12);
    CHECK(b.max_interior_h() == doctest::Approx(0.1));
    CHECK(interior_area(b) == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS(intervals_1d({0.0, 0.5, 0.4, 1.0}));
}

TEST_CASE("1D ghost padding") {
    const auto m = uniform_intervals_1d(0.0, 1.0, 3);
    const auto p = pad_ghost(m, 1.0 / 3);
    REQUIRE(p.size() == 5);
    CHECK(p.is_ghost.front());
    CHECK(p.is_ghost.back());
    CHECK(p.cells.front().lo() == doctest::Approx(-1.0 / 3));
    CHECK(p.cells.front().hi() == doctest::Approx(0.0));
    CHECK(p.cells.back().lo() == doctest::Approx(1.0));
    CHECK(p.cells.back().hi() == doctest::Approx(4.0 / 3));
    CHECK(p.interior_count() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(p.cells[i + 1].vertices() == m.cells[i].vertices());
    CHECK(mollifier_width(m, 1.0) == doctest::Approx(2.0 / 3));
}

TEST_CASE("voronoi small symmetric cases") {
    const auto two = voronoi_2d({Point(0.25, 0.5), Point(0.75, 0.5)}, Point(0, 0), Point(1, 1));
    CHECK(measure(two.cells[0]) == doctest::Approx(0.5));
    CHECK(measure(two.cells[1]) == doctest::Approx(0.5));

    const auto four = voronoi_2d(grid_seeds(2), Point(0, 0), Point(1, 1));
    for (const auto& c : four.cells) CHECK(measure(c) == doctest::Approx(0.25));

    CHECK_THROWS(voronoi_2d({Point(0.3, 0.3), Point(0.3, 0.3)}, Point(0, 0), Point(1, 1)));
}

TEST_CASE("voronoi tiles the box and contains its seeds") {
    CounterRng rng(42);
    std::vector<Point> seeds;
    for (int i = 0; i < 64; ++i) seeds.emplace_back(rng.uniform(), rng.uniform());
    const auto m = voronoi_2d(seeds, Point(0, 0), Point(1, 1));
    CHECK(std::abs(interior_area(m) - 1.0) < 1e-10);
    for (std::size_t i = 0; i < seeds.size(); ++i) CHECK(m.cells[i].contains(seeds[i], 1e-12));
}

TEST_CASE("voronoi cells agree with brute-force nearest seed") {
    CounterRng rng(8);
    std::vector<Point> seeds;
    for (int i = 0; i < 8; ++i) seeds.emplace_back(rng.uniform(), rng.uniform());
    const auto m = voronoi_2d(seeds, Point(0, 0), Point(1, 1));
    const int n = 100000;
    int wrong = 0;
    for (int k = 0; k < n; ++k) {
        const Point p(rng.uniform(), rng.uniform());
        std::size_t best = 0;
        for (std::size_t i = 1; i < seeds.size(); ++i)
            if ((p - seeds[i]).squaredNorm() < (p - seeds[best]).squaredNorm()) best = i;
        if (!m.cells[best].contains(p, 1e-12)) ++wrong;
    }
    CHECK(wrong < n / 1000);
}

TEST_CASE("quasi-uniform seeds are deterministic") {
    const auto a = quasi_uniform_seeds(16, Point(0, 0), Point(1, 1), 1234);
    const auto b = quasi_uniform_seeds(16, Point(0, 0), Point(1, 1), 1234);
    REQUIRE(a.size() == 16);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("2D ghost padding reproduces the 16-cell count") {
    const auto m = voronoi_2d(grid_seeds(4), Point(0, 0), Point(1, 1));
    const double h_m = mollifier_width(m, 1.0);
    CHECK(h_m == doctest::Approx(0.5));
    const auto p = pad_ghost(m, h_m);
    CHECK(p.interior_count() == 16);
    CHECK(p.ghost_count() == 20);
    for (std::size_t i = 0; i < 16; ++i) CHECK(p.cells[i].vertices() == m.cells[i].vertices());
    // The padded cells tile the box grown by h_m / 2.
    double total = 0.0;
    for (const auto& c : p.cells) total += measure(c);
    CHECK(total == doctest::Approx(1.5 * 1.5).epsilon(1e-12));
}

TEST_CASE("2D ghost padding on an irregular tessellation") {
    const auto seeds = quasi_uniform_seeds(64, Point(0, 0), Point(1, 1), 99);
    const auto m = voronoi_2d(seeds, Point(0, 0), Point(1, 1));
    const double h_m = mollifier_width(m, 1.0);
    const auto p = pad_ghost(m, h_m);
    CHECK(p.interior_count() == 64);
    CHECK(std::abs(interior_area(p) - 1.0) < 1e-10);
    // The padded cells tile the box grown by h_m / 2.
    const AxisBox band(Point(0.5, 0.5), 0.5 + 0.5 * h_m);
    double total = 0.0;
    for (const auto& c : p.cells) total += measure(clip_to_box(c, band));
    const double side = 1.0 + h_m;
    CHECK(total == doctest::Approx(side * side).epsilon(1e-10));
    // Interior cells own their groups; merged ghosts join an existing group.
    CHECK(p.group_count() == p.interior_count() + p.ghost_count());
    for (std::size_t i = 0; i < p.size(); ++i) {
        CHECK(p.owner_of(i) < p.group_count());
        if (!p.is_ghost[i]) CHECK(p.owner_of(i) == i);
    }
}

TEST_CASE("ghosts grazing a corner join a neighbour") {
    // Seeds chosen so a mirrored corner cell barely reaches the domain.
    bool merged = false;
    for (std::uint64_t seed = 1; seed <= 20 && !merged; ++seed) {
        const auto m = voronoi_2d(quasi_uniform_seeds(16, Point(0, 0), Point(1, 1), seed), Point(0, 0), Point(1, 1));
        const auto p = pad_ghost(m, mollifier_width(m, 1.0));
        merged = p.group_count() < p.size();
    }
    CHECK(merged);
}

TEST_CASE("quarter plate with hole") {
    for (int level = 0; level <= 2; ++level) {
        const auto m = quarter_plate_hole_mesh(level);
        CHECK(m.size() == static_cast<std::size_t>(16 << (2 * level)));
        double total = 0.0;
        for (const auto& c : m.cells) total += measure(c);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(quarter_plate_hole_mesh(0).ghost_count() == 0);
    // At level 2 the cells hugging the origin are swallowed by the hole.
    const auto fine = quarter_plate_hole_mesh(2);
    CHECK(fine.ghost_count() > 0);
    const auto padded = pad_ghost(fine, mollifier_width(fine, 1.0));
    for (std::size_t i = 0; i < padded.size(); ++i) {
        if (!padded.is_ghost[i]) continue;
        const auto support = minkowski_with_box(padded.cells[i], Point::Constant(0.5 * mollifier_width(fine, 1.0)));
        CHECK(padded.domain.overlaps(support));
    }
    CHECK(padded.domain.signed_distance(Point(0.1, 0.1)) < 0.0);
    CHECK(padded.domain.signed_distance(Point(0.5, 0.5)) == doctest::Approx(std::sqrt(0.5) - 0.25));
    CHECK(padded.domain.signed_distance(Point(0.9, 0.5)) == doctest::Approx(0.1));
    CHECK(padded.domain.signed_distance(Point(1.1, 0.5)) == doctest::Approx(-0.1));
}

TEST_CASE("mesh text format round trip") {
    const auto m = pad_ghost(voronoi_2d(grid_seeds(3), Point(0, 0), Point(1, 1)), 0.4);
    std::stringstream ss;
    write_mesh(ss, m);
    std::string header;
    std::getline(ss, header);
    CHECK(header.rfind("2 ", 0) == 0);
    ss.seekg(0);
    const auto back = read_mesh(ss, m.domain);
    REQUIRE(back.size() == m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        CHECK(back.is_ghost[i] == m.is_ghost[i]);
        CHECK(measure(back.cells[i]) == doctest::Approx(measure(m.cells[i])).epsilon(1e-14));
    }
}
