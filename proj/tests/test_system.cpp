#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "molcol/random.hpp"
#include "molcol/system.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

using namespace molcol;

namespace {

SparseMatrix to_sparse(const Eigen::MatrixXd& d) {
    SparseMatrix s = d.sparseView();
    s.makeCompressed();
    return s;
}

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    CounterRng rng(seed);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.uniform(-1.0, 1.0);
    return m;
}

std::shared_ptr<const BasisSet> basis_1d(int order, MollifierFamily f = MollifierFamily::BSpline2) {
    const auto m = intervals_1d({0, 0.15, 0.35, 0.5, 0.65, 0.85, 1.0});
    const double h_m = mollifier_width(m, 1.0);
    return std::make_shared<const BasisSet>(pad_ghost(m, h_m), Mollifier(f, h_m, 1), order);
}

std::shared_ptr<const BasisSet> basis_2d(int order, MollifierFamily f, std::size_t cells, std::uint64_t seed) {
    const auto m = voronoi_2d(quasi_uniform_seeds(cells, Point(0, 0), Point(1, 1), seed), Point(0, 0), Point(1, 1));
    const double h_m = mollifier_width(m, 1.0);
    return std::make_shared<const BasisSet>(pad_ghost(m, h_m), Mollifier(f, h_m, 2), order);
}

CollocationSet points_1d(std::size_t n) {
    const Domain d = Domain::interval(0, 1);
    return {uniform_points(d, n), box_boundary_points(d, 2, BcTag::Value)};
}

CollocationSet points_2d(std::size_t n, BcTag tag = BcTag::Value) {
    const Domain d = Domain::box(Point(0, 0), Point(1, 1));
    return {uniform_points(d, n), box_boundary_points(d, n, tag)};
}

// Quadratic displacement with the body force it needs.
ProblemCase quadratic_elasticity() {
    ProblemCase p = elasticity_2d();
    const double mu = p.material.mu(), ls = p.material.lambda_star();
    p.exact = [](const Point& x) {
        return Eigen::Vector2d(x.x() * x.x() + 0.3 * x.x() + 0.1 * x.y(), 0.2 * x.x() - 0.4 * x.y() + x.y() * x.y());
    };
    p.gradient = [](const Point& x) {
        Eigen::Matrix2d g;
        g << 2 * x.x() + 0.3, 0.1, 0.2, 2 * x.y() - 0.4;
        return g;
    };
    p.source = [=](const Point&) {
        const double v = -(2 * mu + 2 * (ls + mu));
        return Eigen::Vector2d(v, v);
    };
    return p;
}

}  // namespace

TEST_CASE("least squares on square and consistent systems") {
    const Eigen::MatrixXd A = random_matrix(20, 20, 1);
    const Eigen::VectorXd x = random_matrix(20, 1, 2);
    const auto ls = least_squares(to_sparse(A), A * x);
    CHECK((ls.x - x).norm() < 1e-10 * x.norm());
    CHECK(ls.condition_estimate >= 1.0);

    const Eigen::MatrixXd B = random_matrix(60, 20, 3);
    CHECK((least_squares(to_sparse(B), B * x).x - x).norm() < 1e-10 * x.norm());
}

TEST_CASE("least squares matches the normal equations") {
    Eigen::MatrixXd A = random_matrix(50, 20, 4);
    // Uneven column scales exercise the equilibration.
    for (Eigen::Index j = 0; j < A.cols(); ++j) A.col(j) *= std::pow(10.0, static_cast<double>(j % 5) - 2);
    const Eigen::VectorXd s = random_matrix(50, 1, 5);
    const Eigen::VectorXd oracle = (A.transpose() * A).ldlt().solve(A.transpose() * s);
    const auto ls = least_squares(to_sparse(A), s);
    CHECK((ls.x - oracle).norm() < 1e-8 * oracle.norm());
    // Residual orthogonal to the column space.
    const Eigen::VectorXd r = A * ls.x - s;
    CHECK((A.transpose() * r).norm() < 1e-8 * A.norm() * s.norm());
}

TEST_CASE("least squares rejects degenerate input") {
    Eigen::MatrixXd A = random_matrix(30, 6, 6);
    A.col(5) = A.col(2) + A.col(3);
    try {
        least_squares(to_sparse(A), Eigen::VectorXd::Ones(30));
        CHECK_MESSAGE(false, "expected a rank error");
    } catch (const RankDeficientError& e) {
        CHECK(std::string(e.what()).find("rank") != std::string::npos);
        CHECK(e.condition_estimate > 1e12);
    }
    CHECK_THROWS_AS(least_squares(to_sparse(random_matrix(4, 6, 7)), Eigen::VectorXd::Ones(4)), std::invalid_argument);
    CHECK_THROWS_AS(least_squares(to_sparse(random_matrix(8, 6, 7)), Eigen::VectorXd::Ones(5)), std::invalid_argument);

    // Empty columns are left at zero.
    Eigen::MatrixXd Z = random_matrix(12, 4, 8);
    Z.col(1).setZero();
    const auto ls = least_squares(to_sparse(Z), Eigen::VectorXd::Ones(12));
    CHECK(ls.x[1] == 0.0);
}

TEST_CASE("Poisson rows carry the scaled second derivative") {
    const auto basis = basis_1d(2);
    const ProblemCase p = poisson_1d();
    const CollocationSet pts = points_1d(36);
    const auto sys = assemble(p, *basis, pts);
    REQUIRE(sys.rows() == 38);
    REQUIRE(sys.cols() == static_cast<Eigen::Index>(basis->size()));
    CHECK(basis->size() == 24);
    const double h_m = basis->mollifier().width();
    const Eigen::MatrixXd C(sys.C);
    for (std::size_t k = 0; k < pts.interior.size(); k += 7) {
        const auto row = basis->eval_at(pts.interior[k], {2, 0});
        Eigen::VectorXd expect = Eigen::VectorXd::Zero(sys.cols());
        for (std::size_t j = 0; j < row.size(); ++j) expect[row.cols[j]] += -h_m * h_m * row.vals[j];
        const auto i = static_cast<Eigen::Index>(k);
        CHECK((C.row(i).transpose() - expect).norm() < 1e-14 * expect.norm());
        CHECK(sys.s[i] == doctest::Approx(h_m * h_m * p.source(pts.interior[k])[0]));
        CHECK(sys.row_kind[k] == RowKind::Interior);
        // Nonzeros are exactly the basis functions whose support holds the point.
        CHECK(static_cast<std::size_t>((C.row(i).array() != 0.0).count()) == row.size());
    }
    CHECK(sys.row_kind.back() == RowKind::BoundaryValue);
    CHECK(sys.s[37] == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("assembly preconditions") {
    const ProblemCase bih = biharmonic_1d();
    CHECK_THROWS_AS(assemble(bih, *basis_1d(5, MollifierFamily::BSpline3), points_1d(60)), std::invalid_argument);
    CHECK_THROWS_AS(assemble(poisson_1d(), *basis_1d(3), points_1d(10)), std::invalid_argument);
    CHECK_THROWS_AS(assemble(elasticity_2d(), *basis_1d(2), points_1d(60)), std::invalid_argument);
}

TEST_CASE("representable solutions are recovered") {
    SUBCASE("1D quadratic") {
        ProblemCase p = poisson_1d();
        p.exact = [](const Point& x) { return Eigen::Vector2d(x.x() * (1 - x.x()), 0); };
        p.gradient = [](const Point& x) {
            Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
            g(0, 0) = 1 - 2 * x.x();
            return g;
        };
        p.source = [](const Point&) { return Eigen::Vector2d(2, 0); };
        const auto basis = basis_1d(2);
        const auto pts = points_1d(36);
        const auto sol = solve(assemble(p, *basis, pts), basis);
        const auto e = compute_errors(p, sol, pts.locations());
        CHECK(e.l2 < 1e-10);
        CHECK(e.h1 < 1e-10);
        CHECK(std::isnan(e.energy));
    }
    SUBCASE("2D quadratic elasticity on a Voronoi mesh") {
        const ProblemCase p = quadratic_elasticity();
        const auto basis = basis_2d(2, MollifierFamily::Hexic, 16, 5);
        const auto pts = points_2d(16);
        const auto sol = solve(assemble(p, *basis, pts), basis);
        const auto e = compute_errors(p, sol, pts.locations());
        CHECK(e.l2 < 1e-9);
        CHECK(e.h1 < 1e-9);
        CHECK(e.energy < 1e-9);
    }
    SUBCASE("clamped rows impose the slope") {
        ProblemCase p = biharmonic_1d();
        p.exact = [](const Point& x) { return Eigen::Vector2d(std::pow(x.x(), 5), 0); };
        p.gradient = [](const Point& x) {
            Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
            g(0, 0) = 5 * std::pow(x.x(), 4);
            return g;
        };
        p.source = [](const Point& x) { return Eigen::Vector2d(120 * x.x(), 0); };
        const auto m = uniform_intervals_1d(0, 1, 8);
        const double h_m = mollifier_width(m, 1.0);
        const auto basis = std::make_shared<const BasisSet>(pad_ghost(m, h_m), Mollifier(MollifierFamily::Octic, h_m, 1), 5);
        const Domain d = Domain::interval(0, 1);
        const CollocationSet pts{uniform_points(d, 64), box_boundary_points(d, 2, BcTag::Clamped)};
        const auto sys = assemble(p, *basis, pts);
        CHECK(sys.rows() == 68);
        CHECK(std::count(sys.row_kind.begin(), sys.row_kind.end(), RowKind::BoundaryNormal) == 2);
        const auto sol = solve(sys, basis);
        CHECK(compute_errors(p, sol, pts.locations()).l2 < 1e-9);
        CHECK(evaluate_gradient(sol, Point(1, 0))(0, 0) == doctest::Approx(5.0).epsilon(1e-8));
    }
}

TEST_CASE("derivative row scaling does not change an exact fit") {
    const ProblemCase p = quadratic_elasticity();
    const auto basis = basis_2d(2, MollifierFamily::Hexic, 16, 9);
    const auto pts = points_2d(16);
    const auto a = solve(assemble(p, *basis, pts, true), basis);
    const auto b = solve(assemble(p, *basis, pts, false), basis);
    double worst = 0.0, ref = 0.0;
    for (const auto& x : pts.locations()) {
        worst = std::max(worst, (evaluate_field(a, x) - evaluate_field(b, x)).norm());
        ref = std::max(ref, evaluate_field(a, x).norm());
    }
    CHECK(worst < 1e-6 * ref);
}

TEST_CASE("relative error") {
    const std::vector<Eigen::VectorXd> e{Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 2)};
    CHECK(relative_error(e, e) == 0.0);
    const std::vector<Eigen::VectorXd> z{Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero()};
    CHECK(relative_error(e, z) == doctest::Approx(1.0));
    const std::vector<Eigen::VectorXd> h{Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)};
    CHECK(relative_error(e, h) == doctest::Approx(std::sqrt(1.0 / 5.0)));
    CHECK_THROWS_AS(relative_error(z, e), std::invalid_argument);
    CHECK_THROWS_AS(relative_error(e, std::span(h).first(1)), std::invalid_argument);
}

TEST_CASE("evaluating coefficient vectors") {
    const auto basis = basis_1d(1);
    Solution sol{basis, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis->size())), 1, 1.0};
    CHECK(evaluate_field(sol, Point(0.4, 0))[0] == 0.0);
    // Constant monomials set to one give the partition of unity.
    for (std::size_t g = 0; g < basis->group_count(); ++g) sol.u[basis->column(g, 0)] = 1.0;
    for (double x : {0.0, 0.21, 0.5, 0.77, 1.0}) {
        CHECK(evaluate_field(sol, Point(x, 0))[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(evaluate_gradient(sol, Point(x, 0))(0, 0)) < 1e-10);
    }
}

TEST_CASE("matrix and vector dumps") {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(3, 2);
    d(0, 0) = 1.5;
    d(2, 1) = -2.0;
    std::ostringstream os;
    write_matrix(os, to_sparse(d));
    CHECK(os.str() == "3 2 2\n1 1 1.5\n3 2 -2\n");
    std::ostringstream ov;
    write_vector(ov, Eigen::Vector2d(0.25, 4));
    CHECK(ov.str() == "2 1 2\n1 1 0.25\n2 1 4\n");
}
