#include "molcol/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace molcol {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Vector2d scalar(double v) { return {v, 0.0}; }

Eigen::Matrix2d scalar_grad(double gx, double gy) {
    Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
    g(0, 0) = gx;
    g(0, 1) = gy;
    return g;
}

}  // namespace

ProblemCase poisson_1d() {
    ProblemCase p;
    p.name = "poisson1d";
    p.pde = Pde::Poisson;
    p.domain = Domain::interval(0.0, 1.0);
    p.exact = [](const Point& x) { return scalar(std::sin(3 * kPi * x.x())); };
    p.gradient = [](const Point& x) { return scalar_grad(3 * kPi * std::cos(3 * kPi * x.x()), 0.0); };
    p.source = [](const Point& x) { return scalar(9 * kPi * kPi * std::sin(3 * kPi * x.x())); };
    return p;
}

ProblemCase biharmonic_1d() {
    ProblemCase p = poisson_1d();
    p.name = "biharmonic1d";
    p.pde = Pde::Biharmonic;
    p.bc = BcTag::Clamped;
    p.source = [](const Point& x) { return scalar(std::pow(3 * kPi, 4) * std::sin(3 * kPi * x.x())); };
    return p;
}

ProblemCase elasticity_2d() {
    ProblemCase p;
    p.name = "elasticity2d";
    p.pde = Pde::Elasticity;
    p.fields = 2;
    p.domain = Domain::box(Point(0, 0), Point(1, 1));
    p.material.E = 1000.0;
    p.material.nu = 0.3;
    p.exact = [](const Point& x) {
        const double s = std::sin(kPi * x.x()) * std::sin(kPi * x.y());
        return Eigen::Vector2d(s, s);
    };
    p.gradient = [](const Point& x) {
        const double gx = kPi * std::cos(kPi * x.x()) * std::sin(kPi * x.y());
        const double gy = kPi * std::sin(kPi * x.x()) * std::cos(kPi * x.y());
        Eigen::Matrix2d g;
        g << gx, gy, gx, gy;
        return g;
    };
    const double mu = p.material.mu(), ls = p.material.lambda_star();
    p.source = [mu, ls](const Point& x) {
        const double s = std::sin(kPi * x.x()) * std::sin(kPi * x.y());
        const double c = std::cos(kPi * x.x()) * std::cos(kPi * x.y());
        const double b = kPi * kPi * (2 * mu * s + (ls + mu) * (s - c));
        return Eigen::Vector2d(b, b);
    };
    return p;
}

ProblemCase plate_bending_2d() {
    ProblemCase p;
    p.name = "plate_bending";
    p.pde = Pde::Biharmonic;
    p.bc = BcTag::Clamped;
    p.domain = Domain::box(Point(0, 0), Point(1, 1));
    p.material.D = 1.0;
    p.exact = [](const Point& x) {
        return scalar((1 - std::cos(2 * kPi * x.x())) * (1 - std::cos(2 * kPi * x.y())));
    };
    p.gradient = [](const Point& x) {
        const double a = std::cos(2 * kPi * x.x()), b = std::cos(2 * kPi * x.y());
        return scalar_grad(2 * kPi * std::sin(2 * kPi * x.x()) * (1 - b), 2 * kPi * std::sin(2 * kPi * x.y()) * (1 - a));
    };
    const double D = p.material.D;
    p.source = [D](const Point& x) {
        const double a = std::cos(2 * kPi * x.x()), b = std::cos(2 * kPi * x.y());
        return scalar(-16 * std::pow(kPi, 4) * D * (a + b - 4 * a * b));
    };
    return p;
}

ProblemCase plate_with_hole() {
    ProblemCase p;
    p.name = "plate_hole";
    p.pde = Pde::Elasticity;
    p.fields = 2;
    p.domain = Domain::box(Point(0, 0), Point(1, 1));
    p.domain.hole = Domain::Hole{Point(0, 0), 0.25};
    p.material.E = 70e6;
    p.material.nu = 0.3;
    p.material.sigma_inf = 1e6;
    p.material.hole_radius = 0.25;
    const Material m = p.material;
    p.exact = [m](const Point& x) { return kirsch_displacement(m, x); };
    p.gradient = [m](const Point& x) { return kirsch_gradient(m, x); };
    p.source = [](const Point&) { return Eigen::Vector2d::Zero().eval(); };
    return p;
}

std::vector<std::string> problem_names() {
    return {"poisson1d", "biharmonic1d", "elasticity2d", "plate_bending", "plate_hole"};
}

ProblemCase make_problem(std::string_view name) {
    if (name == "poisson1d") return poisson_1d();
    if (name == "biharmonic1d") return biharmonic_1d();
    if (name == "elasticity2d") return elasticity_2d();
    if (name == "plate_bending") return plate_bending_2d();
    if (name == "plate_hole") return plate_with_hole();
    throw std::invalid_argument("unknown case '" + std::string(name) + "'");
}

Eigen::Vector2d kirsch_displacement(const Material& m, const Point& x) {
    const double r = x.norm(), th = std::atan2(x.y(), x.x());
    const double a = m.hole_radius, k = m.kolosov();
    const double K = m.sigma_inf * a / (8 * m.mu());
    const double q = a / r, q3 = q * q * q;
    const double ux = K * ((k + 1) * std::cos(th) / q + 2 * q * ((1 + k) * std::cos(th) + std::cos(3 * th)) -
                           2 * q3 * std::cos(3 * th));
    const double uy = K * ((k - 3) * std::sin(th) / q + 2 * q * ((1 - k) * std::sin(th) + std::sin(3 * th)) -
                           2 * q3 * std::sin(3 * th));
    return {ux, uy};
}

Eigen::Matrix2d kirsch_gradient(const Material& m, const Point& x) {
    const double r = x.norm(), th = std::atan2(x.y(), x.x());
    const double a = m.hole_radius, k = m.kolosov();
    const double K = m.sigma_inf * a / (8 * m.mu());
    const double c1 = std::cos(th), s1 = std::sin(th), c3 = std::cos(3 * th), s3 = std::sin(3 * th);
    const double a3 = a * a * a;
    const double r2 = r * r, r3 = r2 * r, r4 = r3 * r;

    const double dr_ux = K * ((k + 1) * c1 / a - 2 * a / r2 * ((1 + k) * c1 + c3) + 6 * a3 / r4 * c3);
    const double dt_ux = K * (-r / a * (k + 1) * s1 + 2 * a / r * (-(1 + k) * s1 - 3 * s3) + 6 * a3 / r3 * s3);
    const double dr_uy = K * ((k - 3) * s1 / a - 2 * a / r2 * ((1 - k) * s1 + s3) + 6 * a3 / r4 * s3);
    const double dt_uy = K * (r / a * (k - 3) * c1 + 2 * a / r * ((1 - k) * c1 + 3 * c3) - 6 * a3 / r3 * c3);

    Eigen::Matrix2d g;
    g(0, 0) = c1 * dr_ux - s1 / r * dt_ux;
    g(0, 1) = s1 * dr_ux + c1 / r * dt_ux;
    g(1, 0) = c1 * dr_uy - s1 / r * dt_uy;
    g(1, 1) = s1 * dr_uy + c1 / r * dt_uy;
    return g;
}

Eigen::Matrix2d plane_stress(const Material& m, const Eigen::Matrix2d& grad) {
    const Eigen::Matrix2d eps = 0.5 * (grad + grad.transpose());
    return m.lambda_star() * eps.trace() * Eigen::Matrix2d::Identity() + 2 * m.mu() * eps;
}

}  // namespace molcol
