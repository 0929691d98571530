#pragma once

#include "molcol/collocation.hpp"
#include "molcol/mesh.hpp"

#include <Eigen/Core>

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace molcol {

enum class Pde { Poisson, Elasticity, Biharmonic };

struct Material {
    double E = 0.0;
    double nu = 0.0;
    double D = 1.0;  // plate stiffness
    double sigma_inf = 0.0;
    double hole_radius = 0.0;

    double mu() const { return E / (2.0 * (1.0 + nu)); }
    /// Plane-stress Lame parameter 2 lambda mu / (lambda + 2 mu) = E nu / (1 - nu^2).
    double lambda_star() const { return E * nu / (1.0 - nu * nu); }
    double kolosov() const { return (3.0 - nu) / (1.0 + nu); }
};

/// Values are stored per component; scalar problems use component 0.
/// Gradients are (component, axis).
struct ProblemCase {
    std::string name;
    Pde pde = Pde::Poisson;
    Domain domain;
    int fields = 1;
    Material material;
    BcTag bc = BcTag::Value;
    std::function<Eigen::Vector2d(const Point&)> exact;
    std::function<Eigen::Matrix2d(const Point&)> gradient;
    std::function<Eigen::Vector2d(const Point&)> source;

    int dim() const { return domain.dim; }
    int operator_order() const { return pde == Pde::Biharmonic ? 4 : 2; }
    /// Smallest mollifier class giving a basis smooth enough for the operator.
    int required_smoothness() const { return operator_order() - 1; }
};

/// -u'' = s on (0, 1), u = sin(3 pi x).
ProblemCase poisson_1d();
/// u'''' = s on (0, 1), u = sin(3 pi x), value and slope at both ends.
ProblemCase biharmonic_1d();
/// Plane-stress elasticity on the unit square, u1 = u2 = sin(pi x) sin(pi y).
ProblemCase elasticity_2d();
/// Clamped plate D lap^2 u = q, u = (1 - cos 2 pi x)(1 - cos 2 pi y).
ProblemCase plate_bending_2d();
/// Quarter of an infinite plate with a hole under uniaxial tension.
ProblemCase plate_with_hole();

ProblemCase make_problem(std::string_view name);
std::vector<std::string> problem_names();

/// Closed-form displacement of the infinite plate with a hole, hole at the origin.
Eigen::Vector2d kirsch_displacement(const Material& m, const Point& x);
Eigen::Matrix2d kirsch_gradient(const Material& m, const Point& x);

/// Plane-stress stress tensor from a displacement gradient.
Eigen::Matrix2d plane_stress(const Material& m, const Eigen::Matrix2d& grad);

}  // namespace molcol
