#pragma once

#include "molcol/geometry.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace molcol {

enum class MollifierFamily { BSpline2, BSpline3, Hexic, Octic, Decic };

MollifierFamily parse_mollifier_family(std::string_view name);
std::string to_string(MollifierFamily family);

/// Per-axis derivative orders.
struct Deriv {
    int dx = 0;
    int dy = 0;

    int order() const { return dx + dy; }
    friend bool operator==(const Deriv&, const Deriv&) = default;
};

/// A one-dimensional piecewise polynomial in the normalised coordinate
/// t = x / h_m, supported on [-1/2, 1/2). Piece j covers [breaks[j], breaks[j+1])
/// and stores monomial coefficients in t, lowest order first.
struct PiecewisePolynomial {
    std::vector<double> breaks;
    std::vector<std::vector<double>> coeffs;

    int degree() const;
    /// d^k/dt^k at t; right-continuous at interior breaks, zero outside.
    double eval(double t, int k) const;
};

/// Symmetric, compactly supported, unit-volume polynomial kernel. In 2D the
/// kernel is the tensor product of the 1D profile.
class Mollifier {
public:
    Mollifier(MollifierFamily family, double width, int dim = 1);

    MollifierFamily family() const { return family_; }
    double width() const { return width_; }
    int dim() const { return dim_; }
    /// The kernel is C^k with k = smoothness().
    int smoothness() const;
    /// Polynomial degree of each 1D piece.
    int piece_degree() const { return profile_.degree(); }

    /// Kernel breakpoints as offsets from the centre, including the support
    /// ends -width/2 and width/2.
    std::vector<double> breakpoints() const;

    const PiecewisePolynomial& profile() const { return profile_; }

    /// k-th derivative of the 1D profile at offset s.
    double eval_1d(double s, int k = 0) const;

    /// Derivative of the (tensor-product) kernel at an offset. Throws
    /// std::domain_error when a per-axis order exceeds the piece degree.
    double eval(const Point& offset, Deriv deriv = {}) const;

    /// Integral of s^k m(s) ds over the 1D profile.
    double moment(int k) const;

private:
    MollifierFamily family_;
    double width_;
    int dim_;
    PiecewisePolynomial profile_;
};

}  // namespace molcol
