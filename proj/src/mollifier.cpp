#include "molcol/mollifier.hpp"

#include <algorithm>
#include <cmath>

namespace molcol {

namespace {

using Poly = std::vector<double>;

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

Poly poly_pow(const Poly& a, int n) {
    Poly r{1.0};
    for (int i = 0; i < n; ++i) r = poly_mul(r, a);
    return r;
}

Poly poly_scale(Poly a, double s) {
    for (double& c : a) c *= s;
    return a;
}

// (c0 + c1 t) expressed as coefficients.
Poly linear(double c0, double c1) { return {c0, c1}; }

// Even kernel (1 - 4 t^2)^n normalised by `scale` on a single piece.
PiecewisePolynomial single_piece(int n, double scale) {
    PiecewisePolynomial p;
    p.breaks = {-0.5, 0.5};
    p.coeffs = {poly_scale(poly_pow({1.0, 0.0, -4.0}, n), scale)};
    return p;
}

// Quadratic B-spline on [-3/2, 3/2] mapped to t via s = 3 t, scaled by 3.
PiecewisePolynomial quadratic_bspline() {
    PiecewisePolynomial p;
    p.breaks = {-0.5, -1.0 / 6, 1.0 / 6, 0.5};
    // s in [-3/2,-1/2]: (s + 3/2)^2 / 2
    const Poly left = poly_scale(poly_pow(linear(1.5, 3.0), 2), 0.5);
    // s in [-1/2, 1/2]: 3/4 - s^2
    const Poly mid = {0.75, 0.0, -9.0};
    // s in [1/2, 3/2]: (3/2 - s)^2 / 2
    const Poly right = poly_scale(poly_pow(linear(1.5, -3.0), 2), 0.5);
    p.coeffs = {poly_scale(left, 3.0), poly_scale(mid, 3.0), poly_scale(right, 3.0)};
    return p;
}

// Cubic B-spline on [-2, 2] mapped to t via s = 4 t, scaled by 4.
PiecewisePolynomial cubic_bspline() {
    PiecewisePolynomial p;
    p.breaks = {-0.5, -0.25, 0.0, 0.25, 0.5};
    // s in [-2,-1]: (2 + s)^3 / 6
    const Poly p0 = poly_scale(poly_pow(linear(2.0, 4.0), 3), 1.0 / 6);
    // s in [-1, 0]: 2/3 - s^2 - s^3/2
    const Poly p1 = {2.0 / 3, 0.0, -16.0, -32.0};
    // s in [0, 1]: 2/3 - s^2 + s^3/2
    const Poly p2 = {2.0 / 3, 0.0, -16.0, 32.0};
    // s in [1, 2]: (2 - s)^3 / 6
    const Poly p3 = poly_scale(poly_pow(linear(2.0, -4.0), 3), 1.0 / 6);
    p.coeffs = {poly_scale(p0, 4.0), poly_scale(p1, 4.0), poly_scale(p2, 4.0), poly_scale(p3, 4.0)};
    return p;
}

PiecewisePolynomial make_profile(MollifierFamily f) {
    switch (f) {
    case MollifierFamily::BSpline2: return quadratic_bspline();
    case MollifierFamily::BSpline3: return cubic_bspline();
    case MollifierFamily::Hexic: return single_piece(3, 35.0 / 16);
    case MollifierFamily::Octic: return single_piece(4, 315.0 / 128);
    // The leading constant 2772/1024 normalises (1 - 4t^2)^5, whose t^10
    // coefficient is -1024.
    case MollifierFamily::Decic: return single_piece(5, 2772.0 / 1024);
    }
    throw std::invalid_argument("unknown mollifier family");
}

}  // namespace

MollifierFamily parse_mollifier_family(std::string_view name) {
    if (name == "bspline2") return MollifierFamily::BSpline2;
    if (name == "bspline3") return MollifierFamily::BSpline3;
    if (name == "hexic") return MollifierFamily::Hexic;
    if (name == "octic") return MollifierFamily::Octic;
    if (name == "decic") return MollifierFamily::Decic;
    throw std::invalid_argument("unknown mollifier family '" + std::string(name) + "'");
}

std::string to_string(MollifierFamily family) {
    switch (family) {
    case MollifierFamily::BSpline2: return "bspline2";
    case MollifierFamily::BSpline3: return "bspline3";
    case MollifierFamily::Hexic: return "hexic";
    case MollifierFamily::Octic: return "octic";
    case MollifierFamily::Decic: return "decic";
    }
    return "?";
}

int PiecewisePolynomial::degree() const {
    std::size_t d = 0;
    for (const auto& c : coeffs) d = std::max(d, c.size() - 1);
    return static_cast<int>(d);
}

double PiecewisePolynomial::eval(double t, int k) const {
    if (t < breaks.front() || t >= breaks.back()) return 0.0;
    const auto it = std::upper_bound(breaks.begin(), breaks.end(), t);
    const auto& c = coeffs[static_cast<std::size_t>(it - breaks.begin() - 1)];
    const int n = static_cast<int>(c.size()) - 1;
    if (k > n) return 0.0;
    // Horner on the k-th derivative coefficients.
    double r = 0.0;
    for (int i = n; i >= k; --i) {
        double f = 1.0;
        for (int j = 0; j < k; ++j) f *= i - j;
        r = r * t + f * c[static_cast<std::size_t>(i)];
    }
    return r;
}

Mollifier::Mollifier(MollifierFamily family, double width, int dim)
    : family_(family), width_(width), dim_(dim), profile_(make_profile(family)) {
    if (!(width > 0.0)) throw std::invalid_argument("mollifier width must be positive");
    if (dim != 1 && dim != 2) throw std::invalid_argument("mollifier dimension must be 1 or 2");
}

int Mollifier::smoothness() const {
    switch (family_) {
    case MollifierFamily::BSpline2: return 1;
    case MollifierFamily::BSpline3: return 2;
    case MollifierFamily::Hexic: return 2;
    case MollifierFamily::Octic: return 3;
    case MollifierFamily::Decic: return 4;
    }
    return 0;
}

std::vector<double> Mollifier::breakpoints() const {
    std::vector<double> b;
    b.reserve(profile_.breaks.size());
    for (double t : profile_.breaks) b.push_back(t * width_);
    return b;
}

double Mollifier::eval_1d(double s, int k) const {
    if (k < 0 || k > piece_degree())
        throw std::domain_error("derivative order " + std::to_string(k) + " exceeds mollifier piece degree");
    return profile_.eval(s / width_, k) / std::pow(width_, k + 1);
}

double Mollifier::eval(const Point& offset, Deriv deriv) const {
    if (dim_ == 1) {
        if (deriv.dy != 0) throw std::domain_error("y-derivative of a 1D mollifier");
        return eval_1d(offset.x(), deriv.dx);
    }
    return eval_1d(offset.x(), deriv.dx) * eval_1d(offset.y(), deriv.dy);
}

double Mollifier::moment(int k) const {
    if (k < 0) throw std::invalid_argument("moment order must be >= 0");
    const int degree = piece_degree() + k;
    const auto b = breakpoints();
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
        const QuadratureRule rule = gauss_rule(b[j], b[j + 1], std::max(1, degree));
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double s = rule.points[q].x();
            total += rule.weights[q] * std::pow(s, k) * eval_1d(s, 0);
        }
    }
    return total;
}

}  // namespace molcol
