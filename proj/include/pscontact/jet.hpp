#pragma once

#include <initializer_list>
#include <span>
#include <vector>

#include "pscontact/jet_layout.hpp"

namespace pscontact {

// Truncated derivative table of a scalar function at a point: the raw partial
// derivatives d^alpha f for every |alpha| <= order, not Taylor coefficients.
// Pure value type; arithmetic follows the Leibniz rule and the univariate
// composition formulas, so results carry the exact partials of the composite
// function. Operands must agree on the variable count; mixed orders truncate
// to the lower one.
class Jet {
public:
    Jet() = default; // invalid placeholder, usable only as a container slot

    static Jet constant(double c, int num_vars, int order);
    static Jet variable(int var, double x, int num_vars, int order);
    static Jet zeros(int num_vars, int order);

    bool valid() const { return layout_ != nullptr; }
    int num_vars() const { return layout_->num_vars(); }
    int order() const { return layout_->order(); }
    int table_size() const { return layout_->size(); }
    const JetLayout& layout() const { return *layout_; }

    double value() const { return data_[0]; }
    // d f / d x_var; the degree-1 block directly follows the value slot.
    double first_partial(int var) const { return data_[1 + var]; }
    // Raw partial by exponent vector, e.g. {2,0,1} = d^3/dx0^2 dx2.
    double partial(std::initializer_list<int> exps) const;
    double partial(std::span<const int> exps) const;
    double operator[](int idx) const { return data_[idx]; }
    std::span<const double> data() const { return data_; }

    // Jet of d f / d x_var at the same point, one order lower.
    Jet derivative(int var) const;
    Jet truncated(int order) const;

    double max_abs() const;
    bool all_finite() const;

    Jet& operator+=(const Jet& rhs);
    Jet& operator-=(const Jet& rhs);
    Jet& operator*=(const Jet& rhs);
    Jet& operator+=(double c);
    Jet& operator-=(double c);
    Jet& operator*=(double c);
    Jet operator-() const;

    friend Jet operator+(const Jet& a, const Jet& b);
    friend Jet operator-(const Jet& a, const Jet& b);
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator+(const Jet& a, double c);
    friend Jet operator+(double c, const Jet& a);
    friend Jet operator-(const Jet& a, double c);
    friend Jet operator-(double c, const Jet& a);
    friend Jet operator*(const Jet& a, double c);
    friend Jet operator*(double c, const Jet& a);
    friend Jet operator/(const Jet& a, double c);
    friend Jet operator/(double c, const Jet& a);

    friend Jet pow_int(const Jet& a, int k);
    friend Jet sqrt(const Jet& a);
    friend Jet exp(const Jet& a);
    friend Jet ln(const Jet& a);
    friend Jet sin(const Jet& a);
    friend Jet cos(const Jet& a);
    friend Jet tan(const Jet& a);
    friend Jet sinh(const Jet& a);
    friend Jet cosh(const Jet& a);

private:
    explicit Jet(const JetLayout& layout) : layout_(&layout), data_(layout.size(), 0.0) {}

    // f(u) given the univariate derivatives f, f', f'', f''' at u.value().
    friend Jet compose_univariate(const Jet& u, const double fderiv[4], const char* op_name);

    const JetLayout* layout_ = nullptr;
    std::vector<double> data_;
};

} // namespace pscontact
