#include "pscontact/jet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "pscontact/errors.hpp"
#include "pscontact/jet_kernels.hpp"

namespace pscontact {

namespace {

const JetLayout& common_layout(const Jet& a, const Jet& b) {
    if (a.num_vars() != b.num_vars()) {
        throw JetError("jet: operands have different variable counts");
    }
    int order = std::min(a.order(), b.order());
    return JetLayout::get(a.num_vars(), order);
}

void check_finite(const Jet& j, const char* op_name) {
    if (!j.all_finite()) {
        throw JetDomainError(std::string("jet: non-finite result in ") + op_name);
    }
}

double ipow_value(double x, int k) {
    if (k == 0) return 1.0; // includes 0^0 = 1 by the polynomial convention
    if (k < 0) {
        if (x == 0.0) throw JetDomainError("jet: zero base with negative integer power");
        return 1.0 / ipow_value(x, -k);
    }
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

} // namespace

Jet Jet::constant(double c, int num_vars, int order) {
    Jet j(JetLayout::get(num_vars, order));
    j.data_[0] = c;
    return j;
}

Jet Jet::variable(int var, double x, int num_vars, int order) {
    if (var < 0 || var >= num_vars) throw JetError("jet: variable index out of range");
    Jet j(JetLayout::get(num_vars, order));
    j.data_[0] = x;
    if (order >= 1) j.data_[1 + var] = 1.0; // degree-1 block follows the value slot
    return j;
}

Jet Jet::zeros(int num_vars, int order) {
    return Jet(JetLayout::get(num_vars, order));
}

double Jet::partial(std::initializer_list<int> exps) const {
    std::vector<int> v(exps);
    return partial(std::span<const int>(v));
}

double Jet::partial(std::span<const int> exps) const {
    if (static_cast<int>(exps.size()) != num_vars()) {
        throw JetError("jet: exponent vector length mismatch");
    }
    std::vector<std::uint8_t> e(exps.size());
    for (std::size_t i = 0; i < exps.size(); ++i) e[i] = static_cast<std::uint8_t>(exps[i]);
    int idx = layout_->index_of(e);
    if (idx < 0) throw JetError("jet: partial beyond stored order");
    return data_[idx];
}

Jet Jet::derivative(int var) const {
    if (order() < 1) throw JetError("jet: derivative of an order-0 jet");
    if (var < 0 || var >= num_vars()) throw JetError("jet: variable index out of range");
    Jet out(JetLayout::get(num_vars(), order() - 1));
    for (int i = 0; i < out.table_size(); ++i) {
        // Lower-order tables are prefixes of higher-order ones, so index i
        // denotes the same multi-index in both layouts.
        int src = layout_->shifted_index(i, var);
        out.data_[i] = data_[src];
    }
    return out;
}

Jet Jet::truncated(int order) const {
    if (order >= this->order()) return *this;
    Jet out(JetLayout::get(num_vars(), order));
    std::copy(data_.begin(), data_.begin() + out.table_size(), out.data_.begin());
    return out;
}

double Jet::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

bool Jet::all_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

Jet operator+(const Jet& a, const Jet& b) {
    const JetLayout& lay = common_layout(a, b);
    Jet out(lay);
    jetk::active_kernels().add(a.data_.data(), b.data_.data(), out.data_.data(),
                               static_cast<std::size_t>(lay.size()));
    return out;
}

Jet operator-(const Jet& a, const Jet& b) {
    const JetLayout& lay = common_layout(a, b);
    Jet out(lay);
    jetk::active_kernels().sub(a.data_.data(), b.data_.data(), out.data_.data(),
                               static_cast<std::size_t>(lay.size()));
    return out;
}

Jet operator*(const Jet& a, const Jet& b) {
    const JetLayout& lay = common_layout(a, b);
    Jet out(lay);
    const auto& t = lay.leibniz();
    jetk::active_kernels().leibniz(a.data_.data(), b.data_.data(), out.data_.data(),
                                   t.left.data(), t.right.data(), t.coeff.data(),
                                   t.seg_begin.data(), static_cast<std::size_t>(lay.size()));
    return out;
}

Jet operator/(const Jet& a, const Jet& b) {
    if (b.value() == 0.0) throw JetDomainError("jet: division by zero value");
    const JetLayout& lay = common_layout(a, b);
    Jet out(lay);
    const auto& t = lay.leibniz();
    const double inv_b0 = 1.0 / b.data_[0];
    // Solve a = b * c entry by entry in graded order: the beta = 0 row of the
    // Leibniz sum is b0 * c[d]; every other row references already-computed
    // lower-degree entries of c.
    for (int d = 0; d < lay.size(); ++d) {
        double acc = a.data_[d];
        for (std::int32_t k = t.seg_begin[d]; k < t.seg_begin[d + 1]; ++k) {
            if (t.left[k] == 0) continue;
            acc -= t.coeff[k] * b.data_[t.left[k]] * out.data_[t.right[k]];
        }
        out.data_[d] = acc * inv_b0;
    }
    check_finite(out, "division");
    return out;
}

Jet Jet::operator-() const {
    Jet out(*layout_);
    jetk::active_kernels().neg(data_.data(), out.data_.data(),
                               static_cast<std::size_t>(layout_->size()));
    return out;
}

Jet operator+(const Jet& a, double c) {
    Jet out = a;
    out.data_[0] += c;
    return out;
}

Jet operator+(double c, const Jet& a) { return a + c; }

Jet operator-(const Jet& a, double c) { return a + (-c); }

Jet operator-(double c, const Jet& a) {
    Jet out = -a;
    out.data_[0] += c;
    return out;
}

Jet operator*(const Jet& a, double c) {
    Jet out(*a.layout_);
    jetk::active_kernels().scale(a.data_.data(), c, out.data_.data(),
                                 static_cast<std::size_t>(a.table_size()));
    return out;
}

Jet operator*(double c, const Jet& a) { return a * c; }

Jet operator/(const Jet& a, double c) {
    if (c == 0.0) throw JetDomainError("jet: division by zero constant");
    return a * (1.0 / c);
}

Jet operator/(double c, const Jet& a) {
    return Jet::constant(c, a.num_vars(), a.order()) / a;
}

Jet& Jet::operator+=(const Jet& rhs) { return *this = *this + rhs; }
Jet& Jet::operator-=(const Jet& rhs) { return *this = *this - rhs; }
Jet& Jet::operator*=(const Jet& rhs) { return *this = *this * rhs; }
Jet& Jet::operator+=(double c) { data_[0] += c; return *this; }
Jet& Jet::operator-=(double c) { data_[0] -= c; return *this; }
Jet& Jet::operator*=(double c) { return *this = *this * c; }

// Raw mixed partials of f(u): expand the multi-index into a sorted list of
// derivative operators; partials commute, so for |alpha| <= 3
//   d_i (f o u)       = f' u_i
//   d_i d_j (f o u)   = f'' u_i u_j + f' u_ij
//   d_i d_j d_k (f o u) = f''' u_i u_j u_k
//                       + f'' (u_ij u_k + u_ik u_j + u_jk u_i) + f' u_ijk.
Jet compose_univariate(const Jet& u, const double fderiv[4], const char* op_name) {
    const JetLayout& lay = u.layout();
    Jet out(lay);
    out.data_[0] = fderiv[0];

    const int nv = lay.num_vars();
    auto first = [&](int var) { return u.data_[lay.shifted_index(0, var)]; };
    auto second = [&](int va, int vb) {
        return u.data_[lay.shifted_index(lay.shifted_index(0, va), vb)];
    };

    int vars[3];
    for (int idx = 1; idx < lay.size(); ++idx) {
        auto e = lay.exponents(idx);
        int m = 0;
        for (int v = 0; v < nv; ++v) {
            for (int r = 0; r < e[v]; ++r) vars[m++] = v;
        }
        double res = 0.0;
        if (m == 1) {
            res = fderiv[1] * first(vars[0]);
        } else if (m == 2) {
            res = fderiv[2] * first(vars[0]) * first(vars[1]) + fderiv[1] * u.data_[idx];
        } else {
            const int i = vars[0], j = vars[1], k = vars[2];
            res = fderiv[3] * first(i) * first(j) * first(k)
                + fderiv[2] * (second(i, j) * first(k) + second(i, k) * first(j)
                               + second(j, k) * first(i))
                + fderiv[1] * u.data_[idx];
        }
        out.data_[idx] = res;
    }
    check_finite(out, op_name);
    return out;
}

Jet pow_int(const Jet& a, int k) {
    const double u = a.value();
    double f[4] = {0, 0, 0, 0};
    // f_m = k(k-1)...(k-m+1) u^(k-m); a zero falling factorial kills the
    // term before any negative power of zero is formed.
    double falling = 1.0;
    for (int m = 0; m <= 3; ++m) {
        f[m] = (falling == 0.0) ? 0.0 : falling * ipow_value(u, k - m);
        falling *= static_cast<double>(k - m);
    }
    return compose_univariate(a, f, "pow_int");
}

Jet sqrt(const Jet& a) {
    const double u = a.value();
    if (u <= 0.0) throw JetDomainError("jet: sqrt of a non-positive value");
    const double s = std::sqrt(u);
    const double f[4] = {s, 0.5 / s, -0.25 / (s * u), 0.375 / (s * u * u)};
    return compose_univariate(a, f, "sqrt");
}

Jet exp(const Jet& a) {
    const double e = std::exp(a.value());
    const double f[4] = {e, e, e, e};
    return compose_univariate(a, f, "exp");
}

Jet ln(const Jet& a) {
    const double u = a.value();
    if (u <= 0.0) throw JetDomainError("jet: ln of a non-positive value");
    const double f[4] = {std::log(u), 1.0 / u, -1.0 / (u * u), 2.0 / (u * u * u)};
    return compose_univariate(a, f, "ln");
}

Jet sin(const Jet& a) {
    const double s = std::sin(a.value());
    const double c = std::cos(a.value());
    const double f[4] = {s, c, -s, -c};
    return compose_univariate(a, f, "sin");
}

Jet cos(const Jet& a) {
    const double s = std::sin(a.value());
    const double c = std::cos(a.value());
    const double f[4] = {c, -s, -c, s};
    return compose_univariate(a, f, "cos");
}

Jet tan(const Jet& a) {
    const double t = std::tan(a.value());
    const double d1 = 1.0 + t * t;
    const double f[4] = {t, d1, 2.0 * t * d1, d1 * (2.0 + 6.0 * t * t)};
    return compose_univariate(a, f, "tan");
}

Jet sinh(const Jet& a) {
    const double s = std::sinh(a.value());
    const double c = std::cosh(a.value());
    const double f[4] = {s, c, s, c};
    return compose_univariate(a, f, "sinh");
}

Jet cosh(const Jet& a) {
    const double s = std::sinh(a.value());
    const double c = std::cosh(a.value());
    const double f[4] = {c, s, c, s};
    return compose_univariate(a, f, "cosh");
}

} // namespace pscontact
