#include <algorithm>
#include <cmath>

#include "pscontact/errors.hpp"
#include "pscontact/geometry.hpp"

namespace pscontact {

double Ten3::max_abs() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double Ten4::max_abs() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

Eigen::MatrixXd JetMat::values() const {
    Eigen::MatrixXd out(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) out(i, j) = at(i, j).value();
    }
    return out;
}

Eigen::VectorXd jet_values(const JetVec& v) {
    Eigen::VectorXd out(static_cast<int>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<int>(i)] = v[i].value();
    return out;
}

JetVec jet_bracket(const JetVec& X, const JetVec& Y) {
    const int d = static_cast<int>(X.size());
    JetVec out(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
        Jet acc = Jet::zeros(X[0].num_vars(), std::min(X[0].order(), Y[0].order()) - 1);
        for (int i = 0; i < d; ++i) {
            acc += X[i] * Y[k].derivative(i) - Y[i] * X[k].derivative(i);
        }
        out[k] = acc;
    }
    return out;
}

JetMat jet_matrix_inverse(const JetMat& A) {
    const int d = A.rows;
    JetMat work = A;
    JetMat inv(d, d);
    const int nv = A.at(0, 0).num_vars();
    const int order = A.at(0, 0).order();
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            inv.at(i, j) = Jet::constant(i == j ? 1.0 : 0.0, nv, order);
        }
    }

    double scale = 0.0;
    for (const Jet& e : work.m) scale = std::max(scale, std::abs(e.value()));
    const double pivot_floor = 1e-12 * std::max(1.0, scale);

    for (int col = 0; col < d; ++col) {
        int pivot = col;
        for (int r = col + 1; r < d; ++r) {
            if (std::abs(work.at(r, col).value()) > std::abs(work.at(pivot, col).value())) {
                pivot = r;
            }
        }
        if (std::abs(work.at(pivot, col).value()) < pivot_floor) {
            throw DegenerateMetricError("matrix inverse: pivot below degeneracy threshold");
        }
        if (pivot != col) {
            for (int j = 0; j < d; ++j) {
                std::swap(work.at(pivot, j), work.at(col, j));
                std::swap(inv.at(pivot, j), inv.at(col, j));
            }
        }
        Jet diag = work.at(col, col);
        for (int j = 0; j < d; ++j) {
            work.at(col, j) = work.at(col, j) / diag;
            inv.at(col, j) = inv.at(col, j) / diag;
        }
        for (int r = 0; r < d; ++r) {
            if (r == col) continue;
            Jet factor = work.at(r, col);
            if (factor.max_abs() == 0.0) continue;
            for (int j = 0; j < d; ++j) {
                work.at(r, j) -= factor * work.at(col, j);
                inv.at(r, j) -= factor * inv.at(col, j);
            }
        }
    }
    return inv;
}

JetMat eval_matrix_jets(const TensorFieldSpec& t, std::span<const double> x, int order) {
    JetMat out(t.dim, t.dim);
    for (int i = 0; i < t.dim; ++i) {
        for (int j = 0; j < t.dim; ++j) {
            out.at(i, j) = eval_jet(*t.at(i, j), x, order);
        }
    }
    return out;
}

JetVec eval_vector_jets(const TensorFieldSpec& t, std::span<const double> x, int order) {
    JetVec out(static_cast<std::size_t>(t.dim));
    for (int i = 0; i < t.dim; ++i) {
        out[static_cast<std::size_t>(i)] = eval_jet(*t.at(i), x, order);
    }
    return out;
}

ConnectionJets compute_connection(const TensorFieldSpec& metric, std::span<const double> x,
                                  int metric_order) {
    ConnectionJets c;
    const int d = metric.dim;
    c.dim = d;
    c.g = eval_matrix_jets(metric, x, metric_order);

    const int nv = d;
    const int gamma_order = metric_order - 1;

    JetMat g_lower(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) g_lower.at(i, j) = c.g.at(i, j).truncated(gamma_order);
    }
    c.ginv = jet_matrix_inverse(g_lower);

    // dg[a](b,c) = d_a g_bc at order W-1
    std::vector<JetMat> dg(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) {
        dg[a] = JetMat(d, d);
        for (int b = 0; b < d; ++b) {
            for (int cc = 0; cc < d; ++cc) dg[a].at(b, cc) = c.g.at(b, cc).derivative(a);
        }
    }

    c.gamma.assign(static_cast<std::size_t>(d) * d * d, Jet());
    for (int k = 0; k < d; ++k) {
        for (int i = 0; i < d; ++i) {
            for (int j = i; j < d; ++j) {
                Jet acc = Jet::zeros(nv, gamma_order);
                for (int l = 0; l < d; ++l) {
                    acc += c.ginv.at(k, l) * (dg[i].at(j, l) + dg[j].at(i, l) - dg[l].at(i, j));
                }
                acc *= 0.5;
                c.gamma[(static_cast<std::size_t>(k) * d + i) * d + j] = acc;
                c.gamma[(static_cast<std::size_t>(k) * d + j) * d + i] = acc;
            }
        }
    }

    if (metric_order >= 2) {
        const int r_order = metric_order - 2;
        std::vector<Jet> gamma_low(c.gamma.size());
        for (std::size_t i = 0; i < c.gamma.size(); ++i) gamma_low[i] = c.gamma[i].truncated(r_order);
        auto gl = [&](int k, int i, int j) -> const Jet& {
            return gamma_low[(static_cast<std::size_t>(k) * d + i) * d + j];
        };
        c.riemann.assign(static_cast<std::size_t>(d) * d * d * d, Jet());
        for (int l = 0; l < d; ++l) {
            for (int k = 0; k < d; ++k) {
                for (int i = 0; i < d; ++i) {
                    for (int j = 0; j < d; ++j) {
                        if (i == j) {
                            c.riemann[((static_cast<std::size_t>(l) * d + k) * d + i) * d + j] =
                                Jet::zeros(nv, r_order);
                            continue;
                        }
                        if (i > j) {
                            // antisymmetry in the argument slots
                            c.riemann[((static_cast<std::size_t>(l) * d + k) * d + i) * d + j] =
                                -c.riemann_at(l, k, j, i);
                            continue;
                        }
                        Jet acc = c.gamma_at(l, j, k).derivative(i) - c.gamma_at(l, i, k).derivative(j);
                        for (int m = 0; m < d; ++m) {
                            acc += gl(l, i, m) * gl(m, j, k) - gl(l, j, m) * gl(m, i, k);
                        }
                        c.riemann[((static_cast<std::size_t>(l) * d + k) * d + i) * d + j] = acc;
                    }
                }
            }
        }
    }
    return c;
}

MetricAtPoint metric_at(const TensorFieldSpec& metric, std::span<const double> x) {
    const int d = metric.dim;
    Eigen::MatrixXd raw(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) raw(i, j) = eval_value(*metric.at(i, j), x);
    }
    const double scale = std::max(1.0, raw.cwiseAbs().maxCoeff());
    if ((raw - raw.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw AsymmetricMetricError("metric components are not symmetric at the sample point");
    }
    MetricAtPoint out;
    out.components = 0.5 * (raw + raw.transpose());

    Eigen::FullPivLU<Eigen::MatrixXd> lu(out.components);
    const double det = lu.determinant();
    if (std::abs(det) < 1e-12 * std::pow(scale, d)) {
        throw DegenerateMetricError("metric determinant below degeneracy threshold");
    }
    out.inverse = lu.inverse();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.components);
    for (int i = 0; i < d; ++i) {
        if (es.eigenvalues()[i] > 0) {
            ++out.positive;
        } else {
            ++out.negative;
        }
    }
    return out;
}

Ten3 covariant_derivative_11(const JetMat& A, const Ten3& gamma) {
    const int d = A.rows;
    Ten3 out(d);
    for (int i = 0; i < d; ++i) {
        for (int k = 0; k < d; ++k) {
            for (int j = 0; j < d; ++j) {
                double acc = A.at(k, j).first_partial(i);
                for (int m = 0; m < d; ++m) {
                    acc += gamma(k, i, m) * A.at(m, j).value() - gamma(m, i, j) * A.at(k, m).value();
                }
                out(i, k, j) = acc;
            }
        }
    }
    return out;
}

} // namespace pscontact
