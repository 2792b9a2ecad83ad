#include <cmath>

#include "pscontact/errors.hpp"
#include "pscontact/geometry.hpp"

namespace pscontact {

namespace {

constexpr int kMetricOrder = 3;

} // namespace

PointContext::PointContext(const StructureSpec& spec, std::vector<double> point)
    : spec_(&spec), x_(std::move(point)), dim_(spec.chart.dim()), bound_(spec.bound()) {
    build_connection();
    if (bound_) build_structure();
}

void PointContext::build_connection() {
    conn_ = compute_connection(spec_->metric, x_, kMetricOrder);
    const int d = dim_;

    g_ = conn_.g.values();
    const double scale = std::max(1.0, g_.cwiseAbs().maxCoeff());
    if ((g_ - g_.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw AsymmetricMetricError("metric components are not symmetric at the sample point");
    }
    ginv_ = conn_.ginv.values();

    gamma_ = Ten3(d);
    for (int k = 0; k < d; ++k) {
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) gamma_(k, i, j) = conn_.gamma_at(k, i, j).value();
        }
    }

    riemann_ = Ten4(d);
    riemann_low_ = Ten4(d);
    for (int l = 0; l < d; ++l) {
        for (int k = 0; k < d; ++k) {
            for (int i = 0; i < d; ++i) {
                for (int j = 0; j < d; ++j) {
                    riemann_(l, k, i, j) = conn_.riemann_at(l, k, i, j).value();
                }
            }
        }
    }
    for (int l = 0; l < d; ++l) {
        for (int k = 0; k < d; ++k) {
            for (int i = 0; i < d; ++i) {
                for (int j = 0; j < d; ++j) {
                    double acc = 0.0;
                    for (int m = 0; m < d; ++m) acc += g_(l, m) * riemann_(m, k, i, j);
                    riemann_low_(l, k, i, j) = acc;
                }
            }
        }
    }

    // S(X, Y) = trace of Z -> R(Z, X) Y; in coordinates S_ab = R^m_bma,
    // which equals the signed pseudo-orthonormal frame sum.
    S_ = Eigen::MatrixXd::Zero(d, d);
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            double acc = 0.0;
            for (int m = 0; m < d; ++m) acc += riemann_(m, b, m, a);
            S_(a, b) = acc;
        }
    }
    Q_ = ginv_ * S_;
}

void PointContext::build_structure() {
    const int d = dim_;
    phi_jet_ = eval_matrix_jets(*spec_->phi, x_, kMetricOrder);
    xi_jet_ = eval_vector_jets(*spec_->xi, x_, kMetricOrder);
    eta_jet_ = eval_vector_jets(*spec_->eta, x_, kMetricOrder);

    phi_ = phi_jet_.values();
    xi_ = jet_values(xi_jet_);
    eta_ = jet_values(eta_jet_);
    // The raw value rather than its sign: equal to +-1 on every compatible
    // structure, and it lets the identity suite flag inconsistent input.
    epsilon_ = xi_.dot(g_ * xi_);

    // Phi_ij = g(d_i, phi d_j); d_eta with the 1/2 convention.
    Phi_ = g_ * phi_;
    dEta_ = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            dEta_(i, j) = 0.5 * (eta_jet_[j].first_partial(i) - eta_jet_[i].first_partial(j));
        }
    }

    // h = 1/2 L_xi phi:
    // (L_xi phi)^i_j = xi^k d_k phi^i_j - phi^k_j d_k xi^i + phi^i_k d_j xi^k
    const int h_order = kMetricOrder - 1;
    h_jet_ = JetMat(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            Jet acc = Jet::zeros(d, h_order);
            for (int k = 0; k < d; ++k) {
                acc += xi_jet_[k].truncated(h_order) * phi_jet_.at(i, j).derivative(k);
                acc -= phi_jet_.at(k, j).truncated(h_order) * xi_jet_[i].derivative(k);
                acc += phi_jet_.at(i, k).truncated(h_order) * xi_jet_[k].derivative(j);
            }
            h_jet_.at(i, j) = 0.5 * acc;
        }
    }
    h_ = h_jet_.values();

    // (L_xi g)_ij = xi^m d_m g_ij + g_mj d_i xi^m + g_im d_j xi^m
    lieg_jet_ = JetMat(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            Jet acc = Jet::zeros(d, h_order);
            for (int m = 0; m < d; ++m) {
                acc += xi_jet_[m].truncated(h_order) * conn_.g.at(i, j).derivative(m);
                acc += conn_.g.at(m, j).truncated(h_order) * xi_jet_[m].derivative(i);
                acc += conn_.g.at(i, m).truncated(h_order) * xi_jet_[m].derivative(j);
            }
            lieg_jet_.at(i, j) = acc;
        }
    }
    lieg_ = lieg_jet_.values();

    // tau^i_j = g^ik (L_xi g)_kj
    tau_jet_ = JetMat(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            Jet acc = Jet::zeros(d, h_order);
            for (int k = 0; k < d; ++k) {
                acc += conn_.ginv.at(i, k) * lieg_jet_.at(k, j);
            }
            tau_jet_.at(i, j) = acc;
        }
    }
    tau_ = tau_jet_.values();

    // ell^l_i = R^l_kij xi^j xi^k  (ell X = R(X, xi) xi)
    const int r_order = kMetricOrder - 2;
    ell_jet_ = JetMat(d, d);
    for (int l = 0; l < d; ++l) {
        for (int i = 0; i < d; ++i) {
            Jet acc = Jet::zeros(d, r_order);
            for (int k = 0; k < d; ++k) {
                for (int j = 0; j < d; ++j) {
                    acc += conn_.riemann_at(l, k, i, j) * xi_jet_[j].truncated(r_order) *
                           xi_jet_[k].truncated(r_order);
                }
            }
            ell_jet_.at(l, i) = acc;
        }
    }
    ell_ = ell_jet_.values();

    // nabla_xi: column i = nabla_{d_i} xi
    nabla_xi_ = Eigen::MatrixXd::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        for (int i = 0; i < d; ++i) {
            double acc = xi_jet_[k].first_partial(i);
            for (int m = 0; m < d; ++m) acc += gamma_(k, i, m) * xi_(m);
            nabla_xi_(k, i) = acc;
        }
    }

    // (nabla_i eta)_j = d_i eta_j - Gamma^m_ij eta_m
    nabla_eta_ = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            double acc = eta_jet_[j].first_partial(i);
            for (int m = 0; m < d; ++m) acc -= gamma_(m, i, j) * eta_(m);
            nabla_eta_(i, j) = acc;
        }
    }

    nabla_phi_ = covariant_derivative_11(phi_jet_, gamma_);
    nabla_h_ = covariant_derivative_11(h_jet_, gamma_);
    nabla_tau_ = covariant_derivative_11(tau_jet_, gamma_);
    nabla_ell_ = covariant_derivative_11(ell_jet_, gamma_);

    nabla_xi_h_ = Eigen::MatrixXd::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        for (int j = 0; j < d; ++j) {
            double acc = 0.0;
            for (int i = 0; i < d; ++i) acc += xi_(i) * nabla_h_(i, k, j);
            nabla_xi_h_(k, j) = acc;
        }
    }
}

const PhiBasis& PointContext::phi_basis() const {
    if (!phi_basis_) phi_basis_ = build_phi_basis(*this);
    return *phi_basis_;
}

const HBasis& PointContext::h_basis() const {
    if (!h_basis_) h_basis_ = build_h_basis(*this);
    return *h_basis_;
}

} // namespace pscontact
