#include <algorithm>
#include <cmath>

#include "pscontact/cr_checks.hpp"
#include "pscontact/errors.hpp"

namespace pscontact {

namespace {

constexpr int kFieldOrder = 2;

double normalized(double resid, double scale) { return resid / std::max(1.0, scale); }

// Scratch holding the H-extended probe fields as jets.
struct CRFields {
    const PointContext& ctx;
    int d;
    std::vector<JetVec> probe;    // probe[a]^k = delta_ak - eta_a xi^k
    std::vector<JetVec> j_probe;  // phi-composed

    explicit CRFields(const PointContext& c) : ctx(c), d(c.dim()) {
        probe.resize(d);
        j_probe.resize(d);
        for (int a = 0; a < d; ++a) {
            probe[a] = JetVec(static_cast<std::size_t>(d));
            for (int k = 0; k < d; ++k) {
                Jet val = Jet::constant(a == k ? 1.0 : 0.0, d, kFieldOrder);
                val -= ctx.eta_jet()[a].truncated(kFieldOrder) *
                       ctx.xi_jet()[k].truncated(kFieldOrder);
                probe[a][k] = val;
            }
            j_probe[a] = apply_J(probe[a]);
        }
    }

    JetVec apply_J(const JetVec& X) const {
        JetVec out(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) {
            Jet acc = Jet::zeros(d, kFieldOrder);
            for (int m = 0; m < d; ++m) {
                acc += ctx.phi_jet().at(k, m).truncated(kFieldOrder) * X[m];
            }
            out[k] = acc;
        }
        return out;
    }

    Jet theta_of(const JetVec& X) const {
        Jet acc = Jet::zeros(d, kFieldOrder);
        for (int k = 0; k < d; ++k) {
            acc += ctx.eta_jet()[k].truncated(kFieldOrder) * X[k];
        }
        return -acc;
    }

    // d theta(X, Y) = 1/2 (X theta(Y) - Y theta(X) - theta([X, Y]))
    double d_theta(const JetVec& X, const JetVec& Y) const {
        Jet thY = theta_of(Y);
        Jet thX = theta_of(X);
        double xthy = 0.0, ythx = 0.0;
        for (int k = 0; k < d; ++k) {
            xthy += X[k].value() * thY.first_partial(k);
            ythx += Y[k].value() * thX.first_partial(k);
        }
        JetVec br = jet_bracket(X, Y);
        double thbr = 0.0;
        for (int k = 0; k < d; ++k) thbr += -ctx.eta()[k] * br[k].value();
        return 0.5 * (xthy - ythx - thbr);
    }

    // the same form via -1/2 theta([X, Y]), valid for theta-annihilated fields
    double d_theta_bracket_route(const JetVec& X, const JetVec& Y) const {
        JetVec br = jet_bracket(X, Y);
        double thbr = 0.0;
        for (int k = 0; k < d; ++k) thbr += -ctx.eta()[k] * br[k].value();
        return -0.5 * thbr;
    }
};

} // namespace

Eigen::VectorXd project_H(const PointContext& ctx, const Eigen::VectorXd& X) {
    return X - ctx.eta().dot(X) * ctx.xi();
}

Eigen::VectorXd bott_derivative(const PointContext& ctx, int probe_index) {
    CRFields f(ctx);
    JetVec xi_field(static_cast<std::size_t>(ctx.dim()));
    for (int k = 0; k < ctx.dim(); ++k) xi_field[k] = ctx.xi_jet()[k].truncated(kFieldOrder);
    JetVec br = jet_bracket(xi_field, f.probe[probe_index]);
    return project_H(ctx, jet_values(br));
}

double bott_identity_residual(const PointContext& ctx) {
    if ((ctx.nabla_xi() * ctx.xi()).cwiseAbs().maxCoeff() > 1e-6) {
        throw GeodesicHypothesisError("bott identity requires a geodesic Reeb field");
    }
    CRSample s = cr_sample(ctx);
    return s.two_h_vs_bott;
}

CRSample cr_sample(const PointContext& ctx) {
    CRSample out;
    const int d = ctx.dim();
    const int rank = d - 1;
    const double eps = ctx.epsilon();
    const Eigen::MatrixXd& g = ctx.g();
    const Eigen::MatrixXd& phi = ctx.phi();
    const Eigen::MatrixXd& h = ctx.h();
    const Eigen::VectorXd& eta = ctx.eta();
    const Eigen::VectorXd& xi = ctx.xi();
    const HBasis& hb = ctx.h_basis();
    CRFields fields(ctx);

    // basis invariants
    for (int a = 0; a < rank; ++a) {
        const Eigen::VectorXd w = hb.vectors.col(a);
        out.j_squared = std::max(out.j_squared, normalized((phi * (phi * w) + w).cwiseAbs().maxCoeff(),
                                                           w.cwiseAbs().maxCoeff()));
        out.theta_kernel = std::max(out.theta_kernel, std::abs(-eta.dot(w)));
    }

    // Levi form on the kept probes; alpha from nabla theta = -nabla eta.
    auto nabla_theta = [&](const Eigen::VectorXd& U, const Eigen::VectorXd& V) {
        double acc = 0.0;
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) acc += U[i] * ctx.nabla_eta()(i, j) * V[j];
        }
        return -acc;
    };

    out.levi.L = Eigen::MatrixXd(rank, rank);
    out.levi.alpha = Eigen::MatrixXd(rank, rank);
    Eigen::MatrixXd L_hermitian(rank, rank);
    Eigen::MatrixXd g_restricted(rank, rank);
    for (int a = 0; a < rank; ++a) {
        for (int b = 0; b < rank; ++b) {
            const int pa = hb.kept[a], pb = hb.kept[b];
            double l_route1 = fields.d_theta(fields.probe[pa], fields.j_probe[pb]);
            double l_route2 = fields.d_theta_bracket_route(fields.probe[pa], fields.j_probe[pb]);
            out.levi.L(a, b) = l_route1;
            out.levi.route_agreement =
                std::max(out.levi.route_agreement,
                         normalized(std::abs(l_route1 - l_route2), std::abs(l_route1)));
            // L(J w_a, J w_b) = d theta(J X_a, J J X_b)
            L_hermitian(a, b) =
                fields.d_theta(fields.j_probe[pa], fields.apply_J(fields.j_probe[pb]));

            const Eigen::VectorXd wa = hb.vectors.col(a);
            const Eigen::VectorXd wb = hb.vectors.col(b);
            out.levi.alpha(a, b) = nabla_theta(wa, phi * wb) + nabla_theta(phi * wa, wb);
            g_restricted(a, b) = wa.dot(g * wb);
        }
    }
    {
        double scale = std::max(out.levi.L.cwiseAbs().maxCoeff(), 1e-300);
        out.levi.det_scaled = std::abs((out.levi.L / scale).determinant());
    }
    out.levi_vs_g = normalized((out.levi.L - g_restricted).cwiseAbs().maxCoeff(),
                               std::max(out.levi.L.cwiseAbs().maxCoeff(),
                                        g_restricted.cwiseAbs().maxCoeff()));

    const double l_scale = std::max(1.0, out.levi.L.cwiseAbs().maxCoeff());
    out.prop6_hermitian = (L_hermitian - out.levi.L).cwiseAbs().maxCoeff() / l_scale;
    out.prop6_symmetric =
        (out.levi.L - out.levi.L.transpose()).cwiseAbs().maxCoeff() / l_scale;
    out.prop6_alpha_sym = normalized(
        (out.levi.alpha - out.levi.alpha.transpose()).cwiseAbs().maxCoeff(),
        out.levi.alpha.cwiseAbs().maxCoeff());

    // integrability defects over kept probe pairs
    for (int a = 0; a < rank; ++a) {
        for (int b = 0; b < rank; ++b) {
            const int pa = hb.kept[a], pb = hb.kept[b];
            JetVec jx_y = jet_bracket(fields.j_probe[pa], fields.probe[pb]);
            JetVec x_jy = jet_bracket(fields.probe[pa], fields.j_probe[pb]);
            Eigen::VectorXd W = jet_values(jx_y) + jet_values(x_jy);
            double eta_part = std::abs(eta.dot(W));
            out.prop6_bracket_eta =
                std::max(out.prop6_bracket_eta, normalized(eta_part, W.cwiseAbs().maxCoeff()));
            out.d1 = std::max(out.d1, normalized(eta_part, W.cwiseAbs().maxCoeff()));

            Eigen::VectorXd jxjy = jet_values(jet_bracket(fields.j_probe[pa], fields.j_probe[pb]));
            Eigen::VectorXd xy = jet_values(jet_bracket(fields.probe[pa], fields.probe[pb]));
            Eigen::VectorXd defect =
                phi * project_H(ctx, W) - project_H(ctx, jxjy) + project_H(ctx, xy);
            out.d2 = std::max(out.d2, normalized(defect.cwiseAbs().maxCoeff(),
                                                 std::max(jxjy.cwiseAbs().maxCoeff(),
                                                          xy.cwiseAbs().maxCoeff())));
        }
    }

    // (6.3) with its proof tensors: defect V = (nabla_X J)Y - (nabla_JX J)(JY)
    // contracted pointwise from nabla_phi; gamma is its xi-component.
    for (int a = 0; a < rank; ++a) {
        for (int b = 0; b < rank; ++b) {
            const Eigen::VectorXd wa = hb.vectors.col(a);
            const Eigen::VectorXd wb = hb.vectors.col(b);
            const Eigen::VectorXd jwa = phi * wa;
            const Eigen::VectorXd jwb = phi * wb;
            Eigen::VectorXd V = Eigen::VectorXd::Zero(d);
            for (int l = 0; l < d; ++l) {
                double acc = 0.0;
                for (int i = 0; i < d; ++i) {
                    for (int j = 0; j < d; ++j) {
                        acc += wa[i] * ctx.nabla_phi()(i, l, j) * wb[j] -
                               jwa[i] * ctx.nabla_phi()(i, l, j) * jwb[j];
                    }
                }
                V[l] = acc;
            }
            const double alpha_ab = out.levi.alpha(a, b);
            out.e63 = std::max(out.e63, normalized((V - alpha_ab * xi).cwiseAbs().maxCoeff(),
                                                   std::max(V.cwiseAbs().maxCoeff(),
                                                            std::abs(alpha_ab))));
            for (int c = 0; c < rank; ++c) {
                const Eigen::VectorXd wc = hb.vectors.col(c);
                out.a_h = std::max(out.a_h, normalized(std::abs((-V).dot(g * wc)),
                                                       V.cwiseAbs().maxCoeff()));
            }
            const double gamma_ab = eps * V.dot(g * xi);
            out.gamma_vs_alpha =
                std::max(out.gamma_vs_alpha,
                         normalized(std::abs(gamma_ab - alpha_ab), std::abs(alpha_ab)));
        }
    }

    // Bott partial connection along xi
    out.nabla_xi_xi = (ctx.nabla_xi() * xi).cwiseAbs().maxCoeff();
    out.h_norm = h.cwiseAbs().maxCoeff();
    JetVec xi_field(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) xi_field[k] = ctx.xi_jet()[k].truncated(kFieldOrder);
    for (int a = 0; a < rank; ++a) {
        const int pa = hb.kept[a];
        Eigen::VectorXd bott_jx = project_H(ctx, jet_values(jet_bracket(xi_field, fields.j_probe[pa])));
        Eigen::VectorXd bott_x = project_H(ctx, jet_values(jet_bracket(xi_field, fields.probe[pa])));
        Eigen::VectorXd bott_J = bott_jx - phi * bott_x;
        const Eigen::VectorXd wa = hb.vectors.col(a);
        out.two_h_vs_bott =
            std::max(out.two_h_vs_bott, normalized((2.0 * h * wa - bott_J).cwiseAbs().maxCoeff(),
                                                   std::max((2.0 * h * wa).cwiseAbs().maxCoeff(),
                                                            bott_J.cwiseAbs().maxCoeff())));
        out.bott_j_norm = std::max(out.bott_j_norm, bott_J.cwiseAbs().maxCoeff());
    }

    // Webster metric reconstruction from (H, J, theta):
    // g_theta = L on H, g_theta(., xi) = 0 on H, g_theta(xi, xi) = eps.
    {
        Eigen::MatrixXd coeffs(rank, d);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(hb.vectors);
        for (int c = 0; c < d; ++c) {
            Eigen::VectorXd pc = project_H(ctx, Eigen::VectorXd::Unit(d, c));
            coeffs.col(c) = qr.solve(pc);
        }
        Eigen::MatrixXd g_theta =
            coeffs.transpose() * out.levi.L * coeffs + eps * eta * eta.transpose();
        out.webster_round_trip = normalized((g_theta - g).cwiseAbs().maxCoeff(),
                                            std::max(g_theta.cwiseAbs().maxCoeff(),
                                                     g.cwiseAbs().maxCoeff()));
    }

    // (6.9)
    {
        double resid = 0.0, scale = 0.0;
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                double c_ij = g(i, j);
                for (int m = 0; m < d; ++m) c_ij += eps * h(m, i) * g(m, j);
                for (int l = 0; l < d; ++l) {
                    double target = c_ij * xi[l] -
                                    eps * eta[j] * ((l == i ? 1.0 : 0.0) + eps * h(l, i));
                    double val = ctx.nabla_phi()(i, l, j);
                    resid = std::max(resid, std::abs(val - target));
                    scale = std::max({scale, std::abs(val), std::abs(target)});
                }
            }
        }
        out.e69 = normalized(resid, scale);
    }

    return out;
}

} // namespace pscontact
