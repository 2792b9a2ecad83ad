#include <algorithm>
#include <cmath>

#include "pscontact/contact_checks.hpp"
#include "pscontact/errors.hpp"

namespace pscontact {

namespace {

double normalized(double resid, double scale) { return resid / std::max(1.0, scale); }

double mat_norm(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

double vec_norm(const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

} // namespace

AxiomResiduals axiom_residuals(const PointContext& ctx) {
    AxiomResiduals r;
    const int d = ctx.dim();
    const Eigen::MatrixXd& phi = ctx.phi();
    const Eigen::MatrixXd& g = ctx.g();
    const Eigen::VectorXd& xi = ctx.xi();
    const Eigen::VectorXd& eta = ctx.eta();
    const double eps = ctx.epsilon();

    Eigen::MatrixXd phi2 = phi * phi;
    Eigen::MatrixXd target = -Eigen::MatrixXd::Identity(d, d) + xi * eta.transpose();
    r.phi_square = normalized(mat_norm(phi2 - target), std::max(mat_norm(phi2), mat_norm(target)));

    r.eta_xi = std::abs(eta.dot(xi) - 1.0);
    r.phi_xi = normalized(vec_norm(phi * xi), vec_norm(xi));
    r.eta_phi = normalized(vec_norm(phi.transpose() * eta), vec_norm(eta));

    Eigen::MatrixXd lhs3 = phi.transpose() * g * phi;
    Eigen::MatrixXd rhs3 = g - eps * eta * eta.transpose();
    r.e3 = normalized(mat_norm(lhs3 - rhs3), std::max(mat_norm(lhs3), mat_norm(rhs3)));

    double dual = normalized(vec_norm(eta - eps * (g * xi)), vec_norm(eta));
    double skew = normalized(mat_norm(phi.transpose() * g + g * phi), mat_norm(g * phi));
    r.e3a = std::max(dual, skew);

    r.xi_unit = std::abs(std::abs(xi.dot(g * xi)) - 1.0);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(phi);
    const auto& sv = svd.singularValues();
    double smax = sv.size() > 0 ? sv[0] : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i) {
        if (sv[i] > 1e-8 * std::max(1.0, smax)) ++rank;
    }
    r.phi_rank = rank;

    const Eigen::MatrixXd& Phi = ctx.fundamental_form();
    const Eigen::MatrixXd& dEta = ctx.d_eta();
    r.d_eta_vs_phi = normalized(mat_norm(dEta - Phi), std::max(mat_norm(dEta), mat_norm(Phi)));

    // eta ^ Phi^n != 0 iff Phi is nondegenerate on Ker eta (and eta(xi)=1).
    const HBasis& hb = ctx.h_basis();
    Eigen::MatrixXd restricted = hb.vectors.transpose() * Phi * hb.vectors;
    double scale = std::max(mat_norm(restricted), 1e-300);
    Eigen::MatrixXd unit_scaled = restricted / scale;
    r.volume_pairing = std::abs(unit_scaled.determinant());
    return r;
}

HPropertyResiduals h_property_residuals(const PointContext& ctx) {
    HPropertyResiduals r;
    const Eigen::MatrixXd& g = ctx.g();
    const Eigen::MatrixXd& phi = ctx.phi();
    const Eigen::MatrixXd& h = ctx.h();
    const Eigen::MatrixXd& ell = ctx.ell();
    const Eigen::VectorXd& xi = ctx.xi();
    const Eigen::VectorXd& eta = ctx.eta();

    Eigen::MatrixXd gh = g * h;
    r.self_adjoint = normalized(mat_norm(gh - gh.transpose()), mat_norm(gh));
    r.xi_kernel = normalized(vec_norm(h * xi), std::max(mat_norm(h), vec_norm(xi)));
    r.anticommute = normalized(mat_norm(phi * h + h * phi), mat_norm(phi * h));
    r.trace_h = normalized(std::abs(h.trace()), mat_norm(h));
    r.trace_phi_h = normalized(std::abs((phi * h).trace()), mat_norm(phi * h));
    r.eta_kernel = normalized(vec_norm(h.transpose() * eta), mat_norm(h));
    r.ell_xi = normalized(vec_norm(ell * xi), std::max(1.0, mat_norm(ell)));
    return r;
}

Eigen::MatrixXd h_operator(const PointContext& ctx) {
    const Eigen::MatrixXd& Phi = ctx.fundamental_form();
    const Eigen::MatrixXd& dEta = ctx.d_eta();
    double gap = normalized(mat_norm(dEta - Phi), std::max(mat_norm(dEta), mat_norm(Phi)));
    if (gap > 1e-6) {
        throw ContactViolationError("h operator requested on a non-contact structure");
    }
    HPropertyResiduals props = h_property_residuals(ctx);
    double worst = std::max({props.self_adjoint, props.xi_kernel, props.anticommute,
                             props.trace_h, props.trace_phi_h});
    if (worst > 1e-6) {
        throw ContactViolationError("h operator postconditions violated");
    }
    return ctx.h();
}

IdentityResiduals identity_suite_residuals(const PointContext& ctx) {
    IdentityResiduals r;
    const double eps = ctx.epsilon();
    const Eigen::MatrixXd& g = ctx.g();
    const Eigen::MatrixXd& phi = ctx.phi();
    const Eigen::MatrixXd& h = ctx.h();
    const Eigen::MatrixXd& ell = ctx.ell();

    // (2.3) nabla_X xi = -eps phi X - phi h X
    Eigen::MatrixXd rhs23 = -eps * phi - phi * h;
    r.i23 = normalized(mat_norm(ctx.nabla_xi() - rhs23),
                       std::max(mat_norm(ctx.nabla_xi()), mat_norm(rhs23)));

    // (2.4) (L_xi g)(X, Y) = 2 g(h phi X, Y)
    Eigen::MatrixXd rhs24 = 2.0 * (h * phi).transpose() * g;
    r.i24 = normalized(mat_norm(ctx.lie_xi_g() - rhs24),
                       std::max(mat_norm(ctx.lie_xi_g()), mat_norm(rhs24)));

    // (2.5) (nabla_xi h) X = phi X - h^2 phi X + phi R(xi, X) xi, with
    // R(xi, .) xi = -ell.
    Eigen::MatrixXd rhs25 = phi - h * h * phi - phi * ell;
    r.i25 = normalized(mat_norm(ctx.nabla_xi_h() - rhs25),
                       std::max(mat_norm(ctx.nabla_xi_h()), mat_norm(rhs25)));

    // (2.6) R(xi,X)xi - phi R(xi, phi X) xi = 2 (h^2 + phi^2) X
    Eigen::MatrixXd lhs26 = -ell + phi * ell * phi;
    Eigen::MatrixXd rhs26 = 2.0 * (h * h + phi * phi);
    r.i26 = normalized(mat_norm(lhs26 - rhs26), std::max(mat_norm(lhs26), mat_norm(rhs26)));
    return r;
}

double trace_nabla_phi_residual(const PointContext& ctx) {
    const int d = ctx.dim();
    const PhiBasis& basis = ctx.phi_basis();
    Eigen::VectorXd trace = Eigen::VectorXd::Zero(d);
    for (int a = 0; a < d; ++a) {
        const Eigen::VectorXd v = basis.vectors.col(a);
        for (int l = 0; l < d; ++l) {
            double acc = 0.0;
            for (int i = 0; i < d; ++i) {
                for (int j = 0; j < d; ++j) acc += v[i] * ctx.nabla_phi()(i, l, j) * v[j];
            }
            trace[l] += basis.signs[a] * acc;
        }
    }
    Eigen::VectorXd rhs = 2.0 * ctx.n() * ctx.xi();
    return normalized(vec_norm(trace - rhs), std::max(vec_norm(trace), vec_norm(rhs)));
}

double tau_vs_2hphi_residual(const PointContext& ctx) {
    Eigen::MatrixXd rhs = 2.0 * ctx.h() * ctx.phi();
    return normalized(mat_norm(ctx.tau() - rhs), std::max(mat_norm(ctx.tau()), mat_norm(rhs)));
}

double sasakian_residual(const PointContext& ctx) {
    const int d = ctx.dim();
    const double eps = ctx.epsilon();
    double resid = 0.0, scale = 0.0;
    for (int i = 0; i < d; ++i) {
        for (int l = 0; l < d; ++l) {
            for (int j = 0; j < d; ++j) {
                double target = ctx.g()(i, j) * ctx.xi()[l] - eps * ctx.eta()[j] * (l == i ? 1.0 : 0.0);
                double val = ctx.nabla_phi()(i, l, j);
                resid = std::max(resid, std::abs(val - target));
                scale = std::max({scale, std::abs(val), std::abs(target)});
            }
        }
    }
    return normalized(resid, scale);
}

double r_xi_residual(const PointContext& ctx) {
    const int d = ctx.dim();
    double resid = 0.0, scale = 0.0;
    for (int l = 0; l < d; ++l) {
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                double val = 0.0;
                for (int k = 0; k < d; ++k) val += ctx.riemann()(l, k, i, j) * ctx.xi()[k];
                double target = ctx.eta()[j] * (l == i ? 1.0 : 0.0) - ctx.eta()[i] * (l == j ? 1.0 : 0.0);
                resid = std::max(resid, std::abs(val - target));
                scale = std::max({scale, std::abs(val), std::abs(target)});
            }
        }
    }
    return normalized(resid, scale);
}

double codazzi_defect_max(const PointContext& ctx, const Ten3& nabla_A) {
    const int d = ctx.dim();
    double resid = 0.0;
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            for (int k = 0; k < d; ++k) {
                resid = std::max(resid, std::abs(nabla_A(i, k, j) - nabla_A(j, k, i)));
            }
        }
    }
    return normalized(resid, nabla_A.max_abs());
}

double eq_3_3_residual(const PointContext& ctx) {
    Eigen::MatrixXd lhs = -ctx.ell();
    Eigen::MatrixXd rhs = ctx.phi() * ctx.phi() - ctx.epsilon() * ctx.h();
    return normalized(mat_norm(lhs - rhs), std::max(mat_norm(lhs), mat_norm(rhs)));
}

double eq_4_1_residual(const PointContext& ctx) {
    const int d = ctx.dim();
    const double eps = ctx.epsilon();
    double resid = 0.0, scale = 0.0;
    for (int l = 0; l < d; ++l) {
        for (int xarg = 0; xarg < d; ++xarg) {
            for (int yarg = 0; yarg < d; ++yarg) {
                double val = 0.0;
                for (int i = 0; i < d; ++i) val += ctx.riemann()(l, yarg, i, xarg) * ctx.xi()[i];
                double target = eps * ctx.nabla_phi()(xarg, l, yarg);
                resid = std::max(resid, std::abs(val - target));
                scale = std::max({scale, std::abs(val), std::abs(target)});
            }
        }
    }
    return normalized(resid, scale);
}

double eq_4_3_residual(const PointContext& ctx) {
    const int d = ctx.dim();
    const double eps = ctx.epsilon();
    double resid = 0.0, scale = 0.0;
    for (int l = 0; l < d; ++l) {
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                double val = 0.0;
                for (int k = 0; k < d; ++k) val += ctx.riemann()(l, k, i, j) * ctx.xi()[k];
                double target = eps * (ctx.nabla_phi()(j, l, i) - ctx.nabla_phi()(i, l, j));
                resid = std::max(resid, std::abs(val - target));
                scale = std::max({scale, std::abs(val), std::abs(target)});
            }
        }
    }
    return normalized(resid, scale);
}

double eq_4_4_residual(const PointContext& ctx) {
    Eigen::VectorXd lhs = ctx.ricci_operator() * ctx.xi();
    Eigen::VectorXd rhs = 2.0 * ctx.epsilon() * ctx.n() * ctx.xi();
    return normalized(vec_norm(lhs - rhs), std::max(vec_norm(lhs), vec_norm(rhs)));
}

double eq_4_5_residual(const PointContext& ctx) {
    Eigen::MatrixXd lhs = -ctx.ell() + ctx.phi() * ctx.ell() * ctx.phi();
    Eigen::MatrixXd rhs = 2.0 * ctx.phi() * ctx.phi();
    return normalized(mat_norm(lhs - rhs), std::max(mat_norm(lhs), mat_norm(rhs)));
}

double eq_5_6_residual(const PointContext& ctx) {
    const int d = ctx.dim();
    Eigen::MatrixXd rhs = -ctx.h() * ctx.h() + Eigen::MatrixXd::Identity(d, d) -
                          ctx.xi() * ctx.eta().transpose();
    return normalized(mat_norm(ctx.ell() - rhs), std::max(mat_norm(ctx.ell()), mat_norm(rhs)));
}

double eq_5_7_residual(const PointContext& ctx) {
    const double eps = ctx.epsilon();
    const Eigen::MatrixXd& h = ctx.h();
    const Eigen::MatrixXd& phi = ctx.phi();
    Eigen::MatrixXd h2 = h * h;
    Eigen::MatrixXd lhs = eps * h2 * phi - h2 * h * phi - eps * phi + h * phi;
    return normalized(mat_norm(lhs), std::max({mat_norm(h2 * phi), mat_norm(phi), mat_norm(h * phi)}));
}

double xi_sectional(const PointContext& ctx, const Eigen::VectorXd& X) {
    const int d = ctx.dim();
    const double eps = ctx.epsilon();
    const double gxx = X.dot(ctx.g() * X);
    if (std::abs(gxx) < 1e-6) {
        throw NullProbeError("xi-sectional: null probe admits no sign");
    }
    if (std::abs(ctx.eta().dot(X)) > 1e-6 || std::abs(std::abs(gxx) - 1.0) > 1e-6) {
        throw NonUnitProbeError("xi-sectional: probe must be unit and in Ker eta");
    }
    const double eps_x = gxx >= 0 ? 1.0 : -1.0;
    Eigen::VectorXd rxx = Eigen::VectorXd::Zero(d);
    for (int l = 0; l < d; ++l) {
        double acc = 0.0;
        for (int k = 0; k < d; ++k) {
            for (int i = 0; i < d; ++i) {
                for (int j = 0; j < d; ++j) {
                    acc += ctx.riemann()(l, k, i, j) * ctx.xi()[i] * X[j] * X[k];
                }
            }
        }
        rxx[l] = acc;
    }
    return eps * eps_x * rxx.dot(ctx.g() * ctx.xi());
}

SectionalSample sectional_sample(const PointContext& ctx) {
    SectionalSample out;
    const int two_n = 2 * ctx.n();
    const double eps = ctx.epsilon();
    const Eigen::MatrixXd& g = ctx.g();
    const Eigen::MatrixXd& h = ctx.h();
    const Eigen::MatrixXd& phi = ctx.phi();
    const Eigen::MatrixXd h2 = h * h;
    const Eigen::MatrixXd h3 = h2 * h;

    out.h_sq_norm = mat_norm(h2);
    out.nabla_xi_h_norm = mat_norm(ctx.nabla_xi_h());
    out.nabla_ell_norm = ctx.nabla_ell().max_abs();

    const PhiBasis& basis = ctx.phi_basis();
    for (int a = 0; a < two_n; ++a) {
        Eigen::VectorXd v = basis.vectors.col(a);
        double gvv = v.dot(g * v);
        if (std::abs(gvv) < 1e-6) {
            ++out.skipped_null;
            if (2 * out.skipped_null > two_n) {
                throw NullProbeError("xi-sectional: more than half of the probes are null");
            }
            continue;
        }
        ++out.probes;
        const double eps_x = gvv >= 0 ? 1.0 : -1.0;
        const Eigen::VectorXd pv = phi * v;

        const double K = xi_sectional(ctx, v);
        const double Kphi = xi_sectional(ctx, pv);

        const double hv = (ctx.nabla_xi_h() * v).dot(g.transpose() * pv); // g((nabla_xi h)v, phi v)
        const double gh2 = (h2 * v).dot(g.transpose() * v);

        out.f51 = std::max(out.f51,
                           normalized(std::abs(K - eps * (1.0 - eps_x * gh2 - eps_x * hv)),
                                      std::max(std::abs(K), 1.0)));
        out.f52 = std::max(out.f52, normalized(std::abs(K - Kphi + 2.0 * eps * eps_x * hv),
                                               std::max(std::abs(K), std::abs(Kphi))));
        out.f54 = std::max(out.f54,
                           normalized(std::abs(K + Kphi - 2.0 * eps * (1.0 - eps_x * gh2)),
                                      std::max(std::abs(K + Kphi), 1.0)));
        out.k_phi_gap = std::max(out.k_phi_gap, std::abs(K - Kphi));
        out.k_minus_eps = std::max(out.k_minus_eps, std::abs(K - eps));
        out.k_abs = std::max(out.k_abs, std::abs(K));

        const double gv = v.dot(g * v);
        const double ghv = (h * v).dot(g.transpose() * v);
        const double gh3 = (h3 * v).dot(g.transpose() * v);
        out.e58 = std::max(out.e58, std::abs(eps * gh2 + gh3 - eps * gv - ghv));
        out.e59 = std::max(out.e59, std::abs(-eps * gh2 + gh3 + eps * gv - ghv));
        out.e510 = std::max(out.e510, std::abs(gh2 - gv));
    }
    return out;
}

ConnectionResiduals connection_residuals(const PointContext& ctx) {
    ConnectionResiduals r;
    const int d = ctx.dim();
    const Ten3& gamma = ctx.gamma();
    const Ten4& R = ctx.riemann();
    const Ten4& Rl = ctx.riemann_low();

    for (int k = 0; k < d; ++k) {
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                r.torsion = std::max(r.torsion, std::abs(gamma(k, i, j) - gamma(k, j, i)));
            }
        }
    }

    // (nabla_i g)_jk = d_i g_jk - Gamma^m_ij g_mk - Gamma^m_ik g_jm
    double ng = 0.0;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            for (int k = 0; k < d; ++k) {
                double acc = ctx.conn().g.at(j, k).first_partial(i);
                for (int m = 0; m < d; ++m) {
                    acc -= gamma(m, i, j) * ctx.g()(m, k) + gamma(m, i, k) * ctx.g()(j, m);
                }
                ng = std::max(ng, std::abs(acc));
            }
        }
    }
    r.nabla_g = normalized(ng, std::max(mat_norm(ctx.g()), gamma.max_abs()));

    const double rscale = std::max(1.0, R.max_abs());
    r.riemann_max = R.max_abs();
    for (int l = 0; l < d; ++l) {
        for (int k = 0; k < d; ++k) {
            for (int i = 0; i < d; ++i) {
                for (int j = 0; j < d; ++j) {
                    r.antisym = std::max(r.antisym, std::abs(R(l, k, i, j) + R(l, k, j, i)) / rscale);
                    r.pair_skew = std::max(r.pair_skew,
                                           std::abs(Rl(l, k, i, j) + Rl(k, l, i, j)) / rscale);
                    double cyc = R(l, k, i, j) + R(l, i, j, k) + R(l, j, k, i);
                    r.bianchi = std::max(r.bianchi, std::abs(cyc) / rscale);
                }
            }
        }
    }
    return r;
}

} // namespace pscontact
