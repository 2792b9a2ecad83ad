#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "pscontact/chart.hpp"
#include "pscontact/jet.hpp"

namespace pscontact {

// Rank-3 / rank-4 arrays of plain values over one chart dimension.
struct Ten3 {
    int d = 0;
    std::vector<double> v;
    Ten3() = default;
    explicit Ten3(int d) : d(d), v(static_cast<std::size_t>(d) * d * d, 0.0) {}
    double& operator()(int i, int j, int k) { return v[(static_cast<std::size_t>(i) * d + j) * d + k]; }
    double operator()(int i, int j, int k) const { return v[(static_cast<std::size_t>(i) * d + j) * d + k]; }
    double max_abs() const;
};

struct Ten4 {
    int d = 0;
    std::vector<double> v;
    Ten4() = default;
    explicit Ten4(int d) : d(d), v(static_cast<std::size_t>(d) * d * d * d, 0.0) {}
    double& operator()(int i, int j, int k, int l) {
        return v[((static_cast<std::size_t>(i) * d + j) * d + k) * d + l];
    }
    double operator()(int i, int j, int k, int l) const {
        return v[((static_cast<std::size_t>(i) * d + j) * d + k) * d + l];
    }
    double max_abs() const;
};

// Dense matrix / vector of jets over the chart's variables.
struct JetMat {
    int rows = 0, cols = 0;
    std::vector<Jet> m;
    JetMat() = default;
    JetMat(int rows, int cols) : rows(rows), cols(cols), m(static_cast<std::size_t>(rows) * cols) {}
    Jet& at(int i, int j) { return m[static_cast<std::size_t>(i) * cols + j]; }
    const Jet& at(int i, int j) const { return m[static_cast<std::size_t>(i) * cols + j]; }
    Eigen::MatrixXd values() const;
};

using JetVec = std::vector<Jet>;

Eigen::VectorXd jet_values(const JetVec& v);

// [X,Y]^k = X^i d_i Y^k - Y^i d_i X^k; the result is one order lower.
JetVec jet_bracket(const JetVec& X, const JetVec& Y);

// Gauss-Jordan inverse with value-pivoting; throws DegenerateMetricError
// when a pivot value falls below the scale-aware threshold.
JetMat jet_matrix_inverse(const JetMat& A);

// Tensor-field evaluation at a point, one jet per component.
JetMat eval_matrix_jets(const TensorFieldSpec& t, std::span<const double> x, int order);
JetVec eval_vector_jets(const TensorFieldSpec& t, std::span<const double> x, int order);

// Levi-Civita data from the metric's order-W jets:
//   Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij)     (order W-1)
//   R^l_kij    = d_i Gamma^l_jk - d_j Gamma^l_ik
//              + Gamma^l_im Gamma^m_jk - Gamma^l_jm Gamma^m_ik (order W-2)
// following R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y], so that
// R(d_i, d_j) d_k = R^l_kij d_l.
struct ConnectionJets {
    int dim = 0;
    JetMat g;        // order W
    JetMat ginv;     // order W-1
    std::vector<Jet> gamma;    // Gamma^k_ij at ((k*d)+i)*d+j, order W-1
    std::vector<Jet> riemann;  // R^l_kij at (((l*d)+k)*d+i)*d+j, order W-2; empty when W < 2

    const Jet& gamma_at(int k, int i, int j) const {
        return gamma[(static_cast<std::size_t>(k) * dim + i) * dim + j];
    }
    const Jet& riemann_at(int l, int k, int i, int j) const {
        return riemann[((static_cast<std::size_t>(l) * dim + k) * dim + i) * dim + j];
    }
};

ConnectionJets compute_connection(const TensorFieldSpec& metric, std::span<const double> x,
                                  int metric_order);

// Metric at a point with inverse and eigenvalue-sign signature.
struct MetricAtPoint {
    Eigen::MatrixXd components;
    Eigen::MatrixXd inverse;
    int positive = 0;
    int negative = 0;
};

MetricAtPoint metric_at(const TensorFieldSpec& metric, std::span<const double> x);

// Pseudo-orthonormal frame {e_1..e_n, phi e_1..phi e_n, xi} with signs
// eps_a = g(v_a, v_a).
struct PhiBasis {
    Eigen::MatrixXd vectors; // d x d, columns in the order above
    std::vector<int> signs;
    int n = 0;
};

// Basis of Ker eta out of projected coordinate probes; `kept` lists the
// surviving probe indices (the smallest-pivot probe is dropped).
struct HBasis {
    Eigen::MatrixXd vectors; // d x 2n
    std::vector<int> kept;
    int dropped = -1;
};

struct StructureOperators;

// Everything the check suites read at one sample point. Construction is pure
// and deterministic; instances are independent, so points can be evaluated
// concurrently.
class PointContext {
public:
    PointContext(const StructureSpec& spec, std::vector<double> point);

    const StructureSpec& spec() const { return *spec_; }
    const std::vector<double>& x() const { return x_; }
    int dim() const { return dim_; }
    int n() const { return (dim_ - 1) / 2; }
    bool bound() const { return bound_; }

    // connection / curvature
    const ConnectionJets& conn() const { return conn_; }
    const Eigen::MatrixXd& g() const { return g_; }
    const Eigen::MatrixXd& ginv() const { return ginv_; }
    const Ten3& gamma() const { return gamma_; }
    const Ten4& riemann() const { return riemann_; }       // R^l_kij
    const Ten4& riemann_low() const { return riemann_low_; } // R_lkij = g_lm R^m_kij
    const Eigen::MatrixXd& ricci_form() const { return S_; }
    const Eigen::MatrixXd& ricci_operator() const { return Q_; }

    // structure fields (valid only when bound())
    const Eigen::MatrixXd& phi() const { return phi_; }
    const Eigen::VectorXd& xi() const { return xi_; }
    const Eigen::VectorXd& eta() const { return eta_; }
    double epsilon() const { return epsilon_; }
    const Eigen::MatrixXd& fundamental_form() const { return Phi_; } // Phi_ij = g(d_i, phi d_j)
    const Eigen::MatrixXd& d_eta() const { return dEta_; }           // 1/2 (d_i eta_j - d_j eta_i)
    const Eigen::MatrixXd& h() const { return h_; }
    const Eigen::MatrixXd& ell() const { return ell_; }   // ell X = R(X, xi) xi
    const Eigen::MatrixXd& tau() const { return tau_; }   // g(tau X, Y) = (L_xi g)(X, Y)
    const Eigen::MatrixXd& lie_xi_g() const { return lieg_; }
    const Eigen::MatrixXd& nabla_xi() const { return nabla_xi_; }     // col i = nabla_{d_i} xi
    const Eigen::MatrixXd& nabla_xi_h() const { return nabla_xi_h_; }
    const Eigen::MatrixXd& nabla_eta() const { return nabla_eta_; }   // (i,j) = (nabla_i eta)_j
    const Ten3& nabla_phi() const { return nabla_phi_; } // (i,k,j) = (nabla_i phi)^k_j
    const Ten3& nabla_h() const { return nabla_h_; }
    const Ten3& nabla_tau() const { return nabla_tau_; }
    const Ten3& nabla_ell() const { return nabla_ell_; }

    const JetMat& phi_jet() const { return phi_jet_; }
    const JetVec& xi_jet() const { return xi_jet_; }
    const JetVec& eta_jet() const { return eta_jet_; }
    const JetMat& h_jet() const { return h_jet_; }

    double pair(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
        return a.dot(g_ * b);
    }

    // Frames; both constructions are deterministic per point and cached.
    const PhiBasis& phi_basis() const;
    const HBasis& h_basis() const;

private:
    void build_connection();
    void build_structure();

    const StructureSpec* spec_;
    std::vector<double> x_;
    int dim_;
    bool bound_ = false;

    ConnectionJets conn_;
    Eigen::MatrixXd g_, ginv_;
    Ten3 gamma_;
    Ten4 riemann_, riemann_low_;
    Eigen::MatrixXd S_, Q_;

    JetMat phi_jet_;
    JetVec xi_jet_, eta_jet_;
    JetMat h_jet_, ell_jet_, tau_jet_, lieg_jet_;
    Eigen::MatrixXd phi_, Phi_, dEta_, h_, ell_, tau_, lieg_;
    Eigen::MatrixXd nabla_xi_, nabla_xi_h_, nabla_eta_;
    Eigen::VectorXd xi_, eta_;
    double epsilon_ = 1.0;
    Ten3 nabla_phi_, nabla_h_, nabla_tau_, nabla_ell_;

    mutable std::optional<PhiBasis> phi_basis_;
    mutable std::optional<HBasis> h_basis_;
};

// Covariant derivative of a (1,1) field given its component jets (order >= 1)
// and the Christoffel values: (nabla_i A)^k_j = d_i A^k_j
// + Gamma^k_im A^m_j - Gamma^m_ij A^k_m, stored at (i,k,j).
Ten3 covariant_derivative_11(const JetMat& A, const Ten3& gamma);

PhiBasis build_phi_basis(const PointContext& ctx);
HBasis build_h_basis(const PointContext& ctx);

} // namespace pscontact
