#pragma once

#include "pscontact/geometry.hpp"

namespace pscontact {

// Levi form data over the kept H-basis probes.
struct LeviFormAtPoint {
    Eigen::MatrixXd L;       // L(a,b) = d theta(w_a, J w_b), d-theta route
    Eigen::MatrixXd alpha;   // alpha(a,b) = (nabla_a theta)(J w_b) + (nabla_{J w_a} theta)(w_b)
    double route_agreement = 0; // d-theta route vs -1/2 theta([X, JY]) route
    double det_scaled = 0;      // |det(L / max|L|)|
};

// Per-point residuals of the almost CR structure (H(M) = Ker eta, J = phi|_H,
// theta = -eta) and the associated theorems. The bracket conditions are
// evaluated on H-extended probe fields: coordinate probes composed with the
// pointwise projection X - eta(X) xi, differentiated as such.
struct CRSample {
    double j_squared = 0;       // J^2 = -I on the H-basis
    double theta_kernel = 0;    // theta vanishes on the H-basis

    LeviFormAtPoint levi;
    double levi_vs_g = 0;       // ||L - g|| restricted to H (Webster relation)

    // the four equivalent statements, evaluated independently
    double prop6_hermitian = 0;
    double prop6_symmetric = 0;
    double prop6_bracket_eta = 0;
    double prop6_alpha_sym = 0;

    double d1 = 0;              // max |eta([JX,Y] + [X,JY])|
    double d2 = 0;              // max ||J([JX,Y]+[X,JY])_H - [JX,JY]_H + [X,Y]_H||

    double e63 = 0;             // (nabla_X J)Y - (nabla_JX J)JY = alpha(X,Y) xi
    double a_h = 0;             // H-components of the (6.5) defect
    double gamma_vs_alpha = 0;  // xi-component of the (6.3) defect vs alpha

    double nabla_xi_xi = 0;     // geodesic hypothesis
    double two_h_vs_bott = 0;   // 2 h X = (bott_xi J) X on H
    double bott_j_norm = 0;     // ||bott_xi J||
    double h_norm = 0;

    double webster_round_trip = 0; // reconstructed g_theta vs g, full matrices
    double e69 = 0;             // (nabla_X phi)Y = g(X + eps hX, Y) xi - eps eta(Y)(X + eps hX)
};

CRSample cr_sample(const PointContext& ctx);

// Orthogonal projection X - eta(X) xi.
Eigen::VectorXd project_H(const PointContext& ctx, const Eigen::VectorXd& X);

// Bott partial derivative of an H-extended probe field: [xi, X] projected.
Eigen::VectorXd bott_derivative(const PointContext& ctx, int probe_index);

// max_X || 2 h X - (bott_xi J) X || over the H-basis; throws
// GeodesicHypothesisError when ||nabla_xi xi|| exceeds the threshold the
// theorem requires.
double bott_identity_residual(const PointContext& ctx);

} // namespace pscontact
