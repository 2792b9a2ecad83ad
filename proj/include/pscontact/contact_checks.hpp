#pragma once

#include <map>
#include <string>

#include "pscontact/geometry.hpp"

namespace pscontact {

// All residuals are hybrid-normalized: max-abs defect divided by
// max(1, magnitude of the participating terms), so pass tolerances compare
// against conditioning-neutral numbers.

struct AxiomResiduals {
    double phi_square = 0;   // phi^2 = -I + eta (x) xi
    double eta_xi = 0;       // eta(xi) = 1
    double phi_xi = 0;       // phi xi = 0
    double eta_phi = 0;      // eta o phi = 0
    double e3 = 0;           // g(phi X, phi Y) = g(X,Y) - eps eta(X) eta(Y)
    double e3a = 0;          // eta = eps g(.,xi) and phi g-skew
    double xi_unit = 0;      // | |g(xi,xi)| - 1 |
    int phi_rank = 0;        // numeric rank of phi (expect 2n)
    double d_eta_vs_phi = 0; // ||d eta - Phi||
    double volume_pairing = 0; // scaled |det(Phi on Ker eta)|, large when eta ^ Phi^n != 0
};
AxiomResiduals axiom_residuals(const PointContext& ctx);

struct HPropertyResiduals {
    double self_adjoint = 0;
    double xi_kernel = 0;    // h xi = 0
    double anticommute = 0;  // phi h + h phi = 0
    double trace_h = 0;
    double trace_phi_h = 0;
    double eta_kernel = 0;   // eta o h = 0
    double ell_xi = 0;       // ell xi = 0
};
HPropertyResiduals h_property_residuals(const PointContext& ctx);

// Matrix of h = (1/2) L_xi phi with its postconditions re-verified; throws
// ContactViolationError when d eta != Phi beyond the predicate threshold,
// since the algebraic h properties are only guaranteed on contact structures.
Eigen::MatrixXd h_operator(const PointContext& ctx);

// (2.3)..(2.6); the (2.7) trace identity needs a phi-basis and lives in its
// own function so frame-construction failures stay isolated.
struct IdentityResiduals {
    double i23 = 0, i24 = 0, i25 = 0, i26 = 0;
};
IdentityResiduals identity_suite_residuals(const PointContext& ctx);

// tr nabla phi = 2n xi, traced with frame signs over the phi-basis; may
// throw FrameConstructionError.
double trace_nabla_phi_residual(const PointContext& ctx);

double tau_vs_2hphi_residual(const PointContext& ctx);
double sasakian_residual(const PointContext& ctx);   // (2.8)
double r_xi_residual(const PointContext& ctx);       // R(X,Y)xi = eta(Y)X - eta(X)Y

// max over probe pairs of the antisymmetrized covariant derivative of a
// self-adjoint (1,1) field.
double codazzi_defect_max(const PointContext& ctx, const Ten3& nabla_A);

double eq_3_3_residual(const PointContext& ctx);  // R(xi,X)xi = phi^2 X - eps h X
double eq_4_1_residual(const PointContext& ctx);  // R(xi,X)Y = eps (nabla_X phi) Y
double eq_4_3_residual(const PointContext& ctx);
double eq_4_4_residual(const PointContext& ctx);  // Q xi = 2 eps n xi
double eq_4_5_residual(const PointContext& ctx);
double eq_5_6_residual(const PointContext& ctx);  // ell = -h^2 + I - xi (x) eta
double eq_5_7_residual(const PointContext& ctx);

// xi-sectional curvature for a unit probe in Ker eta; throws
// NonUnitProbeError / NullProbeError on inadmissible probes.
double xi_sectional(const PointContext& ctx, const Eigen::VectorXd& X);

// Per-point maxima over the phi-basis probes e_i, phi e_i.
struct SectionalSample {
    double f51 = 0, f52 = 0, f54 = 0;
    double k_phi_gap = 0;     // |K(X) - K(phi X)|
    double k_minus_eps = 0;   // |K - eps|
    double k_abs = 0;         // |K|
    double e58 = 0, e59 = 0, e510 = 0;
    double h_sq_norm = 0;
    double nabla_xi_h_norm = 0;
    double nabla_ell_norm = 0;
    int probes = 0;
    int skipped_null = 0;
};
SectionalSample sectional_sample(const PointContext& ctx);

struct ConnectionResiduals {
    double torsion = 0;
    double nabla_g = 0;
    double antisym = 0;
    double pair_skew = 0;
    double bianchi = 0;
    double riemann_max = 0;  // unnormalized, for flat-entry assertions
};
ConnectionResiduals connection_residuals(const PointContext& ctx);

struct ClassificationResult {
    bool bound = false;
    bool is_almost_contact = false;
    bool is_compatible = false;
    bool is_contact = false;
    bool is_k_contact = false;
    bool is_sasakian = false;
    std::map<std::string, double> residuals;
};

} // namespace pscontact
