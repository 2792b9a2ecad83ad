#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>

#include "pscontact/catalog.hpp"
#include "pscontact/contact_checks.hpp"
#include "pscontact/cr_checks.hpp"
#include "pscontact/engine.hpp"
#include "pscontact/errors.hpp"
#include "pscontact/specfile.hpp"

using namespace pscontact;

namespace {

// Almost contact pseudo-metric structure whose Reeb field is not geodesic
// and which is not contact: xi = (1+x1) d_z, eta = dz/(1+x1),
// g = diag(1, 1, 1/(1+x1)^2), phi rotating the (x1, y1) plane.
StructureSpec non_geodesic_structure() {
    StructureSpec s;
    s.name = "non_geodesic_r3";
    s.chart.n = 1;
    s.chart.coordinates = default_coordinates(1);
    s.chart.box.assign(3, {-0.5, 0.5});
    const auto& co = s.chart.coordinates;
    auto pe = [&](const std::string& t) { return parse_expression(t, co); };

    s.metric = TensorFieldSpec::make(0, 2, 3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) s.metric.at(i, j) = pe("0");
    }
    s.metric.at(0, 0) = pe("1");
    s.metric.at(1, 1) = pe("1");
    s.metric.at(2, 2) = pe("1/(1+x1)^2");

    s.xi = TensorFieldSpec::make(1, 0, 3);
    s.xi->at(0) = pe("0");
    s.xi->at(1) = pe("0");
    s.xi->at(2) = pe("1+x1");

    s.eta = TensorFieldSpec::make(0, 1, 3);
    s.eta->at(0) = pe("0");
    s.eta->at(1) = pe("0");
    s.eta->at(2) = pe("1/(1+x1)");

    s.phi = TensorFieldSpec::make(1, 1, 3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) s.phi->at(i, j) = pe("0");
    }
    s.phi->at(1, 0) = pe("1");
    s.phi->at(0, 1) = pe("-1");
    return s;
}

} // namespace

TEST_CASE("non-geodesic fixture satisfies the axioms but not the hypotheses") {
    StructureSpec s = non_geodesic_structure();
    s.validate();
    PointContext ctx(s, std::vector<double>{0.2, 0.0, 0.1});
    AxiomResiduals ax = axiom_residuals(ctx);
    CHECK(ax.phi_square < 1e-12);
    CHECK(ax.eta_xi < 1e-12);
    CHECK(ax.phi_xi < 1e-12);
    CHECK(ax.eta_phi < 1e-12);
    CHECK(ax.e3 < 1e-12);
    CHECK(ax.e3a < 1e-12);
    CHECK(ax.xi_unit < 1e-12);
    CHECK(ax.d_eta_vs_phi > 1e-3); // not contact

    CHECK((ctx.nabla_xi() * ctx.xi()).cwiseAbs().maxCoeff() > 1e-3);
    CHECK_THROWS_AS(h_operator(ctx), ContactViolationError);
    CHECK_THROWS_AS(bott_identity_residual(ctx), GeodesicHypothesisError);
}

TEST_CASE("h_operator and bott identity succeed on contact entries") {
    const CatalogEntry* e = find_catalog_entry("flat_contact_r3");
    REQUIRE(e != nullptr);
    PointContext ctx(e->spec, e->spec.chart.center());
    Eigen::MatrixXd h = h_operator(ctx);
    CHECK((h - ctx.h()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(bott_identity_residual(ctx) < 1e-8);
}

TEST_CASE("classification is invariant under sample reordering") {
    const CatalogEntry* e = find_catalog_entry("flat_contact_r3");
    StructureSpec a = e->spec;
    a.sampling.points = 6;
    a.sampling.extra = {{0.5, 0.5, 0.5}, {-0.25, 0.3, 0.9}, {0.1, -0.8, -0.4}};
    StructureSpec b = a;
    b.sampling.extra = {{0.1, -0.8, -0.4}, {0.5, 0.5, 0.5}, {-0.25, 0.3, 0.9}};

    EngineOptions opt;
    ClassificationResult ca = classify(a, opt);
    ClassificationResult cb = classify(b, opt);
    CHECK(ca.is_almost_contact == cb.is_almost_contact);
    CHECK(ca.is_compatible == cb.is_compatible);
    CHECK(ca.is_contact == cb.is_contact);
    CHECK(ca.is_k_contact == cb.is_k_contact);
    CHECK(ca.is_sasakian == cb.is_sasakian);
    for (const auto& [key, val] : ca.residuals) {
        CHECK(cb.residuals.at(key) == val);
    }
}

TEST_CASE("tolerance profiles from the environment") {
    const CatalogEntry* e = find_catalog_entry("standard_sasakian_n1");
    StructureSpec spec = e->spec;
    spec.sampling.points = 2;

    setenv("PSEUDOCONTACT_TOL", "loose", 1);
    CHECK(tolerance_profile_from_env() == "loose");
    EngineOptions opt;
    opt.profile = tolerance_profile_from_env();
    CheckReport loose = run_checks(spec, opt, "x");

    setenv("PSEUDOCONTACT_TOL", "strict", 1);
    opt.profile = tolerance_profile_from_env();
    CheckReport strict = run_checks(spec, opt, "x");
    unsetenv("PSEUDOCONTACT_TOL");
    CHECK(tolerance_profile_from_env() == "default");

    auto tol_of = [](const CheckReport& r, const std::string& id) {
        for (const auto& rec : r.records) {
            if (rec.check_id == id) return rec.tolerance;
        }
        return -1.0;
    };
    CHECK(tol_of(loose, "identity.2.3") == 1e-6);
    CHECK(tol_of(strict, "identity.2.3") == 1e-10);
    CHECK(tol_of(loose, "sec.eq_5_6") == 1e-4);
    CHECK(tol_of(strict, "sec.eq_5_6") == 1e-8);
}

TEST_CASE("check records all carry a reference string") {
    const CatalogEntry* e = find_catalog_entry("standard_sasakian_n1");
    StructureSpec spec = e->spec;
    spec.sampling.points = 2;
    EngineOptions opt;
    CheckReport rep = run_checks(spec, opt, "x");
    CHECK(rep.records.size() > 40);
    for (const auto& r : rep.records) {
        CHECK_FALSE(r.paper_ref.empty());
    }
}
