#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pscontact/catalog.hpp"
#include "pscontact/contact_checks.hpp"
#include "pscontact/geometry.hpp"

using namespace pscontact;

// Eleven coordinates is the top of the intended working range: order-3
// tables hold 364 entries there, so this exercises the wide-table kernel
// paths that the small catalog charts never reach.
TEST_CASE("dimension 11 Sasakian structure checks out at sample points") {
    CatalogEntry e = entry_standard_sasakian(5, +1, 2);
    CHECK(e.spec.chart.dim() == 11);

    SamplingSpec s = e.spec.sampling;
    s.points = 2;
    auto pts = make_sample_points(e.spec.chart, s);
    REQUIRE(pts.size() >= 2);

    for (std::size_t i = 0; i < 2; ++i) {
        PointContext ctx(e.spec, pts[i]);
        AxiomResiduals ax = axiom_residuals(ctx);
        CHECK(ax.phi_square < 1e-10);
        CHECK(ax.e3 < 1e-10);
        CHECK(ax.d_eta_vs_phi < 1e-9);
        CHECK(ax.phi_rank == 10);

        IdentityResiduals ir = identity_suite_residuals(ctx);
        CHECK(ir.i23 < 1e-8);
        CHECK(ir.i24 < 1e-8);
        CHECK(ir.i25 < 1e-8);
        CHECK(ir.i26 < 1e-8);

        CHECK(sasakian_residual(ctx) < 1e-8);
        CHECK(r_xi_residual(ctx) < 1e-8);
        CHECK(ctx.h().cwiseAbs().maxCoeff() < 1e-9);

        SectionalSample sec = sectional_sample(ctx);
        CHECK(sec.probes == 10);
        CHECK(sec.k_minus_eps < 1e-8);

        ConnectionResiduals cr = connection_residuals(ctx);
        CHECK(cr.nabla_g < 1e-10);
        CHECK(cr.bianchi < 1e-9);
    }

    MetricAtPoint m = metric_at(e.spec.metric, e.spec.chart.center());
    CHECK(m.positive == 7);
    CHECK(m.negative == 4);
}
