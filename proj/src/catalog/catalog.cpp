#include <cmath>
#include <cstdio>

#include "pscontact/catalog.hpp"
#include "pscontact/contact_checks.hpp"
#include "pscontact/errors.hpp"
#include "pscontact/geometry.hpp"

namespace pscontact {

namespace {

ExprPtr pe(const std::string& text, const std::vector<std::string>& coords) {
    return parse_expression(text, coords);
}

std::string frac(const std::string& numer) { return "(" + numer + ")/4"; }

// Reduced construction-time self-test at a few deterministic points; the
// full suites re-verify every entry.
void self_test(const CatalogEntry& e) {
    SamplingSpec quick;
    quick.points = 3;
    auto pts = make_sample_points(e.spec.chart, quick);
    for (const auto& p : pts) {
        PointContext ctx(e.spec, p);
        if (!e.expect_bound) {
            ConnectionResiduals cr = connection_residuals(ctx);
            if (cr.nabla_g > 1e-9 || cr.bianchi > 1e-9) {
                throw CatalogSelfTestError(e.name + ": connection self-test failed");
            }
            continue;
        }
        AxiomResiduals ax = axiom_residuals(ctx);
        double worst = std::max({ax.phi_square, ax.eta_xi, ax.phi_xi, ax.eta_phi, ax.e3, ax.e3a,
                                 ax.xi_unit});
        if (worst > 1e-9 || ax.phi_rank != 2 * ctx.n()) {
            throw CatalogSelfTestError(e.name + ": almost-contact axioms failed in self-test");
        }
        bool contact = ax.d_eta_vs_phi < 1e-9;
        if (contact != e.expect_contact) {
            throw CatalogSelfTestError(e.name + ": contact expectation failed in self-test");
        }
        double h_norm = ctx.h().cwiseAbs().maxCoeff();
        if (e.expect_k_contact ? h_norm > 1e-9 : h_norm < 0.1) {
            throw CatalogSelfTestError(e.name + ": h expectation failed in self-test");
        }
        bool sas = contact && sasakian_residual(ctx) < 1e-8;
        if (sas != e.expect_sasakian) {
            throw CatalogSelfTestError(e.name + ": Sasakian expectation failed in self-test");
        }
        if (e.expect_sasakian && r_xi_residual(ctx) > 1e-8) {
            throw CatalogSelfTestError(e.name + ": curvature condition failed in self-test");
        }
        if (e.expect_k_value) {
            SectionalSample sec = sectional_sample(ctx);
            double target = *e.expect_k_value;
            double gap = std::abs(target) < 0.5 ? sec.k_abs : sec.k_minus_eps;
            if (gap > 1e-8) {
                throw CatalogSelfTestError(e.name + ": xi-sectional value failed in self-test");
            }
        }
    }
    if (e.expect_signature) {
        MetricAtPoint m = metric_at(e.spec.metric, e.spec.chart.center());
        if (m.positive != e.expect_signature->first || m.negative != e.expect_signature->second) {
            throw CatalogSelfTestError(e.name + ": signature expectation failed in self-test");
        }
    }
}

} // namespace

CatalogEntry entry_standard_sasakian(int n, int epsilon, int index_s) {
    if (n < 1 || (epsilon != 1 && epsilon != -1) || index_s < 0 || index_s > n) {
        throw Error("entry_standard_sasakian: bad parameters");
    }
    const int d = 2 * n + 1;
    CatalogEntry e;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "standard_sasakian_n%d%s%s", n,
                  epsilon < 0 ? "_lorentzian" : "", index_s > 0 ? "_mixed" : "");
    e.name = buf;
    std::snprintf(buf, sizeof(buf),
                  "Sasakian structure on R^%d: eta = (dz - sum y_i dx_i)/2, eps = %+d, %d sign-flipped pair(s)",
                  d, epsilon, index_s);
    e.description = buf;

    StructureSpec& s = e.spec;
    s.name = e.name;
    s.description = e.description;
    s.chart.n = n;
    s.chart.coordinates = default_coordinates(n);
    s.chart.box.assign(static_cast<std::size_t>(d), {-0.9, 0.9});
    const auto& co = s.chart.coordinates;

    auto yname = [&](int i) { return "y" + std::to_string(i + 1); };
    auto delta = [&](int i) { return i < index_s ? -1 : 1; };
    const int xc0 = 0, yc0 = n, zc = 2 * n;

    s.metric = TensorFieldSpec::make(0, 2, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) s.metric.at(i, j) = pe("0", co);
    }
    const std::string se = epsilon < 0 ? "-" : "";
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            std::string cross = se + yname(i) + "*" + yname(j);
            if (i == j) {
                std::string diag = delta(i) < 0 ? cross + " - 1" : cross + " + 1";
                s.metric.at(xc0 + i, xc0 + j) = pe(frac(diag), co);
            } else {
                s.metric.at(xc0 + i, xc0 + j) = pe(frac(cross), co);
                s.metric.at(xc0 + j, xc0 + i) = s.metric.at(xc0 + i, xc0 + j);
            }
        }
        s.metric.at(yc0 + i, yc0 + i) = pe(delta(i) < 0 ? "-1/4" : "1/4", co);
        // g(x_i, z) = -eps y_i / 4
        std::string gz = (epsilon < 0 ? "" : "-") + yname(i);
        s.metric.at(xc0 + i, zc) = pe(frac(gz), co);
        s.metric.at(zc, xc0 + i) = s.metric.at(xc0 + i, zc);
    }
    s.metric.at(zc, zc) = pe(epsilon < 0 ? "-1/4" : "1/4", co);

    s.eta = TensorFieldSpec::make(0, 1, d);
    for (int i = 0; i < n; ++i) {
        s.eta->at(xc0 + i) = pe("-" + yname(i) + "/2", co);
        s.eta->at(yc0 + i) = pe("0", co);
    }
    s.eta->at(zc) = pe("1/2", co);

    s.xi = TensorFieldSpec::make(1, 0, d);
    for (int i = 0; i < d; ++i) s.xi->at(i) = pe(i == zc ? "2" : "0", co);

    // phi is forced by Phi = d eta and the compatibility relation:
    // phi(d_{x_j}) = -delta_j d_{y_j}, phi(d_{y_j}) = delta_j (d_{x_j} + y_j d_z).
    s.phi = TensorFieldSpec::make(1, 1, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) s.phi->at(i, j) = pe("0", co);
    }
    for (int j = 0; j < n; ++j) {
        const bool neg = delta(j) < 0;
        s.phi->at(yc0 + j, xc0 + j) = pe(neg ? "1" : "-1", co);
        s.phi->at(xc0 + j, yc0 + j) = pe(neg ? "-1" : "1", co);
        s.phi->at(zc, yc0 + j) = pe(neg ? "-" + yname(j) : yname(j), co);
    }

    e.expect_bound = true;
    e.expect_contact = true;
    e.expect_k_contact = true;
    e.expect_sasakian = true;
    e.expect_k_value = static_cast<double>(epsilon);
    int pos = 1 + 2 * (n - index_s), negc = 2 * index_s;
    if (epsilon > 0) {
        e.expect_signature = std::make_pair(pos, negc);
    } else {
        e.expect_signature = std::make_pair(pos - 1, negc + 1);
    }

    self_test(e);
    return e;
}

CatalogEntry entry_flat_contact_r3() {
    CatalogEntry e;
    e.name = "flat_contact_r3";
    e.description =
        "Flat associated metric on R^3: contact with h != 0, h^2 = id on Ker eta, K(xi, X) = 0";

    StructureSpec& s = e.spec;
    s.name = e.name;
    s.description = e.description;
    s.chart.n = 1;
    s.chart.coordinates = default_coordinates(1); // x1, y1, z
    s.chart.box.assign(3, {-1.0, 1.0});
    const auto& co = s.chart.coordinates;

    s.metric = TensorFieldSpec::make(0, 2, 3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) s.metric.at(i, j) = pe(i == j ? "1/4" : "0", co);
    }

    s.eta = TensorFieldSpec::make(0, 1, 3);
    s.eta->at(0) = pe("cos(z)/2", co);
    s.eta->at(1) = pe("sin(z)/2", co);
    s.eta->at(2) = pe("0", co);

    s.xi = TensorFieldSpec::make(1, 0, 3);
    s.xi->at(0) = pe("2*cos(z)", co);
    s.xi->at(1) = pe("2*sin(z)", co);
    s.xi->at(2) = pe("0", co);

    // phi = g^{-1} d eta = 4 d eta for this metric.
    s.phi = TensorFieldSpec::make(1, 1, 3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) s.phi->at(i, j) = pe("0", co);
    }
    s.phi->at(0, 2) = pe("sin(z)", co);
    s.phi->at(1, 2) = pe("-cos(z)", co);
    s.phi->at(2, 0) = pe("-sin(z)", co);
    s.phi->at(2, 1) = pe("cos(z)", co);

    e.expect_bound = true;
    e.expect_contact = true;
    e.expect_k_contact = false;
    e.expect_sasakian = false;
    e.expect_k_value = 0.0;
    e.expect_signature = std::make_pair(3, 0);

    self_test(e);
    return e;
}

CatalogEntry entry_flat_pseudo_euclidean(int p, int q) {
    if (p < 0 || q < 0 || (p + q) % 2 == 0 || p + q < 3) {
        throw Error("entry_flat_pseudo_euclidean: p+q must be odd and >= 3");
    }
    const int d = p + q;
    CatalogEntry e;
    char buf[96];
    std::snprintf(buf, sizeof(buf), q == 0 ? "flat_euclidean_r%d" : "flat_minkowski_r%d", d);
    e.name = buf;
    std::snprintf(buf, sizeof(buf), "Constant diagonal metric with signature (%d,%d); no structure bound",
                  p, q);
    e.description = buf;

    StructureSpec& s = e.spec;
    s.name = e.name;
    s.description = e.description;
    s.chart.n = (d - 1) / 2;
    s.chart.coordinates = default_coordinates(s.chart.n);
    s.chart.box.assign(static_cast<std::size_t>(d), {-1.0, 1.0});
    const auto& co = s.chart.coordinates;

    s.metric = TensorFieldSpec::make(0, 2, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            // negative directions first
            s.metric.at(i, j) = pe(i != j ? "0" : (i < q ? "-1" : "1"), co);
        }
    }
    e.expect_bound = false;
    e.expect_signature = std::make_pair(p, q);

    self_test(e);
    return e;
}

const std::vector<CatalogEntry>& catalog_entries() {
    static const std::vector<CatalogEntry> entries = [] {
        std::vector<CatalogEntry> v;
        v.push_back(entry_standard_sasakian(1, +1, 0));
        v.push_back(entry_standard_sasakian(1, -1, 0));
        v.push_back(entry_standard_sasakian(2, +1, 1));
        v.push_back(entry_standard_sasakian(2, -1, 0));
        v.push_back(entry_flat_contact_r3());
        v.push_back(entry_flat_pseudo_euclidean(3, 0));
        v.push_back(entry_flat_pseudo_euclidean(2, 1));
        return v;
    }();
    return entries;
}

const CatalogEntry* find_catalog_entry(const std::string& name) {
    for (const auto& e : catalog_entries()) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

} // namespace pscontact
