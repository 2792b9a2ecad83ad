// Acceptance gate: seven criteria, each printed as one PASS/FAIL line.
// Every tolerance is pinned here; the binary exits nonzero if any criterion
// fails. Runs the default 32-point sampling plus the box center per entry.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "pscontact/catalog.hpp"
#include "pscontact/cli.hpp"
#include "pscontact/contact_checks.hpp"
#include "pscontact/cr_checks.hpp"
#include "pscontact/engine.hpp"
#include "pscontact/geometry.hpp"
#include "pscontact/specfile.hpp"
#include "test_support.hpp"

using namespace pscontact;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    if (!pass) ++g_failures;
}

const std::vector<std::string> kContactNames = {
    "standard_sasakian_n1", "standard_sasakian_n1_lorentzian", "standard_sasakian_n2_mixed",
    "flat_contact_r3"};

std::vector<PointContext> default_contexts(const StructureSpec& spec) {
    std::vector<PointContext> out;
    for (const auto& p : make_sample_points(spec.chart, spec.sampling)) {
        out.emplace_back(spec, p);
    }
    return out;
}

// 1. Unconditional §2 identity suite on every contact catalog entry.
void criterion_1() {
    double worst = 0.0;
    int entries = 0;
    bool have_n1 = false, have_n2 = false;
    for (const auto& name : kContactNames) {
        const CatalogEntry* e = find_catalog_entry(name);
        if (!e) {
            report(1, false, "missing catalog entry " + name);
            return;
        }
        ++entries;
        have_n1 |= e->spec.chart.n == 1;
        have_n2 |= e->spec.chart.n == 2;
        for (const auto& ctx : default_contexts(e->spec)) {
            IdentityResiduals ir = identity_suite_residuals(ctx);
            worst = std::max({worst, ir.i23, ir.i24, ir.i25, ir.i26});
            worst = std::max(worst, trace_nabla_phi_residual(ctx));
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "identities (2.3)-(2.7) on %d contact entries (n=1 and n=2): max residual "
                  "%.3e < 1e-8",
                  entries, worst);
    report(1, entries >= 3 && have_n1 && have_n2 && worst < 1e-8, buf);
}

// 2. K(xi, X) = eps on the standard Sasakian entries, both signs.
void criterion_2() {
    double worst = 0.0;
    bool ok = true;
    for (int eps : {+1, -1}) {
        const CatalogEntry* e = find_catalog_entry(
            eps > 0 ? "standard_sasakian_n1" : "standard_sasakian_n1_lorentzian");
        if (!e) {
            ok = false;
            continue;
        }
        for (const auto& ctx : default_contexts(e->spec)) {
            const PhiBasis& basis = ctx.phi_basis();
            for (int a = 0; a < 2 * ctx.n(); ++a) {
                double K = xi_sectional(ctx, basis.vectors.col(a));
                worst = std::max(worst, std::abs(K - static_cast<double>(eps)));
            }
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "xi-sectional curvature equals eps on Sasakian entries (eps = +1, -1): max "
                  "|K - eps| %.3e < 1e-8",
                  worst);
    report(2, ok && worst < 1e-8, buf);
}

// 3. (5.1), (5.2), (5.4) on all contact entries; flat entry realizes
//    K = 0 with g(h^2 X, X) = g(X, X).
void criterion_3() {
    double worst_formula = 0.0;
    double worst_flat_k = 0.0;
    double worst_e510 = 0.0;
    for (const auto& name : kContactNames) {
        const CatalogEntry* e = find_catalog_entry(name);
        if (!e) {
            report(3, false, "missing catalog entry " + name);
            return;
        }
        const bool is_flat = name == "flat_contact_r3";
        for (const auto& ctx : default_contexts(e->spec)) {
            SectionalSample s = sectional_sample(ctx);
            worst_formula = std::max({worst_formula, s.f51, s.f52, s.f54});
            if (is_flat) {
                worst_flat_k = std::max(worst_flat_k, s.k_abs);
                worst_e510 = std::max(worst_e510, s.e510);
            }
        }
    }
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "(5.1)/(5.2)/(5.4) max %.3e < 1e-7 on contact entries; flat entry max |K| "
                  "%.3e < 1e-7 with the (5.10) pattern %.3e < 1e-7",
                  worst_formula, worst_flat_k, worst_e510);
    report(3, worst_formula < 1e-7 && worst_flat_k < 1e-7 && worst_e510 < 1e-7, buf);
}

// 4. Theorem 3.1 / §4 implication harness: no contradictions anywhere;
//    Q xi = 2 eps n xi and tau = 2 h phi on the Sasakian entries.
void criterion_4() {
    int contradictions = 0;
    for (const auto& e : catalog_entries()) {
        EngineOptions opt;
        CheckReport rep = run_checks(e.spec, opt, "acceptance");
        for (const auto& r : rep.records) {
            if (r.status == CheckStatus::Contradiction) ++contradictions;
        }
    }
    double worst_q = 0.0, worst_tau = 0.0;
    for (const auto& name : {"standard_sasakian_n1", "standard_sasakian_n1_lorentzian",
                             "standard_sasakian_n2_mixed"}) {
        const CatalogEntry* e = find_catalog_entry(name);
        for (const auto& ctx : default_contexts(e->spec)) {
            worst_q = std::max(worst_q, eq_4_4_residual(ctx));
            worst_tau = std::max(worst_tau, tau_vs_2hphi_residual(ctx));
        }
    }
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "implication harness: %d contradiction records; Q xi = 2 eps n xi %.3e < 1e-7; "
                  "tau = 2 h phi %.3e < 1e-9",
                  contradictions, worst_q, worst_tau);
    report(4, contradictions == 0 && worst_q < 1e-7 && worst_tau < 1e-9, buf);
}

// 5. §6 suite.
void criterion_5() {
    bool prop6_consistent = true;
    bool final_theorem = true;
    double worst_bott = 0.0, worst_webster = 0.0, worst_e63 = 0.0, worst_gamma = 0.0;
    for (const auto& e : catalog_entries()) {
        if (!e.spec.bound()) continue;
        EngineOptions opt;
        opt.suite = Suite::CR;
        CheckReport rep = run_checks(e.spec, opt, "acceptance");
        for (const auto& r : rep.records) {
            if (r.check_id == "cr.prop6") {
                prop6_consistent &= r.status == CheckStatus::Pass;
            }
            if (r.check_id == "cr.final_theorem") {
                final_theorem &= r.status == CheckStatus::Pass;
            }
            if (r.check_id == "cr.bott_identity") worst_bott = std::max(worst_bott, r.max_residual);
            if (r.check_id == "cr.webster_round_trip") {
                worst_webster = std::max(worst_webster, r.max_residual);
            }
            if (r.check_id == "cr.eq_6_3" && r.status != CheckStatus::Skipped) {
                worst_e63 = std::max(worst_e63, r.max_residual);
            }
            if (r.check_id == "cr.gamma_alpha" && r.status != CheckStatus::Skipped) {
                worst_gamma = std::max(worst_gamma, r.max_residual);
            }
        }
    }
    char buf[240];
    std::snprintf(buf, sizeof(buf),
                  "prop-6 four-way equivalence %s; 2h = bott J %.3e < 1e-8; final biconditional "
                  "%s; Webster round trip %.3e < 1e-9; (6.3) %.3e < 1e-8 with gamma=alpha %.3e "
                  "< 1e-8",
                  prop6_consistent ? "consistent" : "violated", worst_bott,
                  final_theorem ? "holds" : "violated", worst_webster, worst_e63, worst_gamma);
    report(5, prop6_consistent && final_theorem && worst_bott < 1e-8 && worst_webster < 1e-9 &&
                  worst_e63 < 1e-8 && worst_gamma < 1e-8,
           buf);
}

// 6. Numerics foundation: jets vs central differences over 100 seeded
//    composite functions; connection sanity on all entries; flat curvature.
void criterion_6() {
    std::mt19937_64 rng(0x5EED);
    double worst[4] = {0, 0, 0, 0};
    const std::vector<std::string> coords = {"x1", "x2", "x3"};
    for (int rep = 0; rep < 100; ++rep) {
        // random composites over a safe grammar
        auto pick = [&](std::initializer_list<const char*> opts) {
            auto it = opts.begin();
            std::advance(it, static_cast<long>(rng() % opts.size()));
            return std::string(*it);
        };
        std::string a = pick({"x1", "x2", "x3", "x1*x2", "x2*x3", "x1 + x3"});
        std::string b = pick({"sin(x1)", "cos(x2)", "sinh(0.4*x3)", "x2^2", "exp(0.3*x1)"});
        std::string c = pick({"2 + x3^2", "2 + cos(x1)^2", "3 + x2^2"});
        std::string d = pick({"1.5 + cos(x2)", "2 + sin(x3)^2", "2.5 + x1^2"});
        std::string text = "(" + a + ")*(" + b + ") + sqrt(" + c + ") + ln(" + d + ") / (" + c +
                           ")";
        ExprPtr expr = parse_expression(text, coords);

        std::vector<double> at = {psctest::uniform_in(rng, -0.7, 0.7),
                                  psctest::uniform_in(rng, -0.7, 0.7),
                                  psctest::uniform_in(rng, -0.7, 0.7)};
        Jet j = eval_jet(*expr, at, 3);
        psctest::ScalarFn f = [&](std::span<const double> p) {
            return eval_value(*expr, p);
        };
        const auto& lay = j.layout();
        for (int idx = 1; idx < j.table_size(); ++idx) {
            auto e = lay.exponents(idx);
            std::vector<int> alpha(e.begin(), e.end());
            int order = lay.degree(idx);
            double fd = psctest::central_difference(f, at, alpha,
                                                    psctest::fd_step_for_order(order));
            double rel = std::abs(j[idx] - fd) / std::max(1.0, std::abs(fd));
            worst[order] = std::max(worst[order], rel);
        }
    }
    bool fd_ok = worst[1] < 1e-6 && worst[2] < 1e-4 && worst[3] < 5e-3;

    double conn_worst = 0.0;
    double flat_R = 0.0;
    for (const auto& e : catalog_entries()) {
        for (const auto& ctx : default_contexts(e.spec)) {
            ConnectionResiduals cr = connection_residuals(ctx);
            conn_worst = std::max({conn_worst, cr.torsion, cr.nabla_g, cr.antisym, cr.pair_skew,
                                   cr.bianchi});
            if (!e.spec.bound()) flat_R = std::max(flat_R, cr.riemann_max);
        }
    }
    char buf[240];
    std::snprintf(buf, sizeof(buf),
                  "jet vs finite differences over 100 composites: order1 %.3e < 1e-6, order2 "
                  "%.3e < 1e-4, order3 %.3e < 5e-3; connection residuals %.3e < 1e-9; flat "
                  "curvature %.3e < 1e-12",
                  worst[1], worst[2], worst[3], conn_worst, flat_R);
    report(6, fd_ok && conn_worst < 1e-9 && flat_R < 1e-12, buf);
}

// 7. Determinism and round trips.
void criterion_7() {
    // identical JSON across runs with the same seed
    bool deterministic = true;
    {
        const CatalogEntry* e = find_catalog_entry("standard_sasakian_n2_mixed");
        EngineOptions opt;
        opt.seed = 0x5EED;
        std::string text = emit_spec_text(e->spec);
        CheckReport r1 = run_checks(e->spec, opt, spec_digest(text));
        CheckReport r2 = run_checks(e->spec, opt, spec_digest(text));
        deterministic = report_to_json(r1) == report_to_json(r2);
    }

    // parser print/parse structural fixpoint over a 500-expression corpus
    bool parser_ok = true;
    {
        std::mt19937_64 rng(0x5EED);
        const std::vector<std::string> coords = {"x", "y", "z"};
        auto gen = [&](auto&& self, int depth) -> ExprPtr {
            if (depth <= 0 || rng() % 4 == 0) {
                if (rng() % 2 == 0) {
                    return make_constant(static_cast<double>(rng() % 100) / 8.0);
                }
                auto e = std::make_shared<Expr>();
                e->kind = Expr::Kind::Coordinate;
                e->coord = static_cast<int>(rng() % 3);
                e->name = coords[e->coord];
                return e;
            }
            if (rng() % 3 == 0) {
                auto e = std::make_shared<Expr>();
                e->kind = Expr::Kind::Call;
                const CallFn fns[9] = {CallFn::Sin, CallFn::Cos, CallFn::Tan, CallFn::Exp,
                                       CallFn::Ln, CallFn::Sqrt, CallFn::Sinh, CallFn::Cosh,
                                       CallFn::Neg};
                e->fn = fns[rng() % 9];
                e->lhs = self(self, depth - 1);
                return e;
            }
            auto e = std::make_shared<Expr>();
            e->kind = Expr::Kind::Binary;
            if (rng() % 5 == 0) {
                e->op = '^';
                e->lhs = self(self, depth - 1);
                e->rhs = make_constant(static_cast<double>(static_cast<int>(rng() % 7) - 3));
                return e;
            }
            const char ops[4] = {'+', '-', '*', '/'};
            e->op = ops[rng() % 4];
            e->lhs = self(self, depth - 1);
            e->rhs = self(self, depth - 1);
            return e;
        };
        for (int i = 0; i < 500 && parser_ok; ++i) {
            ExprPtr g0 = gen(gen, 5);
            ExprPtr e1 = parse_expression(to_string(*g0), coords);
            ExprPtr e2 = parse_expression(to_string(*e1), coords);
            parser_ok = structurally_equal(*e1, *e2);
        }
    }

    // catalog emit -> check exits 0 for every entry, through the CLI surface
    bool emit_check_ok = true;
    for (const auto& e : catalog_entries()) {
        auto path = std::filesystem::temp_directory_path() / ("acc_" + e.name + ".toml");
        std::string out, err;
        int rc = cli::run({"catalog", "emit", e.name, path.string()}, out, err);
        if (rc != 0) {
            emit_check_ok = false;
            continue;
        }
        out.clear();
        err.clear();
        rc = cli::run({"check", path.string(), "--suite", "all"}, out, err);
        emit_check_ok &= rc == 0;
    }

    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "deterministic reports: %s; parser fixpoint over 500 expressions: %s; catalog "
                  "emit->check exit 0: %s",
                  deterministic ? "yes" : "no", parser_ok ? "yes" : "no",
                  emit_check_ok ? "yes" : "no");
    report(7, deterministic && parser_ok && emit_check_ok, buf);
}

} // namespace

int main() {
    auto t0 = std::chrono::steady_clock::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    auto dt = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    std::printf("%s: 7 criteria, %d failed, %lld ms\n", g_failures == 0 ? "ACCEPTED" : "REJECTED",
                g_failures, static_cast<long long>(dt));
    return g_failures == 0 ? 0 : 1;
}
