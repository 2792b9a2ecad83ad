#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "pscontact/cr_checks.hpp"
#include "pscontact/engine.hpp"
#include "pscontact/errors.hpp"
#include "pscontact/version.hpp"

namespace pscontact {

namespace {

// Predicate thresholds are decision boundaries, separate from residual
// tolerances: definite below 1e-6, definite failure above 1e-3,
// indeterminate in the hysteresis band.
constexpr double kPredicateTrue = 1e-6;
constexpr double kPredicateFalse = 1e-3;

enum class Tri { True, False, Indeterminate };

Tri tri_of(double residual) {
    if (residual < kPredicateTrue) return Tri::True;
    if (residual > kPredicateFalse) return Tri::False;
    return Tri::Indeterminate;
}

const char* tri_name(Tri t) {
    switch (t) {
        case Tri::True: return "true";
        case Tri::False: return "false";
        default: return "indeterminate";
    }
}

struct ToleranceTable {
    double base2 = 1e-8;
    double base3 = 1e-6;
    std::map<std::string, double> overrides;

    // order_class 2 or 3; scale tweaks the class base per check.
    double resolve(const std::string& id, int order_class, double scale) const {
        auto it = overrides.find(id);
        if (it != overrides.end()) return it->second;
        return (order_class == 3 ? base3 : base2) * scale;
    }
};

// Everything a single sample point contributes, evaluated independently.
struct PointSample {
    bool ok = false;
    std::string error;

    ConnectionResiduals conn;
    bool bound = false;

    AxiomResiduals ax;
    HPropertyResiduals hp;
    IdentityResiduals ids;
    double i27 = 0.0;
    bool frame_ok = false;
    std::string frame_error;

    double tau_2hphi = 0.0;
    double sasakian = 0.0;
    double r_xi = 0.0;
    double h_norm = 0.0;
    double h2_norm = 0.0;
    double h_codazzi = 0.0;
    double tau_codazzi = 0.0;
    double e33 = 0.0, e41 = 0.0, e43 = 0.0, e44 = 0.0, e45 = 0.0, e56 = 0.0, e57 = 0.0;
    SectionalSample sec;
    bool sec_ok = false;

    CRSample cr;
    bool cr_ok = false;
    std::string cr_error;

    double epsilon = 1.0;
};

PointSample evaluate_point(const StructureSpec& spec, const std::vector<double>& point) {
    PointSample s;
    try {
        PointContext ctx(spec, point);
        s.conn = connection_residuals(ctx);
        s.bound = ctx.bound();
        if (s.bound) {
            s.ax = axiom_residuals(ctx);
            s.hp = h_property_residuals(ctx);
            s.ids = identity_suite_residuals(ctx);
            s.tau_2hphi = tau_vs_2hphi_residual(ctx);
            s.sasakian = sasakian_residual(ctx);
            s.r_xi = r_xi_residual(ctx);
            s.h_norm = ctx.h().cwiseAbs().maxCoeff();
            s.h2_norm = (ctx.h() * ctx.h()).cwiseAbs().maxCoeff();
            s.h_codazzi = codazzi_defect_max(ctx, ctx.nabla_h());
            s.tau_codazzi = codazzi_defect_max(ctx, ctx.nabla_tau());
            s.e33 = eq_3_3_residual(ctx);
            s.e41 = eq_4_1_residual(ctx);
            s.e43 = eq_4_3_residual(ctx);
            s.e44 = eq_4_4_residual(ctx);
            s.e45 = eq_4_5_residual(ctx);
            s.e56 = eq_5_6_residual(ctx);
            s.e57 = eq_5_7_residual(ctx);
            s.epsilon = ctx.epsilon();
            try {
                s.i27 = trace_nabla_phi_residual(ctx);
                s.sec = sectional_sample(ctx);
                s.frame_ok = true;
                s.sec_ok = true;
            } catch (const GeometryError& ex) {
                s.frame_error = ex.what();
            }
            try {
                s.cr = cr_sample(ctx);
                s.cr_ok = true;
            } catch (const GeometryError& ex) {
                s.cr_error = ex.what();
            }
        }
        s.ok = true;
    } catch (const Error& ex) {
        s.error = ex.what();
    }
    return s;
}

struct Agg {
    int points = 0;
    double max = 0.0;

    void absorb(double v) {
        max = std::max(max, v);
        ++points;
    }
};

class Runner {
public:
    Runner(const StructureSpec& spec, const EngineOptions& opt, const std::string& digest)
        : spec_(spec), opt_(opt) {
        report_.engine_version = std::string(kEngineVersion);
        report_.spec_digest = digest;
        report_.spec_name = spec.name;
        report_.suite = suite_name(opt.suite);
        report_.profile = opt.profile;

        if (opt.profile == "strict") {
            tols_.base2 = 1e-10;
            tols_.base3 = 1e-8;
        } else if (opt.profile == "loose") {
            tols_.base2 = 1e-6;
            tols_.base3 = 1e-4;
        }
        if (spec.tolerances.base_order2) tols_.base2 = *spec.tolerances.base_order2;
        if (spec.tolerances.base_order3) tols_.base3 = *spec.tolerances.base_order3;
        tols_.overrides = spec.tolerances.overrides;
        for (const auto& [k, v] : opt.tol_overrides) tols_.overrides[k] = v;
    }

    CheckReport run() {
        SamplingSpec sampling = spec_.sampling;
        if (opt_.seed) sampling.seed = *opt_.seed;
        if (opt_.points) sampling.points = *opt_.points;
        report_.seed = sampling.seed;

        auto points = make_sample_points(spec_.chart, sampling);
        report_.points = static_cast<int>(points.size());

        samples_.resize(points.size());
        int threads = opt_.threads > 0 ? opt_.threads
                                       : static_cast<int>(std::thread::hardware_concurrency());
        threads = std::max(1, std::min<int>(threads, static_cast<int>(points.size())));
        if (threads == 1) {
            for (std::size_t i = 0; i < points.size(); ++i) {
                samples_[i] = evaluate_point(spec_, points[i]);
            }
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < threads; ++t) {
                pool.emplace_back([this, &points, t, threads] {
                    for (std::size_t i = static_cast<std::size_t>(t); i < points.size();
                         i += static_cast<std::size_t>(threads)) {
                        samples_[i] = evaluate_point(spec_, points[i]);
                    }
                });
            }
            for (auto& th : pool) th.join();
        }

        eval_errors_ = 0;
        for (const auto& s : samples_) {
            if (!s.ok && first_error_.empty()) first_error_ = s.error;
            if (!s.ok) ++eval_errors_;
        }
        bound_ = report_.points - eval_errors_ > 0 && samples_front_bound();

        if (wants(Suite::Axioms)) emit_axioms();
        if (wants(Suite::Identities)) emit_identities();
        if (wants(Suite::Codazzi)) emit_codazzi();
        if (wants(Suite::Sectional)) emit_sectional();
        if (wants(Suite::CR)) emit_cr();
        emit_classification();

        report_.notes = {
            "curvature convention: R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]",
            "ell defined as ell X = R(X, xi) xi",
            "d eta(X,Y) = (X eta(Y) - Y eta(X) - eta([X,Y]))/2",
            "integrability condition (6.1) read with second bracket [X, JY]",
            "gamma taken as the xi-component of the (6.3)-ordered defect",
            "epsilon recorded as the raw value g(xi, xi)",
        };
        report_.evaluation_errors = eval_errors_;
        if (eval_errors_ > 0) {
            report_.notes.push_back("evaluation errors at " + std::to_string(eval_errors_) +
                                    " sample point(s): " + first_error_);
        }
        return report_;
    }

private:
    bool samples_front_bound() const {
        for (const auto& s : samples_) {
            if (s.ok) return s.bound;
        }
        return false;
    }

    bool wants(Suite s) const { return opt_.suite == Suite::All || opt_.suite == s; }

    // Collect a per-point field over successful samples.
    template <typename F>
    Agg collect(F&& get) const {
        Agg a;
        for (const auto& s : samples_) {
            if (s.ok && s.bound) a.absorb(get(s));
        }
        return a;
    }

    template <typename F>
    Agg collect_conn(F&& get) const {
        Agg a;
        for (const auto& s : samples_) {
            if (s.ok) a.absorb(get(s));
        }
        return a;
    }

    template <typename F>
    Agg collect_frame(F&& get) const {
        Agg a;
        for (const auto& s : samples_) {
            if (s.ok && s.bound && s.frame_ok) a.absorb(get(s));
        }
        return a;
    }

    template <typename F>
    Agg collect_cr(F&& get) const {
        Agg a;
        for (const auto& s : samples_) {
            if (s.ok && s.bound && s.cr_ok) a.absorb(get(s));
        }
        return a;
    }

    CheckRecord& add(const std::string& id, const std::string& ref, int order_class,
                     double scale) {
        CheckRecord rec;
        rec.check_id = id;
        rec.paper_ref = ref;
        rec.tolerance = tols_.resolve(id, order_class, scale);
        report_.records.push_back(rec);
        return report_.records.back();
    }

    void fill(CheckRecord& rec, const Agg& agg, bool escalate_to_contradiction = false) {
        rec.max_residual = agg.max;
        rec.points_tested = agg.points;
        if (agg.points == 0) {
            rec.status = CheckStatus::Skipped;
            if (rec.note.empty()) rec.note = skip_reason();
            return;
        }
        if (agg.max <= rec.tolerance) {
            rec.status = CheckStatus::Pass;
        } else {
            rec.status = escalate_to_contradiction ? CheckStatus::Contradiction
                                                   : CheckStatus::Fail;
        }
    }

    std::string skip_reason() const {
        if (eval_errors_ == report_.points && eval_errors_ > 0) {
            return "all sample evaluations failed: " + first_error_;
        }
        if (!bound_) return "no structure bound (metric-only spec)";
        return "not evaluated";
    }

    // Contact predicate: needed to decide whether identity failures count as
    // contradictions (the identities are theorems on contact structures).
    Tri contact_predicate() const {
        Agg ax_worst = collect([](const PointSample& s) {
            return std::max({s.ax.phi_square, s.ax.eta_xi, s.ax.phi_xi, s.ax.eta_phi, s.ax.e3,
                             s.ax.e3a, s.ax.xi_unit});
        });
        Agg deta = collect([](const PointSample& s) { return s.ax.d_eta_vs_phi; });
        if (deta.points == 0) return Tri::False;
        Tri ax = tri_of(ax_worst.max);
        Tri ct = tri_of(deta.max);
        if (ax == Tri::True && ct == Tri::True) return Tri::True;
        if (ax == Tri::False || ct == Tri::False) return Tri::False;
        return Tri::Indeterminate;
    }

    void emit_axioms() {
        fill(add("axiom.phi_square", "§2 (e1)", 2, 0.01),
             collect([](const PointSample& s) { return s.ax.phi_square; }));
        fill(add("axiom.eta_xi", "§2 (e1)", 2, 0.01),
             collect([](const PointSample& s) { return s.ax.eta_xi; }));
        fill(add("axiom.phi_xi", "§2 (e1)", 2, 0.01),
             collect([](const PointSample& s) { return s.ax.phi_xi; }));
        fill(add("axiom.eta_phi", "§2 (e1)", 2, 0.01),
             collect([](const PointSample& s) { return s.ax.eta_phi; }));
        {
            const int n = spec_.chart.n;
            CheckRecord& rec = add("axiom.phi_rank", "§2", 2, 1.0);
            rec.tolerance = 0.5;
            fill(rec, collect([n](const PointSample& s) {
                     return std::abs(static_cast<double>(s.ax.phi_rank - 2 * n));
                 }));
            rec.note = rec.points_tested ? "rank must equal 2n" : rec.note;
        }
        fill(add("compat.e3", "§2 (e3)", 2, 0.01),
             collect([](const PointSample& s) { return s.ax.e3; }));
        fill(add("compat.e3a", "§2 (e3a)", 2, 0.01),
             collect([](const PointSample& s) { return s.ax.e3a; }));
        fill(add("compat.xi_unit", "§2", 2, 0.01),
             collect([](const PointSample& s) { return s.ax.xi_unit; }));
        {
            // sign and value of g(xi, xi) must not drift across samples
            CheckRecord& rec = add("compat.epsilon_constant", "§2", 2, 0.01);
            Agg agg;
            double ref = 0.0;
            bool have = false;
            for (const auto& s : samples_) {
                if (s.ok && s.bound) {
                    if (!have) {
                        ref = s.epsilon;
                        have = true;
                    }
                    agg.absorb(std::abs(s.epsilon - ref));
                }
            }
            fill(rec, agg);
            if (rec.points_tested > 0) rec.note = "g(xi,xi) constant across samples";
        }
        fill(add("contact.d_eta", "§2", 2, 0.1),
             collect([](const PointSample& s) { return s.ax.d_eta_vs_phi; }));
        {
            // direction check: the scaled determinant must stay away from 0
            CheckRecord& rec = add("contact.volume_pairing", "§2", 2, 1.0);
            rec.tolerance = 1e-8;
            Agg agg;
            for (const auto& s : samples_) {
                if (s.ok && s.bound) {
                    agg.max = agg.points == 0 ? s.ax.volume_pairing
                                              : std::min(agg.max, s.ax.volume_pairing);
                    ++agg.points;
                }
            }
            rec.max_residual = agg.max;
            rec.points_tested = agg.points;
            rec.note = "pass when the scaled det exceeds the tolerance";
            rec.status = agg.points == 0
                             ? CheckStatus::Skipped
                             : (agg.max > rec.tolerance ? CheckStatus::Pass : CheckStatus::Fail);
            if (agg.points == 0) rec.note = skip_reason();
        }
        {
            // classification chain: Sasakian implies K-contact, and on
            // K-contact structures the curvature condition is equivalent to
            // the Sasakian characterization.
            CheckRecord& rec = add("classify.chain", "§2 with Lemma 2.1", 2, 1.0);
            Agg hnorm = collect([](const PointSample& s) { return s.h_norm; });
            Agg sas = collect([](const PointSample& s) { return s.sasakian; });
            Agg rxi = collect([](const PointSample& s) { return s.r_xi; });
            rec.points_tested = hnorm.points;
            const Tri contact = contact_predicate();
            if (hnorm.points == 0) {
                rec.status = CheckStatus::Skipped;
                rec.note = skip_reason();
            } else if (contact != Tri::True) {
                rec.status = CheckStatus::Skipped;
                rec.note = "chain is contentful on contact structures only";
            } else {
                const Tri p_h = tri_of(hnorm.max);
                const Tri p_sas = tri_of(sas.max);
                const Tri p_rxi = tri_of(rxi.max);
                if (p_h == Tri::Indeterminate || p_sas == Tri::Indeterminate ||
                    p_rxi == Tri::Indeterminate) {
                    rec.status = CheckStatus::Indeterminate;
                } else if (p_sas == Tri::True && p_h == Tri::False) {
                    rec.status = CheckStatus::Contradiction;
                    rec.note = "Sasakian without K-contact";
                } else if (p_h == Tri::True && p_rxi != p_sas) {
                    rec.status = CheckStatus::Contradiction;
                    rec.note = "K-contact: curvature condition and Sasakian test disagree";
                } else {
                    rec.status = CheckStatus::Pass;
                    rec.note = "implication chain consistent";
                }
            }
        }
    }

    void emit_identities() {
        fill(add("conn.torsion", "plumbing", 2, 1.0),
             collect_conn([](const PointSample& s) { return s.conn.torsion; }));
        fill(add("conn.nabla_g", "plumbing", 2, 0.01),
             collect_conn([](const PointSample& s) { return s.conn.nabla_g; }));
        fill(add("conn.curvature_antisymmetry", "§2", 2, 0.1),
             collect_conn([](const PointSample& s) { return s.conn.antisym; }));
        fill(add("conn.pair_symmetry", "plumbing", 2, 0.1),
             collect_conn([](const PointSample& s) { return s.conn.pair_skew; }));
        fill(add("conn.bianchi_first", "§2", 2, 0.1),
             collect_conn([](const PointSample& s) { return s.conn.bianchi; }));

        const Tri contact = contact_predicate();
        const bool escalate = contact == Tri::True;
        auto gated = [&](CheckRecord& rec, const Agg& agg) {
            if (contact == Tri::False && agg.points > 0) {
                rec.max_residual = agg.max;
                rec.points_tested = agg.points;
                rec.status = CheckStatus::Skipped;
                rec.note = "structure is not contact; hypothesis void";
                return;
            }
            fill(rec, agg, escalate);
        };

        gated(add("h.self_adjoint", "§2", 2, 0.1),
              collect([](const PointSample& s) { return s.hp.self_adjoint; }));
        gated(add("h.xi_kernel", "§2", 2, 0.1),
              collect([](const PointSample& s) { return s.hp.xi_kernel; }));
        gated(add("h.anticommute", "§2", 2, 0.1),
              collect([](const PointSample& s) { return s.hp.anticommute; }));
        gated(add("h.trace", "§2", 2, 0.1),
              collect([](const PointSample& s) { return s.hp.trace_h; }));
        gated(add("h.trace_phi_h", "§2", 2, 0.1),
              collect([](const PointSample& s) { return s.hp.trace_phi_h; }));
        gated(add("h.eta_kernel", "plumbing", 2, 0.1),
              collect([](const PointSample& s) { return s.hp.eta_kernel; }));
        gated(add("ell.xi_kernel", "§1", 2, 0.1),
              collect([](const PointSample& s) { return s.hp.ell_xi; }));

        gated(add("identity.2.3", "(2.3)", 2, 1.0),
              collect([](const PointSample& s) { return s.ids.i23; }));
        gated(add("identity.2.4", "(2.4)", 2, 1.0),
              collect([](const PointSample& s) { return s.ids.i24; }));
        gated(add("identity.2.5", "(2.5)", 2, 1.0),
              collect([](const PointSample& s) { return s.ids.i25; }));
        gated(add("identity.2.6", "(2.6)", 2, 1.0),
              collect([](const PointSample& s) { return s.ids.i26; }));
        {
            CheckRecord& rec = add("identity.2.7", "(2.7)", 2, 1.0);
            Agg agg = collect_frame([](const PointSample& s) { return s.i27; });
            if (agg.points == 0 && bound_) rec.note = frame_failure_note();
            gated(rec, agg);
        }
        gated(add("tau.matches_2hphi", "(2.4) with §4", 2, 0.1),
              collect([](const PointSample& s) { return s.tau_2hphi; }));
    }

    std::string frame_failure_note() const {
        for (const auto& s : samples_) {
            if (s.ok && s.bound && !s.frame_ok) return "frame construction failed: " + s.frame_error;
        }
        return "";
    }

    void emit_codazzi() {
        const Tri contact = contact_predicate();
        Agg h_def = collect([](const PointSample& s) { return s.h_codazzi; });
        Agg tau_def = collect([](const PointSample& s) { return s.tau_codazzi; });
        Agg h2 = collect([](const PointSample& s) { return s.h2_norm; });
        Agg sas = collect([](const PointSample& s) { return s.sasakian; });
        Agg rxi = collect([](const PointSample& s) { return s.r_xi; });
        Agg e41 = collect([](const PointSample& s) { return s.e41; });

        const Tri p1 = h_def.points ? tri_of(h_def.max) : Tri::Indeterminate;
        const Tri p2 = h2.points ? tri_of(h2.max) : Tri::Indeterminate;
        const Tri p3 = rxi.points ? tri_of(rxi.max) : Tri::Indeterminate;
        const Tri p4 = sas.points ? tri_of(sas.max) : Tri::Indeterminate;
        const Tri ptau = tau_def.points ? tri_of(tau_def.max) : Tri::Indeterminate;
        const Tri p41 = e41.points ? tri_of(e41.max) : Tri::Indeterminate;

        {
            CheckRecord& rec = add("codazzi.h_defect", "§3", 2, 1.0);
            rec.max_residual = h_def.max;
            rec.points_tested = h_def.points;
            rec.status = h_def.points ? CheckStatus::Pass : CheckStatus::Skipped;
            rec.note = h_def.points ? std::string("predicate h-Codazzi: ") + tri_name(p1)
                                    : skip_reason();
        }
        {
            CheckRecord& rec = add("codazzi.tau_defect", "§4", 2, 1.0);
            rec.max_residual = tau_def.max;
            rec.points_tested = tau_def.points;
            rec.status = tau_def.points ? CheckStatus::Pass : CheckStatus::Skipped;
            rec.note = tau_def.points ? std::string("predicate tau-Codazzi: ") + tri_name(ptau)
                                      : skip_reason();
        }

        auto implication = [&](const std::string& id, const std::string& ref, Tri premise,
                               Tri conclusion, const char* desc) {
            CheckRecord& rec = add(id, ref, 2, 1.0);
            rec.points_tested = h_def.points;
            rec.note = desc;
            if (contact != Tri::True || h_def.points == 0) {
                rec.status = CheckStatus::Skipped;
                rec.note = h_def.points == 0 ? skip_reason() : "structure is not contact";
                return;
            }
            if (premise == Tri::Indeterminate ||
                (premise == Tri::True && conclusion == Tri::Indeterminate)) {
                rec.status = CheckStatus::Indeterminate;
                return;
            }
            if (premise == Tri::True && conclusion == Tri::False) {
                rec.status = CheckStatus::Contradiction;
                return;
            }
            rec.status = CheckStatus::Pass;
        };

        implication("thm31.a", "Thm 3.1(a)", p1, p2, "h Codazzi implies h^2 = 0");
        {
            CheckRecord& rec = add("thm31.eq_3_3", "(3.3)", 2, 1.0);
            Agg agg = collect([](const PointSample& s) { return s.e33; });
            if (contact == Tri::True && p1 == Tri::True) {
                fill(rec, agg, true);
            } else {
                rec.max_residual = agg.max;
                rec.points_tested = agg.points;
                rec.status = CheckStatus::Skipped;
                rec.note = "evaluated only when h is a Codazzi tensor on a contact structure";
            }
        }

        auto equivalence = [&](const std::string& id, const std::string& ref, Tri a, Tri b,
                               const char* desc) {
            CheckRecord& rec = add(id, ref, 2, 1.0);
            rec.points_tested = h_def.points;
            rec.note = desc;
            if (contact != Tri::True || h_def.points == 0) {
                rec.status = CheckStatus::Skipped;
                rec.note = h_def.points == 0 ? skip_reason() : "structure is not contact";
                return;
            }
            if (a == Tri::Indeterminate || b == Tri::Indeterminate) {
                rec.status = CheckStatus::Indeterminate;
                return;
            }
            rec.status = (a == b) ? CheckStatus::Pass : CheckStatus::Contradiction;
        };

        // (b): Sasakian iff (02.4) holds and h is Codazzi
        Tri conj = Tri::Indeterminate;
        if (p3 == Tri::False || p1 == Tri::False) conj = Tri::False;
        if (p3 == Tri::True && p1 == Tri::True) conj = Tri::True;
        equivalence("thm31.b", "Thm 3.1(b)", conj, p4,
                    "Sasakian iff curvature condition and h Codazzi");

        equivalence("thm4.lemma", "§4 Lemma", ptau, p41,
                    "tau Codazzi iff R(xi, X)Y = eps (nabla_X phi) Y");
        implication("thm4.h2_zero", "§4 Thm (i)", ptau, p2, "tau Codazzi implies h^2 = 0");

        auto conditional_residual = [&](const std::string& id, const std::string& ref,
                                        double scale, Tri premise, const Agg& agg,
                                        const char* when) {
            CheckRecord& rec = add(id, ref, 2, scale);
            rec.max_residual = agg.max;
            rec.points_tested = agg.points;
            if (contact != Tri::True || premise != Tri::True || agg.points == 0) {
                rec.status = CheckStatus::Skipped;
                rec.note = agg.points == 0 ? skip_reason() : when;
                return;
            }
            fill(rec, agg, true);
        };

        conditional_residual("thm4.eq_4_3", "(4.3)", 1.0, ptau,
                             collect([](const PointSample& s) { return s.e43; }),
                             "evaluated only when tau is a Codazzi tensor");
        conditional_residual("thm4.eq_4_4", "(4.4)", 10.0, ptau,
                             collect([](const PointSample& s) { return s.e44; }),
                             "evaluated only when tau is a Codazzi tensor");
        conditional_residual("thm4.eq_4_5", "(4.5)", 1.0, ptau,
                             collect([](const PointSample& s) { return s.e45; }),
                             "evaluated only when tau is a Codazzi tensor");

        Tri conj4 = Tri::Indeterminate;
        if (p3 == Tri::False || ptau == Tri::False) conj4 = Tri::False;
        if (p3 == Tri::True && ptau == Tri::True) conj4 = Tri::True;
        equivalence("thm4.b", "§4 Thm (ii)", conj4, p4,
                    "Sasakian iff curvature condition and tau Codazzi");
    }

    void emit_sectional() {
        const Tri contact = contact_predicate();
        const bool escalate = contact == Tri::True;
        auto skipped_null = [this]() {
            int total = 0;
            for (const auto& s : samples_) {
                if (s.ok && s.bound && s.sec_ok) total += s.sec.skipped_null;
            }
            return total;
        }();

        auto gated = [&](CheckRecord& rec, const Agg& agg) {
            rec.probes_skipped_null = skipped_null;
            if (contact == Tri::False && agg.points > 0) {
                rec.max_residual = agg.max;
                rec.points_tested = agg.points;
                rec.status = CheckStatus::Skipped;
                rec.note = "structure is not contact; hypothesis void";
                return;
            }
            if (agg.points == 0 && bound_ && !frame_failure_note().empty()) {
                rec.note = frame_failure_note();
            }
            fill(rec, agg, escalate);
        };

        gated(add("sec.formula_5_1", "(5.1)", 2, 10.0),
              collect_frame([](const PointSample& s) { return s.sec.f51; }));
        gated(add("sec.formula_5_2", "(5.2)", 2, 10.0),
              collect_frame([](const PointSample& s) { return s.sec.f52; }));
        gated(add("sec.formula_5_4", "(5.4)", 2, 10.0),
              collect_frame([](const PointSample& s) { return s.sec.f54; }));

        Agg nxh = collect_frame([](const PointSample& s) { return s.sec.nabla_xi_h_norm; });
        Agg nell = collect_frame([](const PointSample& s) { return s.sec.nabla_ell_norm; });
        Agg h2 = collect_frame([](const PointSample& s) { return s.sec.h_sq_norm; });
        Agg keps = collect_frame([](const PointSample& s) { return s.sec.k_minus_eps; });
        Agg kabs = collect_frame([](const PointSample& s) { return s.sec.k_abs; });
        Agg hnorm = collect([](const PointSample& s) { return s.h_norm; });

        const Tri p_nxh = nxh.points ? tri_of(nxh.max) : Tri::Indeterminate;
        const Tri p_nell = nell.points ? tri_of(nell.max) : Tri::Indeterminate;
        const Tri p_h2 = h2.points ? tri_of(h2.max) : Tri::Indeterminate;
        const Tri p_keps = keps.points ? tri_of(keps.max) : Tri::Indeterminate;
        const Tri p_h = hnorm.points ? tri_of(hnorm.max) : Tri::Indeterminate;

        auto conditional = [&](const std::string& id, const std::string& ref, int order_class,
                               double scale, bool premise_holds, const Agg& agg,
                               const char* when, bool contradiction = true) {
            CheckRecord& rec = add(id, ref, order_class, scale);
            rec.max_residual = agg.max;
            rec.points_tested = agg.points;
            rec.probes_skipped_null = skipped_null;
            if (contact != Tri::True || !premise_holds || agg.points == 0) {
                rec.status = CheckStatus::Skipped;
                rec.note = agg.points == 0 ? skip_reason() : when;
                return;
            }
            fill(rec, agg, contradiction);
        };

        conditional("sec.k_value_k_contact", "§5 Thm 1", 2, 1.0, p_h == Tri::True, keps,
                    "evaluated only on K-contact structures");
        conditional("sec.k_phi_symmetry", "(5.5)", 2, 1.0, p_nxh == Tri::True,
                    collect_frame([](const PointSample& s) { return s.sec.k_phi_gap; }),
                    "evaluated only when nabla_xi h = 0");

        {
            CheckRecord& rec = add("sec.h2_iff_k_eps", "§5 Thm 2", 2, 1.0);
            rec.points_tested = keps.points;
            rec.probes_skipped_null = skipped_null;
            rec.note = "h^2 = 0 iff all xi-sectional curvatures equal eps";
            if (contact != Tri::True || p_nxh != Tri::True || keps.points == 0) {
                rec.status = CheckStatus::Skipped;
                rec.note = keps.points == 0 ? skip_reason() : "requires nabla_xi h = 0";
            } else if (p_h2 == Tri::Indeterminate || p_keps == Tri::Indeterminate) {
                rec.status = CheckStatus::Indeterminate;
            } else {
                rec.status = (p_h2 == p_keps) ? CheckStatus::Pass : CheckStatus::Contradiction;
            }
        }

        const bool parallel_branch = p_nxh == Tri::True && p_nell == Tri::True;
        conditional("sec.parallel_ell_k_zero", "§5 Thm 3", 3, 1.0, parallel_branch, kabs,
                    "evaluated only when nabla_xi h = 0 and nabla ell = 0");
        conditional("sec.eq_5_6", "(5.6)", 3, 1.0, parallel_branch,
                    collect([](const PointSample& s) { return s.e56; }),
                    "evaluated only when nabla_xi h = 0 and nabla ell = 0");
        conditional("sec.eq_5_7", "(5.7)", 3, 1.0, parallel_branch,
                    collect([](const PointSample& s) { return s.e57; }),
                    "evaluated only when nabla_xi h = 0 and nabla ell = 0");
        conditional("sec.eq_5_8", "(5.8)", 3, 1.0, parallel_branch,
                    collect_frame([](const PointSample& s) { return s.sec.e58; }),
                    "evaluated only when nabla_xi h = 0 and nabla ell = 0");
        conditional("sec.eq_5_9", "(5.9)", 3, 1.0, parallel_branch,
                    collect_frame([](const PointSample& s) { return s.sec.e59; }),
                    "evaluated only when nabla_xi h = 0 and nabla ell = 0");
        conditional("sec.eq_5_10", "(5.10)", 3, 1.0, parallel_branch,
                    collect_frame([](const PointSample& s) { return s.sec.e510; }),
                    "evaluated only when nabla_xi h = 0 and nabla ell = 0");
    }

    void emit_cr() {
        const Tri contact = contact_predicate();
        const bool escalate = contact == Tri::True;

        fill(add("cr.j_squared", "§6", 2, 0.01),
             collect_cr([](const PointSample& s) { return s.cr.j_squared; }));
        fill(add("cr.theta_kernel", "§6", 2, 0.01),
             collect_cr([](const PointSample& s) { return s.cr.theta_kernel; }));
        fill(add("cr.levi_routes", "§6", 2, 0.1),
             collect_cr([](const PointSample& s) { return s.cr.levi.route_agreement; }));

        {
            CheckRecord& rec = add("cr.levi_nondegenerate", "§6", 2, 1.0);
            rec.tolerance = 1e-8;
            Agg agg;
            for (const auto& s : samples_) {
                if (s.ok && s.bound && s.cr_ok) {
                    agg.max = agg.points == 0 ? s.cr.levi.det_scaled
                                              : std::min(agg.max, s.cr.levi.det_scaled);
                    ++agg.points;
                }
            }
            rec.max_residual = agg.max;
            rec.points_tested = agg.points;
            rec.note = "pass when the scaled det exceeds the tolerance";
            rec.status = agg.points == 0
                             ? CheckStatus::Skipped
                             : (agg.max > rec.tolerance ? CheckStatus::Pass : CheckStatus::Fail);
            if (agg.points == 0) rec.note = skip_reason();
        }

        auto gated = [&](CheckRecord& rec, const Agg& agg, const char* void_note) {
            if (contact == Tri::False && agg.points > 0) {
                rec.max_residual = agg.max;
                rec.points_tested = agg.points;
                rec.status = CheckStatus::Skipped;
                rec.note = void_note;
                return;
            }
            fill(rec, agg, escalate);
        };

        gated(add("cr.webster_relation", "§6", 2, 0.1),
              collect_cr([](const PointSample& s) { return s.cr.levi_vs_g; }),
              "L = g on H holds on contact structures only");

        // the four-way equivalence: per-sample joint agreement
        {
            CheckRecord& rec = add("cr.prop6", "§6 Prop", 2, 1.0);
            int pts = 0;
            bool contradiction = false;
            bool indeterminate = false;
            Tri global[4] = {Tri::Indeterminate, Tri::Indeterminate, Tri::Indeterminate,
                             Tri::Indeterminate};
            double worst[4] = {0, 0, 0, 0};
            for (const auto& s : samples_) {
                if (!(s.ok && s.bound && s.cr_ok)) continue;
                ++pts;
                double vals[4] = {s.cr.prop6_hermitian, s.cr.prop6_symmetric,
                                  s.cr.prop6_bracket_eta, s.cr.prop6_alpha_sym};
                Tri t[4];
                for (int q = 0; q < 4; ++q) {
                    t[q] = tri_of(vals[q]);
                    worst[q] = std::max(worst[q], vals[q]);
                }
                bool any_ind = false, any_true = false, any_false = false;
                for (Tri x : t) {
                    any_ind |= x == Tri::Indeterminate;
                    any_true |= x == Tri::True;
                    any_false |= x == Tri::False;
                }
                if (any_ind) {
                    indeterminate = true;
                } else if (any_true && any_false) {
                    contradiction = true;
                }
            }
            for (int q = 0; q < 4; ++q) global[q] = tri_of(worst[q]);
            rec.points_tested = pts;
            rec.max_residual = std::max({worst[0], worst[1], worst[2], worst[3]});
            char note[160];
            std::snprintf(note, sizeof(note),
                          "(i) hermitian: %s, (ii) symmetric: %s, (iii) brackets: %s, (iv) alpha:"
                          " %s",
                          tri_name(global[0]), tri_name(global[1]), tri_name(global[2]),
                          tri_name(global[3]));
            rec.note = note;
            if (pts == 0) {
                rec.status = CheckStatus::Skipped;
                rec.note = skip_reason();
            } else if (contradiction) {
                rec.status = CheckStatus::Contradiction;
            } else if (indeterminate) {
                rec.status = CheckStatus::Indeterminate;
            } else {
                rec.status = CheckStatus::Pass;
            }
        }

        Agg d1 = collect_cr([](const PointSample& s) { return s.cr.d1; });
        Agg d2 = collect_cr([](const PointSample& s) { return s.cr.d2; });
        Agg bott = collect_cr([](const PointSample& s) { return s.cr.bott_j_norm; });
        Agg geod = collect_cr([](const PointSample& s) { return s.cr.nabla_xi_xi; });
        Agg hnorm = collect([](const PointSample& s) { return s.h_norm; });
        Agg sas = collect([](const PointSample& s) { return s.sasakian; });

        const Tri p_int = (d1.points && d2.points)
                              ? (tri_of(d1.max) == Tri::True && tri_of(d2.max) == Tri::True
                                     ? Tri::True
                                     : ((tri_of(d1.max) == Tri::False ||
                                         tri_of(d2.max) == Tri::False)
                                            ? Tri::False
                                            : Tri::Indeterminate))
                              : Tri::Indeterminate;
        const Tri p_bott = bott.points ? tri_of(bott.max) : Tri::Indeterminate;
        const Tri p_h = hnorm.points ? tri_of(hnorm.max) : Tri::Indeterminate;
        const Tri p_sas = sas.points ? tri_of(sas.max) : Tri::Indeterminate;
        const Tri p_geod = geod.points ? tri_of(geod.max) : Tri::Indeterminate;

        {
            CheckRecord& rec = add("cr.integrability_d1", "(6.1)", 2, 1.0);
            rec.max_residual = d1.max;
            rec.points_tested = d1.points;
            rec.status = d1.points ? CheckStatus::Pass : CheckStatus::Skipped;
            rec.note = d1.points ? std::string("eta-component defect; predicate: ") +
                                       tri_name(tri_of(d1.max))
                                 : skip_reason();
        }
        {
            CheckRecord& rec = add("cr.integrability_d2", "(6.2)", 2, 1.0);
            rec.max_residual = d2.max;
            rec.points_tested = d2.points;
            rec.status = d2.points ? CheckStatus::Pass : CheckStatus::Skipped;
            rec.note = d2.points ? std::string("J-compatibility defect; predicate: ") +
                                       tri_name(tri_of(d2.max))
                                 : skip_reason();
        }

        auto conditional = [&](const std::string& id, const std::string& ref, double scale,
                               bool premise, const Agg& agg, const char* when) {
            CheckRecord& rec = add(id, ref, 2, scale);
            rec.max_residual = agg.max;
            rec.points_tested = agg.points;
            if (!premise || agg.points == 0) {
                rec.status = CheckStatus::Skipped;
                rec.note = agg.points == 0 ? skip_reason() : when;
                return;
            }
            fill(rec, agg, true);
        };

        conditional("cr.eq_6_3", "(6.3)", 1.0, p_int == Tri::True,
                    collect_cr([](const PointSample& s) { return s.cr.e63; }),
                    "reported without assertion when the structure is not integrable");
        conditional("cr.a_tensor", "(6.5)", 1.0, p_int == Tri::True,
                    collect_cr([](const PointSample& s) { return s.cr.a_h; }),
                    "evaluated only on integrable structures");
        conditional("cr.gamma_alpha", "(6.7)", 1.0, p_int == Tri::True,
                    collect_cr([](const PointSample& s) { return s.cr.gamma_vs_alpha; }),
                    "evaluated only on integrable structures");

        {
            CheckRecord& rec = add("cr.bott_identity", "§6 Thm", 2, 1.0);
            Agg agg = collect_cr([](const PointSample& s) { return s.cr.two_h_vs_bott; });
            rec.max_residual = agg.max;
            rec.points_tested = agg.points;
            if (agg.points == 0) {
                rec.status = CheckStatus::Skipped;
                rec.note = skip_reason();
            } else if (p_geod != Tri::True) {
                rec.status = CheckStatus::Skipped;
                rec.note = "geodesic hypothesis failed: ||nabla_xi xi|| = " +
                           std::to_string(geod.max);
            } else {
                fill(rec, agg, escalate);
                rec.note = "2 h X = (bott_xi J) X on H";
            }
        }
        {
            CheckRecord& rec = add("cr.bott_equivalence", "§6 Cor", 2, 1.0);
            rec.points_tested = bott.points;
            rec.note = "h = 0 iff bott_xi J = 0";
            if (bott.points == 0) {
                rec.status = CheckStatus::Skipped;
                rec.note = skip_reason();
            } else if (p_geod != Tri::True) {
                rec.status = CheckStatus::Skipped;
                rec.note = "geodesic hypothesis failed";
            } else if (p_h == Tri::Indeterminate || p_bott == Tri::Indeterminate) {
                rec.status = CheckStatus::Indeterminate;
            } else {
                rec.status = (p_h == p_bott) ? CheckStatus::Pass : CheckStatus::Contradiction;
            }
        }
        {
            CheckRecord& rec = add("cr.final_theorem", "§6 final Thm", 2, 1.0);
            rec.points_tested = sas.points;
            char note[120];
            std::snprintf(note, sizeof(note), "P_sas: %s, P_int: %s, P_bott: %s",
                          tri_name(p_sas), tri_name(p_int),
                          tri_name(p_bott == Tri::True ? Tri::True
                                                       : (p_bott == Tri::False ? Tri::False
                                                                               : Tri::Indeterminate)));
            rec.note = note;
            if (contact != Tri::True || sas.points == 0) {
                rec.status = CheckStatus::Skipped;
                if (sas.points == 0) rec.note = skip_reason();
                else rec.note = "stated for contact structures only";
            } else if (p_sas == Tri::Indeterminate || p_int == Tri::Indeterminate ||
                       p_bott == Tri::Indeterminate) {
                rec.status = CheckStatus::Indeterminate;
            } else {
                const bool lhs = p_sas == Tri::True;
                const bool rhs = p_int == Tri::True && p_bott == Tri::True;
                rec.status = (lhs == rhs) ? CheckStatus::Pass : CheckStatus::Contradiction;
            }
        }

        conditional("cr.eq_6_9", "(6.9)", 1.0,
                    contact == Tri::True && p_int == Tri::True,
                    collect_cr([](const PointSample& s) { return s.cr.e69; }),
                    "evaluated on integrable contact structures");

        gated(add("cr.webster_round_trip", "§6", 2, 0.1),
              collect_cr([](const PointSample& s) { return s.cr.webster_round_trip; }),
              "the Webster reconstruction reproduces g on contact structures only");
    }

    void emit_classification() {
        ClassificationResult& c = report_.classification;
        c.bound = bound_;
        if (!bound_) return;

        Agg ax = collect([](const PointSample& s) {
            return std::max({s.ax.phi_square, s.ax.eta_xi, s.ax.phi_xi, s.ax.eta_phi});
        });
        Agg rank = collect([this](const PointSample& s) {
            return std::abs(static_cast<double>(s.ax.phi_rank - 2 * spec_.chart.n));
        });
        Agg compat = collect([](const PointSample& s) {
            return std::max({s.ax.e3, s.ax.e3a, s.ax.xi_unit});
        });
        Agg deta = collect([](const PointSample& s) { return s.ax.d_eta_vs_phi; });
        Agg hnorm = collect([](const PointSample& s) { return s.h_norm; });
        Agg sas = collect([](const PointSample& s) { return s.sasakian; });
        Agg rxi = collect([](const PointSample& s) { return s.r_xi; });

        if (ax.points == 0) {
            c.bound = false;
            return;
        }
        c.is_almost_contact = tri_of(ax.max) == Tri::True && rank.max < 0.5;
        c.is_compatible = c.is_almost_contact && tri_of(compat.max) == Tri::True;
        c.is_contact = c.is_compatible && tri_of(deta.max) == Tri::True;
        c.is_k_contact = c.is_contact && tri_of(hnorm.max) == Tri::True;
        c.is_sasakian = c.is_contact && tri_of(sas.max) == Tri::True;
        c.residuals["axioms"] = ax.max;
        c.residuals["compatibility"] = compat.max;
        c.residuals["d_eta_vs_phi"] = deta.max;
        c.residuals["h_norm"] = hnorm.max;
        c.residuals["sasakian_2_8"] = sas.max;
        c.residuals["curvature_02_4"] = rxi.max;
    }

    const StructureSpec& spec_;
    const EngineOptions& opt_;
    ToleranceTable tols_;
    CheckReport report_;
    std::vector<PointSample> samples_;
    bool bound_ = false;
    int eval_errors_ = 0;
    std::string first_error_;
};

} // namespace

const char* suite_name(Suite s) {
    switch (s) {
        case Suite::Axioms: return "axioms";
        case Suite::Identities: return "identities";
        case Suite::Codazzi: return "codazzi";
        case Suite::Sectional: return "sectional";
        case Suite::CR: return "cr";
        case Suite::All: return "all";
    }
    return "all";
}

std::optional<Suite> suite_from_name(const std::string& name) {
    if (name == "axioms") return Suite::Axioms;
    if (name == "identities") return Suite::Identities;
    if (name == "codazzi") return Suite::Codazzi;
    if (name == "sectional") return Suite::Sectional;
    if (name == "cr") return Suite::CR;
    if (name == "all") return Suite::All;
    return std::nullopt;
}

const char* status_name(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::Indeterminate: return "indeterminate";
        case CheckStatus::Skipped: return "skipped";
        case CheckStatus::Contradiction: return "contradiction";
    }
    return "skipped";
}

bool CheckReport::any_failure() const {
    for (const auto& r : records) {
        if (r.status == CheckStatus::Fail || r.status == CheckStatus::Contradiction) return true;
    }
    return false;
}

std::string tolerance_profile_from_env() {
    const char* env = std::getenv("PSEUDOCONTACT_TOL");
    if (env == nullptr) return "default";
    std::string v(env);
    if (v == "strict" || v == "loose" || v == "default") return v;
    return "default";
}

CheckReport run_checks(const StructureSpec& spec, const EngineOptions& options,
                       const std::string& digest) {
    return Runner(spec, options, digest).run();
}

ClassificationResult classify(const StructureSpec& spec, const EngineOptions& options) {
    EngineOptions opt = options;
    opt.suite = Suite::Axioms;
    CheckReport rep = run_checks(spec, opt, "");
    return rep.classification;
}

} // namespace pscontact
