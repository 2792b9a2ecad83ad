#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pscontact/catalog.hpp"
#include "pscontact/cli.hpp"
#include "pscontact/engine.hpp"
#include "pscontact/errors.hpp"
#include "pscontact/geometry.hpp"
#include "pscontact/specfile.hpp"

namespace pscontact::cli {

namespace {

struct CheckArgs {
    std::string file;
    std::string suite = "all";
    std::string format = "json";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int points = 0;
    bool points_set = false;
    int threads = 0;
    std::vector<std::string> tol;
};

int parse_tol_overrides(const std::vector<std::string>& items, EngineOptions& opt,
                        std::string& err) {
    for (const auto& item : items) {
        auto eq = item.find('=');
        if (eq == std::string::npos) {
            err += "malformed --tol override '" + item + "': expected id=value\n";
            return 2;
        }
        std::string id = item.substr(0, eq);
        try {
            double value = std::stod(item.substr(eq + 1));
            opt.tol_overrides[id] = value;
        } catch (...) {
            err += "malformed --tol value in '" + item + "'\n";
            return 2;
        }
    }
    return 0;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpecFileError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cmd_check(const CheckArgs& a, std::string& out, std::string& err) {
    std::string text;
    StructureSpec spec;
    try {
        text = read_file(a.file);
        spec = parse_spec_text(text);
    } catch (const SpecFileError& ex) {
        err += std::string("spec error: ") + ex.what();
        if (!ex.section.empty()) err += " [section " + ex.section + "]";
        if (ex.line > 0) err += " [line " + std::to_string(ex.line) + "]";
        err += "\n";
        return 2;
    }

    EngineOptions opt;
    auto suite = suite_from_name(a.suite);
    if (!suite) {
        err += "unknown suite '" + a.suite + "'\n";
        return 2;
    }
    opt.suite = *suite;
    if (a.seed_set) opt.seed = a.seed;
    if (a.points_set) opt.points = a.points;
    opt.threads = a.threads;
    opt.profile = tolerance_profile_from_env();
    if (int rc = parse_tol_overrides(a.tol, opt, err); rc != 0) return rc;

    CheckReport report = run_checks(spec, opt, spec_digest(text));
    if (report.nothing_evaluated()) {
        for (const auto& note : report.notes) {
            if (note.rfind("evaluation errors", 0) == 0) err += note + "\n";
        }
        return 2;
    }
    out += a.format == "text" ? report_to_text(report) : report_to_json(report);
    return report.any_failure() ? 1 : 0;
}

int cmd_classify(const std::string& file, std::string& out, std::string& err) {
    StructureSpec spec;
    try {
        spec = parse_spec_text(read_file(file));
    } catch (const SpecFileError& ex) {
        err += std::string("spec error: ") + ex.what() + "\n";
        return 2;
    }
    EngineOptions opt;
    opt.profile = tolerance_profile_from_env();
    ClassificationResult c = classify(spec, opt);
    char line[128];
    if (!c.bound) {
        out += "almost_contact: not bound\n";
        return 0;
    }
    auto flag = [&](const char* name, bool v) {
        std::snprintf(line, sizeof(line), "%s: %s\n", name, v ? "true" : "false");
        out += line;
    };
    flag("almost_contact", c.is_almost_contact);
    flag("compatible", c.is_compatible);
    flag("contact", c.is_contact);
    flag("k_contact", c.is_k_contact);
    flag("sasakian", c.is_sasakian);
    for (const auto& [k, v] : c.residuals) {
        std::snprintf(line, sizeof(line), "residual %s = %.3e\n", k.c_str(), v);
        out += line;
    }
    return 0;
}

int cmd_catalog_list(std::string& out) {
    for (const auto& e : catalog_entries()) {
        char line[256];
        std::snprintf(line, sizeof(line), "%-32s %s\n", e.name.c_str(), e.description.c_str());
        out += line;
    }
    return 0;
}

int cmd_catalog_emit(const std::string& name, const std::string& out_file, std::string& err) {
    const CatalogEntry* e = find_catalog_entry(name);
    if (e == nullptr) {
        err += "unknown catalog entry '" + name + "'\n";
        return 2;
    }
    try {
        write_spec_file(e->spec, out_file);
    } catch (const Error& ex) {
        err += std::string(ex.what()) + "\n";
        return 2;
    }
    return 0;
}

int cmd_probe(const std::string& file, const std::string& point_str, std::string& out,
              std::string& err) {
    StructureSpec spec;
    try {
        spec = parse_spec_text(read_file(file));
    } catch (const SpecFileError& ex) {
        err += std::string("spec error: ") + ex.what() + "\n";
        return 2;
    }

    std::vector<double> point;
    {
        std::stringstream ss(point_str);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                point.push_back(std::stod(item));
            } catch (...) {
                err += "malformed point component '" + item + "'\n";
                return 2;
            }
        }
    }
    if (static_cast<int>(point.size()) != spec.chart.dim()) {
        err += "point must have " + std::to_string(spec.chart.dim()) + " components\n";
        return 2;
    }
    if (!spec.chart.contains(point)) {
        err += "point lies outside the chart's domain box\n";
        return 2;
    }

    try {
        PointContext ctx(spec, point);
        char buf[64];
        auto print_matrix = [&](const char* name, const Eigen::MatrixXd& m) {
            out += std::string(name) + ":\n";
            for (int i = 0; i < m.rows(); ++i) {
                out += " ";
                for (int j = 0; j < m.cols(); ++j) {
                    std::snprintf(buf, sizeof(buf), " %.15g", m(i, j));
                    out += buf;
                }
                out += "\n";
            }
        };
        out += "point:";
        for (double v : point) {
            std::snprintf(buf, sizeof(buf), " %.15g", v);
            out += buf;
        }
        out += "\n";
        print_matrix("g", ctx.g());
        print_matrix("g_inverse", ctx.ginv());
        std::snprintf(buf, sizeof(buf), "gamma_max_abs: %.15g\n", ctx.gamma().max_abs());
        out += buf;
        std::snprintf(buf, sizeof(buf), "riemann_max_abs: %.15g\n", ctx.riemann().max_abs());
        out += buf;
        print_matrix("ricci_form", ctx.ricci_form());
        if (ctx.bound()) {
            std::snprintf(buf, sizeof(buf), "epsilon: %.15g\n", ctx.epsilon());
            out += buf;
            print_matrix("phi", ctx.phi());
            print_matrix("fundamental_form", ctx.fundamental_form());
            print_matrix("d_eta", ctx.d_eta());
            print_matrix("h", ctx.h());
            print_matrix("ell", ctx.ell());
            print_matrix("tau", ctx.tau());
            print_matrix("nabla_xi", ctx.nabla_xi());
            print_matrix("nabla_xi_h", ctx.nabla_xi_h());
        }
        return 0;
    } catch (const Error& ex) {
        err += std::string(ex.what()) + "\n";
        return 2;
    }
}

} // namespace

int run(const std::vector<std::string>& args, std::string& out, std::string& err) {
    CLI::App app{"Numerical verification of almost contact pseudo-metric structures"};
    app.require_subcommand(1);

    CheckArgs check_args;
    CLI::App* check = app.add_subcommand("check", "run check suites over a manifold spec file");
    check->add_option("file", check_args.file, "manifold spec file")->required();
    check->add_option("--suite", check_args.suite,
                      "axioms|identities|codazzi|sectional|cr|all");
    check->add_option("--format", check_args.format, "json|text");
    check->add_option("--seed", check_args.seed, "sampling seed override")
        ->each([&](const std::string&) { check_args.seed_set = true; });
    check->add_option("--points", check_args.points, "sample point count override")
        ->each([&](const std::string&) { check_args.points_set = true; });
    check->add_option("--threads", check_args.threads, "worker thread count (0 = auto)");
    check->add_option("--tol", check_args.tol, "per-check tolerance override id=value");

    std::string classify_file;
    CLI::App* cls = app.add_subcommand("classify", "print the classification flags");
    cls->add_option("file", classify_file, "manifold spec file")->required();

    CLI::App* cat = app.add_subcommand("catalog", "built-in example manifolds");
    CLI::App* cat_list = cat->add_subcommand("list", "list entries");
    std::string emit_name, emit_file;
    CLI::App* cat_emit = cat->add_subcommand("emit", "write an entry as a spec file");
    cat_emit->add_option("name", emit_name, "entry name")->required();
    cat_emit->add_option("out", emit_file, "output path")->required();

    std::string probe_file, probe_point;
    CLI::App* probe = app.add_subcommand("probe", "print operators at one chart point");
    probe->add_option("file", probe_file, "manifold spec file")->required();
    probe->add_option("--point", probe_point, "comma-separated chart coordinates")->required();

    // CLI11's vector overload consumes arguments back to front.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& ex) {
        if (ex.get_exit_code() == 0) {
            out += app.help();
            return 0;
        }
        err += std::string(ex.what()) + "\n";
        return 2;
    }

    try {
        if (check->parsed()) return cmd_check(check_args, out, err);
        if (cls->parsed()) return cmd_classify(classify_file, out, err);
        if (cat->parsed()) {
            if (cat_list->parsed()) return cmd_catalog_list(out);
            if (cat_emit->parsed()) return cmd_catalog_emit(emit_name, emit_file, err);
            err += "catalog requires a subcommand: list | emit\n";
            return 2;
        }
        if (probe->parsed()) return cmd_probe(probe_file, probe_point, out, err);
    } catch (const Error& ex) {
        err += std::string(ex.what()) + "\n";
        return 2;
    }
    err += "no subcommand given\n";
    return 2;
}

int run_main(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    std::string out, errtext;
    int rc = run(args, out, errtext);
    std::fputs(out.c_str(), stdout);
    std::fputs(errtext.c_str(), stderr);
    return rc;
}

} // namespace pscontact::cli
