#include <cstdio>

#include "json.hpp"
#include "pscontact/engine.hpp"

namespace pscontact {

namespace {

std::string format_residual(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

} // namespace

std::string report_to_json(const CheckReport& report) {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["engine_version"] = report.engine_version;
    j["spec_digest"] = report.spec_digest;
    j["spec_name"] = report.spec_name;
    j["seed"] = report.seed;
    j["suite"] = report.suite;
    j["profile"] = report.profile;
    j["points"] = report.points;
    j["evaluation_errors"] = report.evaluation_errors;

    nlohmann::ordered_json records = nlohmann::ordered_json::array();
    for (const auto& r : report.records) {
        nlohmann::ordered_json rec;
        rec["check_id"] = r.check_id;
        rec["paper_ref"] = r.paper_ref;
        rec["max_residual"] = r.max_residual;
        rec["tolerance"] = r.tolerance;
        rec["points_tested"] = r.points_tested;
        rec["probes_skipped_null"] = r.probes_skipped_null;
        rec["status"] = status_name(r.status);
        if (!r.note.empty()) rec["note"] = r.note;
        records.push_back(std::move(rec));
    }
    j["records"] = std::move(records);

    nlohmann::ordered_json cls;
    cls["bound"] = report.classification.bound;
    if (report.classification.bound) {
        cls["almost_contact"] = report.classification.is_almost_contact;
        cls["compatible"] = report.classification.is_compatible;
        cls["contact"] = report.classification.is_contact;
        cls["k_contact"] = report.classification.is_k_contact;
        cls["sasakian"] = report.classification.is_sasakian;
        nlohmann::ordered_json res;
        for (const auto& [k, v] : report.classification.residuals) res[k] = v;
        cls["residuals"] = std::move(res);
    }
    j["classification"] = std::move(cls);
    j["notes"] = report.notes;
    return j.dump(2) + "\n";
}

std::string report_to_text(const CheckReport& report) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof(line), "engine %s | spec %s | digest %s | seed %llu | suite %s | profile %s | points %d\n",
                  report.engine_version.c_str(), report.spec_name.c_str(),
                  report.spec_digest.c_str(), static_cast<unsigned long long>(report.seed),
                  report.suite.c_str(), report.profile.c_str(), report.points);
    out += line;
    out += "\n";
    std::snprintf(line, sizeof(line), "%-13s %-26s %-10s %-10s %4s %4s  %s\n", "status",
                  "check", "residual", "tolerance", "pts", "skip", "ref");
    out += line;
    out += std::string(96, '-') + "\n";
    for (const auto& r : report.records) {
        std::snprintf(line, sizeof(line), "%-13s %-26s %-10s %-10s %4d %4d  %s\n",
                      status_name(r.status), r.check_id.c_str(),
                      format_residual(r.max_residual).c_str(),
                      format_residual(r.tolerance).c_str(), r.points_tested,
                      r.probes_skipped_null, r.paper_ref.c_str());
        out += line;
        if (!r.note.empty()) {
            std::snprintf(line, sizeof(line), "%-13s   %s\n", "", r.note.c_str());
            out += line;
        }
    }

    out += "\nclassification:\n";
    if (!report.classification.bound) {
        out += "  almost_contact: not bound\n";
    } else {
        auto flag = [&](const char* name, bool v) {
            std::snprintf(line, sizeof(line), "  %s: %s\n", name, v ? "true" : "false");
            out += line;
        };
        flag("almost_contact", report.classification.is_almost_contact);
        flag("compatible", report.classification.is_compatible);
        flag("contact", report.classification.is_contact);
        flag("k_contact", report.classification.is_k_contact);
        flag("sasakian", report.classification.is_sasakian);
        for (const auto& [k, v] : report.classification.residuals) {
            std::snprintf(line, sizeof(line), "  residual %-16s %.3e\n", k.c_str(), v);
            out += line;
        }
    }
    out += "\nnotes:\n";
    for (const auto& n : report.notes) out += "  - " + n + "\n";
    return out;
}

} // namespace pscontact
