#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>

#include "pscontact/errors.hpp"
#include "pscontact/specfile.hpp"

namespace pscontact {

namespace {

struct Value {
    enum class Type { Number, String, Array };
    Type type = Type::Number;
    double num = 0.0;
    std::string str;
    std::vector<Value> arr;

    bool is_number() const { return type == Type::Number; }
    bool is_string() const { return type == Type::String; }
    bool is_array() const { return type == Type::Array; }
};

struct Entry {
    std::string section;
    std::string key;
    Value value;
    int line = 0;
};

class ValueParser {
public:
    ValueParser(std::string_view text, const std::string& section, int line)
        : text_(text), section_(section), line_(line) {}

    Value run() {
        Value v = parse();
        skip_space();
        if (pos_ != text_.size()) fail("trailing characters after value");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw SpecFileError(what, section_, line_);
    }

    void skip_space() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    Value parse() {
        skip_space();
        if (pos_ >= text_.size()) fail("missing value");
        char c = text_[pos_];
        if (c == '"') return parse_string();
        if (c == '[') return parse_array();
        return parse_number();
    }

    Value parse_string() {
        Value v;
        v.type = Value::Type::String;
        ++pos_;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            v.str.push_back(text_[pos_]);
            ++pos_;
        }
        if (pos_ >= text_.size()) fail("unterminated string");
        ++pos_;
        return v;
    }

    Value parse_array() {
        Value v;
        v.type = Value::Type::Array;
        ++pos_;
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == ']') {
            ++pos_;
            return v;
        }
        for (;;) {
            v.arr.push_back(parse());
            skip_space();
            if (pos_ >= text_.size()) fail("unterminated array");
            if (text_[pos_] == ',') {
                ++pos_;
                skip_space();
                if (pos_ < text_.size() && text_[pos_] == ']') { // trailing comma
                    ++pos_;
                    return v;
                }
                continue;
            }
            if (text_[pos_] == ']') {
                ++pos_;
                return v;
            }
            fail("expected ',' or ']' in array");
        }
    }

    Value parse_number() {
        Value v;
        v.type = Value::Type::Number;
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        auto res = std::from_chars(begin, end, v.num);
        if (res.ec != std::errc{}) fail("malformed number");
        pos_ += static_cast<std::size_t>(res.ptr - begin);
        return v;
    }

    std::string_view text_;
    std::string section_;
    int line_;
    std::size_t pos_ = 0;
};

std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<Entry> tokenize(const std::string& text) {
    std::vector<Entry> out;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;

    std::string pending_key;
    std::string pending_value;
    int pending_line = 0;
    int bracket_depth = 0;

    auto flush = [&]() {
        if (pending_key.empty()) return;
        Entry e;
        e.section = section;
        e.key = pending_key;
        e.line = pending_line;
        e.value = ValueParser(pending_value, section, pending_line).run();
        out.push_back(std::move(e));
        pending_key.clear();
        pending_value.clear();
        bracket_depth = 0;
    };

    while (std::getline(in, line)) {
        ++lineno;
        std::string body = trim(strip_comment(line));
        if (bracket_depth > 0) {
            pending_value += " " + body;
            for (char c : body) {
                if (c == '[') ++bracket_depth;
                if (c == ']') --bracket_depth;
            }
            if (bracket_depth == 0) flush();
            if (bracket_depth < 0) throw SpecFileError("unbalanced ']'", section, lineno);
            continue;
        }
        if (body.empty()) continue;
        if (body.front() == '[' && body.back() == ']' && body.find('=') == std::string::npos) {
            section = trim(body.substr(1, body.size() - 2));
            if (section.empty()) throw SpecFileError("empty section name", "", lineno);
            continue;
        }
        std::size_t eq = body.find('=');
        if (eq == std::string::npos) {
            throw SpecFileError("expected 'key = value'", section, lineno);
        }
        pending_key = trim(body.substr(0, eq));
        pending_value = trim(body.substr(eq + 1));
        pending_line = lineno;
        if (pending_key.empty()) throw SpecFileError("empty key", section, lineno);
        for (char c : pending_value) {
            if (c == '[') ++bracket_depth;
            if (c == ']') --bracket_depth;
        }
        if (bracket_depth == 0) {
            flush();
        } else if (bracket_depth < 0) {
            throw SpecFileError("unbalanced ']'", section, lineno);
        }
    }
    if (bracket_depth != 0) throw SpecFileError("unterminated array at end of file", section, lineno);
    return out;
}

class SpecBuilder {
public:
    explicit SpecBuilder(const std::string& text) : entries_(tokenize(text)) {}

    StructureSpec run() {
        StructureSpec spec;
        build_chart(spec);

        const auto& co = spec.chart.coordinates;
        const int d = spec.chart.dim();

        spec.metric = parse_metric(co, d);
        if (const Entry* e = find("phi", "rows")) {
            spec.phi = parse_matrix(*e, co, d, "phi");
        }
        if (const Entry* e = find("xi", "components")) {
            spec.xi = parse_vector(*e, co, d, "xi", /*rank_up=*/1);
        }
        if (const Entry* e = find("eta", "components")) {
            spec.eta = parse_vector(*e, co, d, "eta", /*rank_up=*/0);
        }

        if (const Entry* e = find("", "name")) spec.name = expect_string(*e);
        if (const Entry* e = find("", "description")) spec.description = expect_string(*e);

        if (const Entry* e = find("sampling", "seed")) {
            spec.sampling.seed = static_cast<std::uint64_t>(expect_number(*e));
        }
        if (const Entry* e = find("sampling", "points")) {
            spec.sampling.points = static_cast<int>(expect_number(*e));
            if (spec.sampling.points < 0 || spec.sampling.points > 100000) {
                throw SpecFileError("points out of range", "sampling", e->line);
            }
        }
        if (const Entry* e = find("sampling", "extra")) {
            if (!e->value.is_array()) throw SpecFileError("extra must be an array", "sampling", e->line);
            for (const Value& row : e->value.arr) {
                if (!row.is_array() || static_cast<int>(row.arr.size()) != d) {
                    throw SpecFileError("extra point has wrong dimension", "sampling", e->line);
                }
                std::vector<double> p;
                for (const Value& c : row.arr) {
                    if (!c.is_number()) throw SpecFileError("extra point must be numeric", "sampling", e->line);
                    p.push_back(c.num);
                }
                spec.sampling.extra.push_back(std::move(p));
            }
        }

        if (const Entry* e = find("tolerances", "order2")) {
            spec.tolerances.base_order2 = expect_number(*e);
        }
        if (const Entry* e = find("tolerances", "order3")) {
            spec.tolerances.base_order3 = expect_number(*e);
        }
        for (const Entry& e : entries_) {
            if (e.section == "tolerances" && e.key.rfind("override.", 0) == 0) {
                if (!e.value.is_number()) {
                    throw SpecFileError("tolerance override must be numeric", "tolerances", e.line);
                }
                spec.tolerances.overrides[e.key.substr(9)] = e.value.num;
            }
        }

        for (const Entry& e : entries_) check_known(e);
        spec.validate();
        verify_metric_consistency(spec);
        return spec;
    }

private:
    const Entry* find(const std::string& section, const std::string& key) const {
        for (const Entry& e : entries_) {
            if (e.section == section && e.key == key) return &e;
        }
        return nullptr;
    }

    static double expect_number(const Entry& e) {
        if (!e.value.is_number()) {
            throw SpecFileError("expected a number for '" + e.key + "'", e.section, e.line);
        }
        return e.value.num;
    }

    static std::string expect_string(const Entry& e) {
        if (!e.value.is_string()) {
            throw SpecFileError("expected a string for '" + e.key + "'", e.section, e.line);
        }
        return e.value.str;
    }

    void build_chart(StructureSpec& spec) {
        const Entry* n = find("chart", "n");
        if (!n) throw SpecFileError("missing [chart] n", "chart");
        spec.chart.n = static_cast<int>(expect_number(*n));
        if (spec.chart.n < 1 || spec.chart.n > (kMaxJetVars - 1) / 2) {
            throw SpecFileError("n out of range", "chart", n->line);
        }
        const int d = 2 * spec.chart.n + 1;

        if (const Entry* e = find("chart", "coordinates")) {
            if (!e->value.is_array() || static_cast<int>(e->value.arr.size()) != d) {
                throw SpecFileError("coordinates must list 2n+1 names", "chart", e->line);
            }
            for (const Value& v : e->value.arr) {
                if (!v.is_string() || v.str.empty()) {
                    throw SpecFileError("coordinate names must be strings", "chart", e->line);
                }
                spec.chart.coordinates.push_back(v.str);
            }
        } else {
            spec.chart.coordinates = default_coordinates(spec.chart.n);
        }
        for (std::size_t i = 0; i < spec.chart.coordinates.size(); ++i) {
            for (std::size_t j = i + 1; j < spec.chart.coordinates.size(); ++j) {
                if (spec.chart.coordinates[i] == spec.chart.coordinates[j]) {
                    throw SpecFileError("duplicate coordinate name", "chart");
                }
            }
        }

        if (const Entry* e = find("chart", "box")) {
            if (!e->value.is_array() || static_cast<int>(e->value.arr.size()) != d) {
                throw SpecFileError("box must list one [lo, hi] per coordinate", "chart", e->line);
            }
            for (const Value& v : e->value.arr) {
                if (!v.is_array() || v.arr.size() != 2 || !v.arr[0].is_number() ||
                    !v.arr[1].is_number()) {
                    throw SpecFileError("box entries must be [lo, hi]", "chart", e->line);
                }
                spec.chart.box.push_back({v.arr[0].num, v.arr[1].num});
            }
        } else {
            spec.chart.box.assign(static_cast<std::size_t>(d), {-1.0, 1.0});
        }
    }

    ExprPtr parse_component(const std::string& text, const std::vector<std::string>& co,
                            const std::string& section, int line, int row, int col) {
        try {
            return parse_expression(text, co);
        } catch (const ParseError& ex) {
            char buf[160];
            std::snprintf(buf, sizeof(buf), "[%s] row %d col %d: %s (offset %zu)",
                          section.c_str(), row + 1, col + 1, ex.what(), ex.offset);
            throw SpecFileError(buf, section, line);
        }
    }

    TensorFieldSpec parse_metric(const std::vector<std::string>& co, int d) {
        const Entry* e = find("metric", "rows");
        if (!e) throw SpecFileError("missing [metric] rows", "metric");
        if (!e->value.is_array()) throw SpecFileError("rows must be an array", "metric", e->line);
        const auto& rows = e->value.arr;
        if (static_cast<int>(rows.size()) != d) {
            throw SpecFileError("metric must have 2n+1 rows", "metric", e->line);
        }
        bool lower = true, full = true;
        for (int i = 0; i < d; ++i) {
            if (!rows[i].is_array()) throw SpecFileError("metric rows must be arrays", "metric", e->line);
            if (static_cast<int>(rows[i].arr.size()) != i + 1) lower = false;
            if (static_cast<int>(rows[i].arr.size()) != d) full = false;
        }
        if (!lower && !full) {
            throw SpecFileError("metric rows must form a lower triangle or a full matrix",
                                "metric", e->line);
        }
        TensorFieldSpec t = TensorFieldSpec::make(0, 2, d);
        for (int i = 0; i < d; ++i) {
            const int cols = lower ? i + 1 : d;
            for (int j = 0; j < cols; ++j) {
                const Value& cell = rows[i].arr[j];
                if (!cell.is_string()) {
                    throw SpecFileError("metric entries must be quoted expressions", "metric", e->line);
                }
                ExprPtr parsed = parse_component(cell.str, co, "metric", e->line, i, j);
                if (lower || j <= i) {
                    t.at(i, j) = parsed;
                    t.at(j, i) = parsed;
                } else {
                    upper_entries_.push_back({i, j, parsed});
                }
            }
        }
        metric_is_full_ = full && !lower;
        return t;
    }

    TensorFieldSpec parse_matrix(const Entry& e, const std::vector<std::string>& co, int d,
                                 const std::string& section) {
        if (!e.value.is_array() || static_cast<int>(e.value.arr.size()) != d) {
            throw SpecFileError("rows must be a (2n+1)-row array", section, e.line);
        }
        TensorFieldSpec t = TensorFieldSpec::make(1, 1, d);
        for (int i = 0; i < d; ++i) {
            const Value& row = e.value.arr[i];
            if (!row.is_array() || static_cast<int>(row.arr.size()) != d) {
                throw SpecFileError("matrix rows must have 2n+1 entries", section, e.line);
            }
            for (int j = 0; j < d; ++j) {
                if (!row.arr[j].is_string()) {
                    throw SpecFileError("entries must be quoted expressions", section, e.line);
                }
                t.at(i, j) = parse_component(row.arr[j].str, co, section, e.line, i, j);
            }
        }
        return t;
    }

    TensorFieldSpec parse_vector(const Entry& e, const std::vector<std::string>& co, int d,
                                 const std::string& section, int rank_up) {
        if (!e.value.is_array() || static_cast<int>(e.value.arr.size()) != d) {
            throw SpecFileError("components must list 2n+1 entries", section, e.line);
        }
        TensorFieldSpec t = TensorFieldSpec::make(rank_up, 1 - rank_up, d);
        for (int i = 0; i < d; ++i) {
            if (!e.value.arr[i].is_string()) {
                throw SpecFileError("entries must be quoted expressions", section, e.line);
            }
            t.at(i) = parse_component(e.value.arr[i].str, co, section, e.line, i, 0);
        }
        return t;
    }

    void check_known(const Entry& e) {
        static const std::vector<std::pair<std::string, std::string>> known = {
            {"", "schema"},        {"", "name"},          {"", "description"},
            {"chart", "n"},        {"chart", "coordinates"}, {"chart", "box"},
            {"metric", "rows"},    {"phi", "rows"},       {"xi", "components"},
            {"eta", "components"}, {"sampling", "seed"},  {"sampling", "points"},
            {"sampling", "extra"}, {"tolerances", "order2"}, {"tolerances", "order3"},
        };
        for (const auto& [sec, key] : known) {
            if (e.section == sec && e.key == key) return;
        }
        if (e.section == "tolerances" && e.key.rfind("override.", 0) == 0) return;
        throw SpecFileError("unknown key '" + e.key + "'", e.section, e.line);
    }

    // Both triangles given: evaluate at deterministic points and require
    // numeric agreement.
    void verify_metric_consistency(const StructureSpec& spec) {
        if (!metric_is_full_ || upper_entries_.empty()) return;
        SamplingSpec probe;
        probe.points = 3;
        auto pts = make_sample_points(spec.chart, probe);
        for (const auto& [i, j, expr] : upper_entries_) {
            for (const auto& p : pts) {
                double upper = eval_value(*expr, p);
                double lowerv = eval_value(*spec.metric.at(i, j), p);
                if (std::abs(upper - lowerv) > 1e-12 * std::max(1.0, std::abs(lowerv))) {
                    throw SpecFileError("metric triangles disagree at a sample point", "metric");
                }
            }
        }
    }

    std::vector<Entry> entries_;
    std::vector<std::tuple<int, int, ExprPtr>> upper_entries_;
    bool metric_is_full_ = false;
};

void emit_number(std::string& out, double v) {
    char buf[40];
    if (v == std::floor(v) && std::abs(v) < 1e15) {
        std::snprintf(buf, sizeof(buf), "%.1f", v);
    } else {
        // shortest representation that parses back to the same double
        auto res = std::to_chars(buf, buf + sizeof(buf), v);
        buf[res.ptr - buf] = '\0';
    }
    out += buf;
}

} // namespace

StructureSpec parse_spec_text(const std::string& text) { return SpecBuilder(text).run(); }

StructureSpec load_spec_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SpecFileError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_spec_text(ss.str());
}

std::string emit_spec_text(const StructureSpec& spec) {
    std::string out;
    out += "schema = 1\n";
    out += "name = \"" + spec.name + "\"\n";
    out += "description = \"" + spec.description + "\"\n\n";

    out += "[chart]\n";
    out += "n = " + std::to_string(spec.chart.n) + "\n";
    out += "coordinates = [";
    for (std::size_t i = 0; i < spec.chart.coordinates.size(); ++i) {
        if (i) out += ", ";
        out += "\"" + spec.chart.coordinates[i] + "\"";
    }
    out += "]\n";
    out += "box = [";
    for (std::size_t i = 0; i < spec.chart.box.size(); ++i) {
        if (i) out += ", ";
        out += "[";
        emit_number(out, spec.chart.box[i][0]);
        out += ", ";
        emit_number(out, spec.chart.box[i][1]);
        out += "]";
    }
    out += "]\n\n";

    const int d = spec.chart.dim();
    out += "[metric]\nrows = [\n";
    for (int i = 0; i < d; ++i) {
        out += "  [";
        for (int j = 0; j <= i; ++j) {
            if (j) out += ", ";
            out += "\"" + to_string(*spec.metric.at(i, j)) + "\"";
        }
        out += "],\n";
    }
    out += "]\n";

    if (spec.phi) {
        out += "\n[phi]\nrows = [\n";
        for (int i = 0; i < d; ++i) {
            out += "  [";
            for (int j = 0; j < d; ++j) {
                if (j) out += ", ";
                out += "\"" + to_string(*spec.phi->at(i, j)) + "\"";
            }
            out += "],\n";
        }
        out += "]\n";
    }
    if (spec.xi) {
        out += "\n[xi]\ncomponents = [";
        for (int i = 0; i < d; ++i) {
            if (i) out += ", ";
            out += "\"" + to_string(*spec.xi->at(i)) + "\"";
        }
        out += "]\n";
    }
    if (spec.eta) {
        out += "\n[eta]\ncomponents = [";
        for (int i = 0; i < d; ++i) {
            if (i) out += ", ";
            out += "\"" + to_string(*spec.eta->at(i)) + "\"";
        }
        out += "]\n";
    }

    out += "\n[sampling]\n";
    out += "seed = " + std::to_string(spec.sampling.seed) + "\n";
    out += "points = " + std::to_string(spec.sampling.points) + "\n";
    if (!spec.sampling.extra.empty()) {
        out += "extra = [";
        for (std::size_t i = 0; i < spec.sampling.extra.size(); ++i) {
            if (i) out += ", ";
            out += "[";
            for (std::size_t c = 0; c < spec.sampling.extra[i].size(); ++c) {
                if (c) out += ", ";
                emit_number(out, spec.sampling.extra[i][c]);
            }
            out += "]";
        }
        out += "]\n";
    }

    if (spec.tolerances.base_order2 || spec.tolerances.base_order3 ||
        !spec.tolerances.overrides.empty()) {
        out += "\n[tolerances]\n";
        if (spec.tolerances.base_order2) {
            out += "order2 = ";
            emit_number(out, *spec.tolerances.base_order2);
            out += "\n";
        }
        if (spec.tolerances.base_order3) {
            out += "order3 = ";
            emit_number(out, *spec.tolerances.base_order3);
            out += "\n";
        }
        for (const auto& [key, val] : spec.tolerances.overrides) {
            out += "override." + key + " = ";
            emit_number(out, val);
            out += "\n";
        }
    }
    return out;
}

void write_spec_file(const StructureSpec& spec, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SpecFileError("cannot write file: " + path);
    out << emit_spec_text(spec);
}

std::string spec_digest(const std::string& text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

} // namespace pscontact
