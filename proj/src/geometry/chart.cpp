#include "pscontact/chart.hpp"

#include <random>

#include "pscontact/errors.hpp"

namespace pscontact {

namespace {

// Radical-inverse (van der Corput) in the given prime base.
double radical_inverse(int base, std::uint64_t i) {
    double inv = 1.0 / base;
    double f = inv;
    double r = 0.0;
    while (i > 0) {
        r += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

constexpr int kPrimes[kMaxJetVars] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

// Uniform double in [0,1) from raw engine output; avoids the
// implementation-defined behavior of uniform_real_distribution.
double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

std::vector<double> Chart::center() const {
    std::vector<double> c(box.size());
    for (std::size_t i = 0; i < box.size(); ++i) c[i] = 0.5 * (box[i][0] + box[i][1]);
    return c;
}

bool Chart::contains(std::span<const double> p) const {
    if (p.size() != box.size()) return false;
    for (std::size_t i = 0; i < box.size(); ++i) {
        if (p[i] < box[i][0] || p[i] > box[i][1]) return false;
    }
    return true;
}

std::vector<std::string> default_coordinates(int n) {
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    for (int i = 1; i <= n; ++i) names.push_back("y" + std::to_string(i));
    names.push_back("z");
    return names;
}

TensorFieldSpec TensorFieldSpec::make(int rank_up, int rank_down, int dim) {
    TensorFieldSpec t;
    t.rank_up = rank_up;
    t.rank_down = rank_down;
    t.dim = dim;
    int count = 1;
    for (int r = 0; r < t.rank(); ++r) count *= dim;
    t.components.assign(static_cast<std::size_t>(count), nullptr);
    return t;
}

void StructureSpec::validate() const {
    const int d = chart.dim();
    if (d < 3 || d % 2 == 0) {
        throw SpecFileError("chart dimension must be odd and >= 3", "chart");
    }
    if (d != 2 * chart.n + 1) {
        throw SpecFileError("coordinate count must equal 2n+1", "chart");
    }
    if (static_cast<int>(chart.box.size()) != d) {
        throw SpecFileError("domain box must list one interval per coordinate", "chart");
    }
    for (const auto& iv : chart.box) {
        if (!(iv[0] < iv[1])) {
            throw SpecFileError("domain box intervals must be non-degenerate", "chart");
        }
    }
    if (metric.dim != d || metric.rank_up != 0 || metric.rank_down != 2) {
        throw SpecFileError("metric must be a (0,2) field of matching dimension", "metric");
    }
    const int have = int(phi.has_value()) + int(xi.has_value()) + int(eta.has_value());
    if (have != 0 && have != 3) {
        throw SpecFileError("phi, xi and eta must be given together or not at all");
    }
}

std::vector<std::vector<double>> make_sample_points(const Chart& chart, const SamplingSpec& s) {
    const int d = chart.dim();
    std::vector<std::vector<double>> pts;
    pts.push_back(chart.center());

    auto map_unit = [&](int coord, double u) {
        // Shrink slightly into the interior so closed-box boundary values do
        // not coincide with expression domain edges.
        const double lo = chart.box[coord][0];
        const double hi = chart.box[coord][1];
        return lo + (0.02 + 0.96 * u) * (hi - lo);
    };

    const int halton_count = std::min(8, std::max(0, s.points));
    for (int k = 0; k < halton_count; ++k) {
        std::vector<double> p(d);
        for (int c = 0; c < d; ++c) {
            p[c] = map_unit(c, radical_inverse(kPrimes[c], static_cast<std::uint64_t>(k + 1)));
        }
        pts.push_back(std::move(p));
    }

    std::mt19937_64 rng(s.seed);
    for (int k = halton_count; k < s.points; ++k) {
        std::vector<double> p(d);
        for (int c = 0; c < d; ++c) p[c] = map_unit(c, unit_double(rng));
        pts.push_back(std::move(p));
    }

    for (const auto& p : s.extra) pts.push_back(p);
    return pts;
}

} // namespace pscontact
