#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pscontact/expr.hpp"

namespace pscontact {

// Single local chart; everything in the engine is chart-local.
struct Chart {
    int n = 1;                                   // dimension = 2n+1 for structures
    std::vector<std::string> coordinates;        // declared names
    std::vector<std::array<double, 2>> box;      // per-coordinate closed sampling interval

    int dim() const { return static_cast<int>(coordinates.size()); }
    std::vector<double> center() const;
    bool contains(std::span<const double> p) const;
};

// Default names x1..xn, y1..yn, z.
std::vector<std::string> default_coordinates(int n);

// Component expressions of a tensor field of valence (rank_up, rank_down),
// rank_up + rank_down <= 2, stored row-major over coordinate indices.
struct TensorFieldSpec {
    int rank_up = 0;
    int rank_down = 0;
    int dim = 0;
    std::vector<ExprPtr> components;

    int rank() const { return rank_up + rank_down; }
    const ExprPtr& at(int i) const { return components[i]; }
    const ExprPtr& at(int i, int j) const { return components[i * dim + j]; }
    ExprPtr& at(int i) { return components[i]; }
    ExprPtr& at(int i, int j) { return components[i * dim + j]; }

    static TensorFieldSpec make(int rank_up, int rank_down, int dim);
};

struct SamplingSpec {
    std::uint64_t seed = 0x5EED;
    int points = 32;
    std::vector<std::vector<double>> extra;      // explicit extra chart points
};

struct ToleranceSettings {
    std::optional<double> base_order2;           // checks built from <= order-2 derivatives
    std::optional<double> base_order3;           // checks involving order-3 data
    std::map<std::string, double> overrides;     // per check id, wins outright
};

// Full serialized manifold definition: a chart plus component expressions for
// g and, when a structure is bound, phi / xi / eta.
struct StructureSpec {
    std::string name;
    std::string description;
    Chart chart;
    TensorFieldSpec metric;                      // (0,2), symmetric
    std::optional<TensorFieldSpec> phi;          // (1,1)
    std::optional<TensorFieldSpec> xi;           // (1,0)
    std::optional<TensorFieldSpec> eta;          // (0,1)
    SamplingSpec sampling;
    ToleranceSettings tolerances;

    bool bound() const { return phi.has_value() && xi.has_value() && eta.has_value(); }
    void validate() const;                       // throws SpecFileError
};

// Deterministic sample set: box center, then a low-discrepancy block, then
// seeded uniform points, then the explicit extra points.
std::vector<std::vector<double>> make_sample_points(const Chart& chart, const SamplingSpec& s);

} // namespace pscontact
