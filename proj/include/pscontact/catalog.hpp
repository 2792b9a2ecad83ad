#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pscontact/chart.hpp"

namespace pscontact {

// Built-in example manifolds, each constructed with a self-test: the
// expected outcomes below are re-derived by the engine and must match.
struct CatalogEntry {
    std::string name;
    std::string description;
    StructureSpec spec;

    bool expect_bound = false;
    bool expect_contact = false;
    bool expect_k_contact = false;
    bool expect_sasakian = false;
    std::optional<double> expect_k_value;            // xi-sectional curvature
    std::optional<std::pair<int, int>> expect_signature;
};

// R^{2n+1} with eta = (dz - sum y_i dx_i)/2, xi = 2 d_z,
// g = eps eta(x)eta + (1/4) sum delta_i (dx_i^2 + dy_i^2) and phi forced by
// Phi = d eta together with the compatibility relation; delta_i = -1 for
// i <= index_s. Sasakian for every admissible (n, eps, index_s).
CatalogEntry entry_standard_sasakian(int n, int epsilon, int index_s);

// The classical flat associated metric on R^3: contact, h != 0 with h^2
// acting as the identity on Ker eta, all xi-sectional curvatures zero,
// nabla_xi h = 0.
CatalogEntry entry_flat_contact_r3();

// Constant diagonal metric with p pluses and q minuses and no structure
// bound; connection and curvature sanity only.
CatalogEntry entry_flat_pseudo_euclidean(int p, int q);

const std::vector<CatalogEntry>& catalog_entries();
const CatalogEntry* find_catalog_entry(const std::string& name);

} // namespace pscontact
