#pragma once

#include <string>

#include "pscontact/chart.hpp"

namespace pscontact {

// Structured text format for manifold definitions: sections [chart],
// [metric], [phi], [xi], [eta], [sampling], [tolerances]; quoted expression
// strings; metric as lower triangle (full matrices accepted when both
// triangles agree numerically). parse(emit(spec)) reproduces the spec.
StructureSpec parse_spec_text(const std::string& text);
StructureSpec load_spec_file(const std::string& path);

std::string emit_spec_text(const StructureSpec& spec);
void write_spec_file(const StructureSpec& spec, const std::string& path);

// FNV-1a over the canonical serialized form; the report's spec digest.
std::string spec_digest(const std::string& text);

} // namespace pscontact
