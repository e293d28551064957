#pragma once

#include "hmcf/hmesh.hpp"

namespace hmcf {

/// Collapses edges shorter than ratio * (mean edge length) into their geodesic
/// midpoints. A collapse is skipped when it would break the link condition,
/// flip a neighbouring face, or leave fewer than four vertices. Returns a new
/// mesh; `collapsed` receives the number of collapses performed.
TriMesh collapse_short_edges(const TriMesh& mesh, double ratio, int* collapsed = nullptr);

}  // namespace hmcf
