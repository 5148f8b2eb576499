#pragma once

// SVG rendering of solved plates.

#include <string>

#include "seqpack/io.hpp"
#include "seqpack/model.hpp"

namespace seqpack {

/// One panel per plate, left to right: plate outline, the plate scaled by
/// the solution's sigma (dashed, only when sigma < 1), filled object hulls,
/// outlined extruder envelopes and the print position of each object at its
/// centroid. Output depends only on the inputs.
/// Throws MissingPlacement when the solution does not match the instance.
std::string render_svg(const Instance& instance, const Solution& solution);

} // namespace seqpack
