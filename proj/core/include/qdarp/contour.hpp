#pragma once

#include <optional>
#include <vector>

#include "qdarp/sweep.hpp"

namespace qdarp {

struct ContourPoint {
  double phi2_ps2 = 0.0;
  double area_pi = 0.0;
};

/// Open chains run boundary to boundary; closed loops repeat their first
/// point at the end.
using Polyline = std::vector<ContourPoint>;

/// Marching-squares isoline of `map` at `level`, with linear interpolation
/// along cell edges. Nodes with value >= level count as inside; saddle cells
/// are resolved by the mean of their four corners. Requires 0 < level < 1.
std::vector<Polyline> level_set(const OccupationMap& map, double level);

struct Threshold {
  double area_pi = 0.0;
  double phi2_ps2 = 0.0;
};

/// Corner (area*, phi2*) of the plateau where the occupation stays at or
/// above `level`: every point of [area*, area_max] x [phi2*, phi2_max] of
/// the bilinearly interpolated map is >= level. The corner is searched by
/// bisection along the diagonal from (area_min, phi2_min) to the far
/// corner of the grid, which picks one point of the set of minimal corners.
/// Returns nullopt when even the far grid corner is below `level`.
std::optional<Threshold> threshold_finder(const OccupationMap& map, double level);

}  // namespace qdarp
