#pragma once

#include "shapebench/core.hpp"

#include <utility>
#include <vector>

namespace shapebench {

/// Offsets (dx, dy) with dx^2 + dy^2 <= r^2.
std::vector<std::pair<int, int>> disk_offsets(int r);

// Pixels outside the grid count as background for every operator, so the
// results equal the unbounded-plane operators restricted to the grid.
BinaryShape erode(const BinaryShape& s, int r);
BinaryShape dilate(const BinaryShape& s, int r);
BinaryShape opening(const BinaryShape& s, int r);
BinaryShape closing(const BinaryShape& s, int r);

}  // namespace shapebench
