#pragma once

#include "proxmon/geometry.hpp"

namespace proxmon {

// A predicted worker box (sensor frame) with its confidence in [0, 1].
struct Detection {
  geometry::Box3D box;
  double score = 0.0;
};

}  // namespace proxmon
