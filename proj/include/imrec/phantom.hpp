#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "imrec/image.hpp"

namespace imrec::phantom {

// Deterministic synthetic test scenes on the [0, 255] intensity scale.
// Shapes are anti-aliased with 4x4 supersampling; textured regions use a
// smoothed random field from a fixed seed.

/// Portrait-like scene: shaded background, a large lit ellipse, textured
/// hair band, small dark features and fine texture.
Image portrait(int side, std::uint64_t seed = 7);

/// Photographer-like scene: bright sky, dark figure with tripod, textured
/// ground and distant buildings.
Image photographer(int side, std::uint64_t seed = 11);

/// Piecewise-constant toy scene of rectangles, disks and a triangle.
Image blocks(int side);

/// Two-level image split by a vertical edge at column side/2.
Image two_level(int side, double low, double high);

/// Names accepted by by_name(): portrait, photographer, blocks.
std::vector<std::string> names();
Image by_name(const std::string& name, int side, std::uint64_t seed = 0);

}  // namespace imrec::phantom
