#pragma once

#include <Eigen/Dense>

namespace sharpib {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Sides of the rectangular computational domain.
enum class Side { Left = 0, Right = 1, Bottom = 2, Top = 3 };

inline constexpr int kNumSides = 4;

}  // namespace sharpib
