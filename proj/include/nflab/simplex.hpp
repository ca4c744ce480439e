#pragma once

#include <functional>

#include <Eigen/Core>

namespace nflab {

struct SimplexOptions {
  int max_iterations = 400;
  // Stop once every vertex is within relative_step * radius of the best one.
  double relative_step = 1e-12;
};

struct SimplexResult {
  Eigen::Vector2d argmax;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Nelder-Mead maximisation of `objective` over the closed disk
/// |x - center| <= radius, started from a triangle of size `initial_step`
/// at `start`. Points outside the disk and NaN values rank below every
/// finite value.
SimplexResult maximize_on_disk(const std::function<double(const Eigen::Vector2d&)>& objective,
                               const Eigen::Vector2d& center, double radius,
                               const Eigen::Vector2d& start, double initial_step,
                               const SimplexOptions& options = {});

}  // namespace nflab
