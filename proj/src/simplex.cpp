#include "nflab/simplex.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace nflab {

SimplexResult maximize_on_disk(const std::function<double(const Eigen::Vector2d&)>& objective,
                               const Eigen::Vector2d& center, double radius,
                               const Eigen::Vector2d& start, double initial_step,
                               const SimplexOptions& options) {
  constexpr double kLowest = -std::numeric_limits<double>::infinity();
  auto value = [&](const Eigen::Vector2d& x) {
    if ((x - center).norm() > radius) return kLowest;
    const double v = objective(x);
    return std::isnan(v) ? kLowest : v;
  };

  std::array<Eigen::Vector2d, 3> x = {start, start + Eigen::Vector2d(initial_step, 0.0),
                                      start + Eigen::Vector2d(0.0, initial_step)};
  std::array<double, 3> fx{};
  for (int i = 0; i < 3; ++i) fx[i] = value(x[i]);

  SimplexResult result;
  std::array<int, 3> order{0, 1, 2};
  for (int it = 0; it < options.max_iterations; ++it) {
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fx[a] > fx[b]; });
    const int best = order[0], mid = order[1], worst = order[2];
    result.iterations = it;

    const double size = std::max((x[mid] - x[best]).norm(), (x[worst] - x[best]).norm());
    if (size <= options.relative_step * radius) {
      result.converged = true;
      break;
    }

    const Eigen::Vector2d centroid = 0.5 * (x[best] + x[mid]);
    const Eigen::Vector2d reflected = centroid + (centroid - x[worst]);
    const double fr = value(reflected);
    if (fr > fx[best]) {
      const Eigen::Vector2d expanded = centroid + 2.0 * (centroid - x[worst]);
      const double fe = value(expanded);
      if (fe > fr) {
        x[worst] = expanded;
        fx[worst] = fe;
      } else {
        x[worst] = reflected;
        fx[worst] = fr;
      }
      continue;
    }
    if (fr > fx[mid]) {
      x[worst] = reflected;
      fx[worst] = fr;
      continue;
    }
    const bool outside = fr > fx[worst];
    const Eigen::Vector2d contracted =
        outside ? Eigen::Vector2d(centroid + 0.5 * (reflected - centroid))
                : Eigen::Vector2d(centroid + 0.5 * (x[worst] - centroid));
    const double fc = value(contracted);
    if (fc > (outside ? fr : fx[worst])) {
      x[worst] = contracted;
      fx[worst] = fc;
      continue;
    }
    for (int i : {mid, worst}) {
      x[i] = x[best] + 0.5 * (x[i] - x[best]);
      fx[i] = value(x[i]);
    }
  }

  const int best = static_cast<int>(std::max_element(fx.begin(), fx.end()) - fx.begin());
  result.argmax = x[best];
  result.value = fx[best];
  return result;
}

}  // namespace nflab
