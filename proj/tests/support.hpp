#pragma once

#include <string>
#include <vector>

#include "normlab/norm.hpp"
#include "normlab/theorems.hpp"

namespace normlab::test {

struct NamedNorm {
  std::string name;
  Norm norm;
};

inline Norm sheared_l3() { return Norm::linear_image(Norm::pnorm(3), Mat2{1, 0.5, 0, 1}); }

inline std::vector<NamedNorm> strictly_convex_norms() {
  return {{"euclid", Norm::euclidean()},
          {"quad2112", Norm::quadratic({2, 1, 1, 2})},
          {"l1.5", Norm::pnorm(1.5)},
          {"l3", Norm::pnorm(3)},
          {"l4", Norm::pnorm(4)},
          {"sheared_l3", sheared_l3()}};
}

inline std::vector<NamedNorm> polyhedral_norms() {
  return {{"l1", Norm::pnorm(1)},
          {"linf", Norm::pnorm(kInfinity)},
          {"square", Norm::polygon({{1, -1}, {1, 1}, {-1, 1}, {-1, -1}})},
          {"hexagon", Norm::regular_polygon(6)},
          {"rotated_linf", Norm::linear_image(Norm::pnorm(kInfinity), Mat2{0.8, -0.6, 0.6, 0.8})}};
}

inline std::vector<NamedNorm> all_norms() {
  auto out = strictly_convex_norms();
  for (auto& n : polyhedral_norms()) out.push_back(n);
  return out;
}

inline Vec2 random_vec(Sampler& rng, double radius) {
  return {rng.uniform(-radius, radius), rng.uniform(-radius, radius)};
}

}  // namespace normlab::test
