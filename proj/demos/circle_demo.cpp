// Compares the oriented-arc sifBm, the shortest-arc sifBm and periodic fBm on
// the unit circle: identical on the upper half-circle, different beyond it.

#include <cstdio>
#include <numbers>

#include "sifbm/sifbm.hpp"

int main() {
  constexpr double pi = std::numbers::pi;
  const sifbm::HurstParam h{0.35};
  const double pairs[][2] = {{pi / 4, pi / 2}, {pi / 3, pi}, {pi / 4, 3 * pi / 2}, {pi / 2, 7 * pi / 4}};
  std::printf("%10s %10s %12s %12s %12s\n", "a", "b", "oriented", "shortest", "pfbm");
  for (const auto& p : pairs) {
    const auto c = sifbm::circle_covariances(h, p[0], p[1]);
    std::printf("%10.4f %10.4f %12.6f %12.6f %12.6f\n", p[0], p[1], c.oriented, c.shortest, c.periodic);
  }
}
