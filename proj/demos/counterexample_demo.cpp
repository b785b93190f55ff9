// Builds the Gram matrix of four nested/crossing rectangles in R^2_+ and
// prints its smallest eigenvalue across H. The matrix stops being PSD
// somewhere above H = 1/2.

#include <cstdio>
#include <vector>

#include "sifbm/sifbm.hpp"

int main() {
  const auto coll = sifbm::IndexingCollection::rectangles(2);
  const std::vector<sifbm::IndexSet> points{sifbm::Rectangle{{1, 1}}, sifbm::Rectangle{{2, 1}},
                                            sifbm::Rectangle{{1, 2}}, sifbm::Rectangle{{2, 2}}};
  for (double h : {0.3, 0.5, 0.6, 0.65, 0.75, 0.9}) {
    const auto g = sifbm::gram(coll, sifbm::HurstParam{h}, points);
    const auto verdict = sifbm::is_psd(g);
    std::printf("H=%.2f  min eigenvalue % .6f  %s\n", h, verdict.min_eigenvalue, verdict.is_psd ? "PSD" : "not PSD");
  }

  std::vector<double> grid;
  for (int k = 1; k < 20; ++k) grid.push_back(0.05 * k);
  const auto report = sifbm::critical_h_scan(coll, points, grid);
  if (report.refined_critical_h) std::printf("PSD boundary near H = %.4f\n", *report.refined_critical_h);
}
