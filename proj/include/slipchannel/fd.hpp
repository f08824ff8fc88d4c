#pragma once
#include <vector>

namespace slipchannel {

// Fornberg's algorithm: weights of the m-th derivative at x0 for arbitrary
// nodes x[0..n-1].  Used for the one-sided closures of high-order stencils.
inline std::vector<double> fd_weights(double x0, const std::vector<double>& x, int m) {
  int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  c[0][0] = 1.0;
  double c1 = 1.0;
  for (int i = 1; i < n; ++i) {
    double c2 = 1.0;
    int mn = std::min(i, m);
    for (int j = 0; j < i; ++j) {
      double c3 = x[i] - x[j];
      c2 *= c3;
      for (int k = mn; k >= 0; --k) {
        double prev = (k > 0) ? c[j][k - 1] : 0.0;
        if (j == i - 1) {
          c[i][k] = c1 * (k * prev - (x[i - 1] - x0) * c[j][k]) / c2;
        }
        c[j][k] = ((x[i] - x0) * c[j][k] - k * prev) / c3;
      }
    }
    // Note: the j==i-1 update above must see the *old* row j, so run it last.
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][m];
  return w;
}

}  // namespace slipchannel
