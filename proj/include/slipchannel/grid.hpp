#pragma once
#include <Eigen/Dense>

namespace slipchannel {

using Eigen::VectorXd;

// Staggered layout on the reference rectangle (0,L) x (0,1).
//   u1 : vertical faces,   i = 0..nx (x = i*dx),        j = 0..ny-1 (xi centers)
//   u2 : horizontal faces, i = 0..nx-1 (x centers),     j = 0..ny   (xi = j*dxi)
//   p  : cell centers,     i = 0..nx-1,                 j = 0..ny-1
// The physical domain is recovered by the vertical stretch y = xi * h(x).
struct Grid {
  int nx = 0, ny = 0, ns = 0;
  double L = 1.0, H = 1.0;

  double dx() const { return L / nx; }
  double dxi() const { return 1.0 / ny; }
  double dxs() const { return L / ns; }

  double xf(int i) const { return i * dx(); }          // u1 face / structure-aligned x
  double xc(int i) const { return (i + 0.5) * dx(); }  // cell-center x
  double xic(int j) const { return (j + 0.5) * dxi(); }
  double xif(int j) const { return j * dxi(); }

  int n_u1() const { return (nx + 1) * ny; }
  int n_u2_all() const { return nx * (ny + 1); }
  int n_u2_int() const { return nx * (ny - 1); }
  int n_p() const { return nx * ny; }

  int iu1(int i, int j) const { return j * (nx + 1) + i; }
  int iu2(int i, int j) const { return j * nx + i; }  // into full u2 array
  int ip(int i, int j) const { return j * nx + i; }
};

}  // namespace slipchannel
