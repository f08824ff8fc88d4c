#include "slipchannel/ale_geometry.hpp"

#include <cmath>

#include "slipchannel/fd.hpp"

namespace slipchannel {

StructureState flat_structure(const Grid& g, const InitialSpec& init) {
  StructureState st;
  st.h = VectorXd::Constant(g.ns + 1, g.H);
  st.v = VectorXd::Zero(g.ns + 1);
  if (!init.h0.empty())
    for (int i = 0; i <= g.ns; ++i) st.h[i] = init.h0[i];
  if (!init.v0.empty())
    for (int i = 0; i <= g.ns; ++i) st.v[i] = init.v0[i];
  return st;
}

InterfaceFrame interface_frame(double hx) {
  double S = std::sqrt(1.0 + hx * hx);
  return InterfaceFrame{-hx / S, 1.0 / S, 1.0 / S, hx / S, S};
}

double curvature(double hx, double hxx) {
  double S = std::sqrt(1.0 + hx * hx);
  return hxx / (S * S * S);
}

double sample_linear(const VectorXd& nodal, double dx, double x) {
  int n = static_cast<int>(nodal.size()) - 1;
  double s = x / dx;
  int k = static_cast<int>(std::floor(s));
  if (k < 0) return nodal[0];
  if (k >= n) return nodal[n];
  double w = s - k;
  return (1.0 - w) * nodal[k] + w * nodal[k + 1];
}

namespace {

// Apply a (wm+wp+1)-wide interior stencil with one-sided closures taken from
// Fornberg weights of the same order of accuracy.
VectorXd apply_stencil(const VectorXd& f, double dx, int m, int half) {
  int n = static_cast<int>(f.size());
  VectorXd out(n);
  int width = 2 * half + 1;
  std::vector<double> xi(width);
  for (int k = 0; k < width; ++k) xi[k] = k;
  // one extra node for the one-sided closures to keep them second order
  int wos = width + 1;
  std::vector<double> xs(wos);
  for (int k = 0; k < wos; ++k) xs[k] = k;
  double scale = std::pow(dx, -m);
  auto wc = fd_weights(half, xi, m);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    if (i >= half && i + half < n) {
      for (int k = 0; k < width; ++k) acc += wc[k] * f[i - half + k];
    } else if (i < half) {
      auto w = fd_weights(i, xs, m);
      for (int k = 0; k < wos; ++k) acc += w[k] * f[k];
    } else {
      auto w = fd_weights(wos - 1 - (n - 1 - i), xs, m);
      for (int k = 0; k < wos; ++k) acc += w[k] * f[n - wos + k];
    }
    out[i] = acc * scale;
  }
  return out;
}

}  // namespace

VectorXd d1_nodal(const VectorXd& f, double dx) { return apply_stencil(f, dx, 1, 1); }
VectorXd d2_nodal(const VectorXd& f, double dx) { return apply_stencil(f, dx, 2, 1); }
VectorXd d3_nodal(const VectorXd& f, double dx) { return apply_stencil(f, dx, 3, 2); }

double h3_seminorm(const VectorXd& h, double dx) {
  VectorXd d3 = d3_nodal(h, dx);
  int n = static_cast<int>(h.size()) - 1;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    double w = (i == 0 || i == n) ? 0.5 : 1.0;
    acc += w * d3[i] * d3[i];
  }
  return std::sqrt(acc * dx);
}

AleMap build_map(const StructureState& st, const Grid& g) {
  AleMap m;
  m.grid = g;
  double dxs = g.dxs();
  m.hs = st.h;
  m.hts = st.v;
  m.hxs = d1_nodal(st.h, dxs);
  m.hxxs = d2_nodal(st.h, dxs);

  auto fill = [&](const VectorXd& src, VectorXd& face, VectorXd& cen) {
    face.resize(g.nx + 1);
    cen.resize(g.nx);
    for (int i = 0; i <= g.nx; ++i) face[i] = sample_linear(src, dxs, g.xf(i));
    for (int i = 0; i < g.nx; ++i) cen[i] = sample_linear(src, dxs, g.xc(i));
  };
  fill(m.hs, m.hf, m.hc);
  fill(m.hxs, m.hxf, m.hxc);
  fill(m.hxxs, m.hxxf, m.hxxc);
  fill(m.hts, m.htf, m.htc);
  return m;
}

double AleMap::eval_h(double x) const { return sample_linear(hs, grid.dxs(), x); }
double AleMap::eval_hx(double x) const { return sample_linear(hxs, grid.dxs(), x); }
double AleMap::eval_ht(double x) const { return sample_linear(hts, grid.dxs(), x); }

}  // namespace slipchannel
