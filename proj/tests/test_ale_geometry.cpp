#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "slipchannel/ale_geometry.hpp"

using namespace slipchannel;

namespace {
VectorXd sample(const Grid& g, double (*f)(double)) {
  VectorXd out(g.ns + 1);
  for (int k = 0; k <= g.ns; ++k) out[k] = f(k * g.dxs());
  return out;
}
}  // namespace

TEST_CASE("nodal derivatives are exact on low-degree polynomials") {
  Grid g{8, 4, 16, 2.0, 1.0};
  double dx = g.dxs();
  // d1 exact for quadratics (2nd-order centered + one-sided closures)
  VectorXd f1 = sample(g, [](double x) { return 3.0 * x * x - x + 2.0; });
  VectorXd d1 = d1_nodal(f1, dx);
  for (int k = 0; k <= g.ns; ++k)
    CHECK(d1[k] == doctest::Approx(6.0 * k * dx - 1.0).epsilon(1e-12));
  // d2 exact for cubics
  VectorXd f2 = sample(g, [](double x) { return x * x * x - 2.0 * x; });
  VectorXd d2 = d2_nodal(f2, dx);
  for (int k = 0; k <= g.ns; ++k)
    CHECK(d2[k] == doctest::Approx(6.0 * k * dx).epsilon(1e-10));
  // d3 exact for quartics
  VectorXd f3 = sample(g, [](double x) { return x * x * x * x; });
  VectorXd d3 = d3_nodal(f3, dx);
  for (int k = 0; k <= g.ns; ++k)
    CHECK(d3[k] == doctest::Approx(24.0 * k * dx).epsilon(1e-9));
}

TEST_CASE("h3 seminorm matches the polynomial oracle") {
  // h = H + c x^2 (L-x)^2 has h''' = c(24x - 12L) and
  // int_0^L |h'''|^2 = 48 c^2 L^3.
  Grid g{8, 4, 64, 1.0, 0.5};
  double c = 0.7, L = g.L;
  VectorXd h(g.ns + 1);
  for (int k = 0; k <= g.ns; ++k) {
    double x = k * g.dxs();
    h[k] = g.H + c * x * x * (L - x) * (L - x);
  }
  double expect = std::sqrt(48.0 * c * c * L * L * L);
  CHECK(h3_seminorm(h, g.dxs()) == doctest::Approx(expect).epsilon(1e-3));
}

TEST_CASE("interface frame is orthonormal and outward") {
  for (double hx : {-2.0, -0.3, 0.0, 0.5, 4.0}) {
    InterfaceFrame fr = interface_frame(hx);
    CHECK(fr.nx * fr.nx + fr.ny * fr.ny == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fr.tx * fr.tx + fr.ty * fr.ty == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fr.nx * fr.tx + fr.ny * fr.ty == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(fr.S == doctest::Approx(std::sqrt(1.0 + hx * hx)).epsilon(1e-14));
    CHECK(fr.ny > 0.0);  // out of the fluid
  }
}

TEST_CASE("curvature of a circular arc is -1/R everywhere") {
  double R = 2.0;
  for (double x : {-0.5, 0.0, 0.8}) {
    double h = std::sqrt(R * R - x * x);
    double hx = -x / h;
    double hxx = -R * R / (h * h * h);
    CHECK(curvature(hx, hxx) == doctest::Approx(-1.0 / R).epsilon(1e-13));
  }
}

TEST_CASE("map round-trips physical and reference coordinates") {
  Grid g{16, 8, 32, 1.0, 0.5};
  StructureState st;
  st.h.resize(g.ns + 1);
  st.v = VectorXd::Zero(g.ns + 1);
  for (int k = 0; k <= g.ns; ++k) {
    double x = k * g.dxs();
    st.h[k] = g.H + 0.1 * std::sin(M_PI * x / g.L) * std::sin(M_PI * x / g.L);
  }
  AleMap m = build_map(st, g);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ux(0.0, g.L), uxi(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    double x = ux(rng), xi = uxi(rng);
    double y = m.to_physical_y(x, xi);
    CHECK(m.to_reference_xi(x, y) == doctest::Approx(xi).epsilon(1e-12));
  }
  // nodal h is reproduced exactly at structure nodes
  for (int k = 0; k <= g.ns; ++k)
    CHECK(m.eval_h(k * g.dxs()) == doctest::Approx(st.h[k]).epsilon(1e-14));
}

TEST_CASE("map carries consistent metric samples on the fluid grid") {
  Grid g{32, 8, 32, 1.0, 0.5};
  StructureState st;
  st.h.resize(g.ns + 1);
  st.v.resize(g.ns + 1);
  for (int k = 0; k <= g.ns; ++k) {
    double x = k * g.dxs();
    st.h[k] = g.H + 0.05 * x * x * (g.L - x) * (g.L - x);
    st.v[k] = x * (g.L - x);
  }
  AleMap m = build_map(st, g);
  // u1-face x coincide with structure nodes when ns == nx
  for (int i = 0; i <= g.nx; ++i) {
    CHECK(m.hf[i] == doctest::Approx(st.h[i]).epsilon(1e-14));
    CHECK(m.htf[i] == doctest::Approx(st.v[i]).epsilon(1e-14));
  }
  // centers are linear interpolants of the nodal values
  for (int i = 0; i < g.nx; ++i)
    CHECK(m.hc[i] == doctest::Approx(0.5 * (st.h[i] + st.h[i + 1])).epsilon(1e-14));
  // hx samples match the analytic derivative to second order
  for (int i = 0; i <= g.nx; ++i) {
    double x = i * g.dx();
    double hx = 0.05 * (2.0 * x * (g.L - x) * (g.L - x) - 2.0 * x * x * (g.L - x));
    CHECK(m.hxf[i] == doctest::Approx(hx).epsilon(5e-3));
  }
}

TEST_CASE("flat structure from initial spec") {
  Grid g{8, 4, 16, 1.0, 0.5};
  InitialSpec init;
  StructureState st = flat_structure(g, init);
  CHECK(st.h.size() == g.ns + 1);
  CHECK(st.h.minCoeff() == doctest::Approx(g.H));
  CHECK(st.h.maxCoeff() == doctest::Approx(g.H));
  CHECK(st.v.norm() == 0.0);
}

TEST_CASE("sample_linear interpolates nodal data") {
  VectorXd f(3);
  f << 0.0, 2.0, 6.0;
  CHECK(sample_linear(f, 0.5, 0.25) == doctest::Approx(1.0));
  CHECK(sample_linear(f, 0.5, 0.75) == doctest::Approx(4.0));
  CHECK(sample_linear(f, 0.5, 0.0) == doctest::Approx(0.0));
  CHECK(sample_linear(f, 0.5, 1.0) == doctest::Approx(6.0));
}
