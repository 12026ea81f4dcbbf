#pragma once

#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace twistlab::geom {

// Real trigonometric polynomial on the unit torus (n <= 2):
//   H(x) = sum_k [ c_k cos(2 pi k.x) + s_k sin(2 pi k.x) ].
struct TrigPoly {
  struct Term {
    int kx = 0;
    int ky = 0;
    double c = 0.0;  // cosine coefficient
    double s = 0.0;  // sine coefficient
  };
  std::vector<Term> terms;

  bool empty() const { return terms.empty(); }

  double value(double x, double y = 0.0) const {
    double v = 0.0;
    for (const auto& t : terms) {
      const double phase = 2.0 * M_PI * (t.kx * x + t.ky * y);
      v += t.c * std::cos(phase) + t.s * std::sin(phase);
    }
    return v;
  }

  std::array<double, 2> gradient(double x, double y = 0.0) const {
    std::array<double, 2> g{0.0, 0.0};
    for (const auto& t : terms) {
      const double phase = 2.0 * M_PI * (t.kx * x + t.ky * y);
      const double d = -t.c * std::sin(phase) + t.s * std::cos(phase);
      g[0] += 2.0 * M_PI * t.kx * d;
      g[1] += 2.0 * M_PI * t.ky * d;
    }
    return g;
  }

  std::array<double, 4> hessian(double x, double y = 0.0) const {
    std::array<double, 4> h{0.0, 0.0, 0.0, 0.0};  // xx, xy, yx, yy
    for (const auto& t : terms) {
      const double phase = 2.0 * M_PI * (t.kx * x + t.ky * y);
      const double dd = -t.c * std::cos(phase) - t.s * std::sin(phase);
      const double f = 4.0 * M_PI * M_PI * dd;
      h[0] += f * t.kx * t.kx;
      h[1] += f * t.kx * t.ky;
      h[2] += f * t.ky * t.kx;
      h[3] += f * t.ky * t.ky;
    }
    return h;
  }
};

// Closed 1-form on the torus in analytic form: a harmonic (constant) period
// covector plus an exact part dH.  Line integrals along straight segments
// are available in closed form, which keeps discrete holonomy flat exactly.
struct AnalyticCocycle {
  int n = 1;
  std::array<double, 2> periods{0.0, 0.0};
  TrigPoly exact;

  static AnalyticCocycle harmonic(int n, std::array<double, 2> periods) {
    AnalyticCocycle c;
    c.n = n;
    c.periods = periods;
    return c;
  }

  bool is_harmonic() const { return exact.empty(); }

  // Integral of the form along the straight segment p -> p + delta.
  double segment_integral(const std::array<double, 2>& p,
                          const std::array<double, 2>& delta) const {
    double v = periods[0] * delta[0] + periods[1] * delta[1];
    if (!exact.empty())
      v += exact.value(p[0] + delta[0], p[1] + delta[1]) -
           exact.value(p[0], p[1]);
    return v;
  }

  // Covector value at a point.
  std::array<double, 2> at(double x, double y = 0.0) const {
    auto g = exact.gradient(x, y);
    return {periods[0] + g[0], periods[1] + g[1]};
  }
};

// Real 1-cocycle on a mesh: per-edge values with vanishing coboundary,
// carrying its harmonic-period decomposition data.
struct MeshCocycle {
  Eigen::VectorXd edge_values;
  Eigen::VectorXd periods;       // over the mesh's stored basis loops
  Eigen::VectorXd exact_vertex;  // h with theta = harmonic + dh (optional)

  MeshCocycle scaled(double s) const {
    MeshCocycle c;
    c.edge_values = s * edge_values;
    c.periods = s * periods;
    if (exact_vertex.size()) c.exact_vertex = s * exact_vertex;
    return c;
  }
};

}  // namespace twistlab::geom
