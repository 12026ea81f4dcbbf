#include "twistlab/surface.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace twistlab::geom {

namespace {

using EdgeRef = SurfaceMesh::EdgeRef;

// Corner sequence of a boundary walk starting from the tail of its first
// step; step i moves corner[i] -> corner[i+1].
std::vector<int> walk_corners(const SurfaceMesh& mesh,
                              const std::vector<EdgeRef>& walk) {
  std::vector<int> corners;
  corners.reserve(walk.size() + 1);
  for (const auto& step : walk) {
    const auto [tail, head] = mesh.edges[step.edge];
    const int from = step.sign > 0 ? tail : head;
    const int to = step.sign > 0 ? head : tail;
    if (corners.empty()) corners.push_back(from);
    if (corners.back() != from)
      throw std::invalid_argument("SurfaceMesh: boundary walk not connected");
    corners.push_back(to);
  }
  return corners;
}

}  // namespace

void validate_mesh(const SurfaceMesh& mesh) {
  std::vector<int> plus(mesh.num_edges(), 0), minus(mesh.num_edges(), 0);
  for (const auto& face : mesh.faces) {
    const auto corners = walk_corners(mesh, face);
    if (corners.front() != corners.back())
      throw std::invalid_argument("SurfaceMesh: face boundary not closed");
    for (const auto& step : face)
      (step.sign > 0 ? plus : minus)[step.edge] += 1;
  }
  // Closed oriented surface: every edge bounds exactly two face instances
  // with opposite orientations.
  for (int e = 0; e < mesh.num_edges(); ++e)
    if (plus[e] != 1 || minus[e] != 1)
      throw std::invalid_argument(
          "SurfaceMesh: not a coherently oriented closed surface");
  if (mesh.euler_characteristic() != 2 - 2 * mesh.genus)
    throw std::invalid_argument("SurfaceMesh: Euler characteristic mismatch");
}

SurfaceMesh genus_surface(int genus, int refine) {
  if (genus < 1) throw std::invalid_argument("genus_surface: genus < 1");
  if (refine < 0 || refine > 3)
    throw std::invalid_argument("genus_surface: refinement level 0..3");

  // 4g-gon with edge word a1 b1 a1^-1 b1^-1 ..., coned from a center vertex.
  // All polygon corners are glued to one rim vertex.
  SurfaceMesh mesh;
  mesh.genus = genus;
  mesh.num_vertices = 2;  // 0 = center, 1 = rim
  const int sides = 4 * genus;
  for (int i = 0; i < 2 * genus; ++i) mesh.edges.emplace_back(1, 1);  // word
  for (int i = 0; i < sides; ++i) mesh.edges.emplace_back(0, 1);      // spokes

  auto word_letter = [&](int pos) -> EdgeRef {
    const int handle = pos / 4;
    switch (pos % 4) {
      case 0: return {2 * handle, 1};       // a
      case 1: return {2 * handle + 1, 1};   // b
      case 2: return {2 * handle, -1};      // a^-1
      default: return {2 * handle + 1, -1}; // b^-1
    }
  };

  for (int k = 0; k < sides; ++k) {
    const int spoke_k = 2 * genus + k;
    const int spoke_next = 2 * genus + (k + 1) % sides;
    mesh.faces.push_back(
        {EdgeRef{spoke_k, 1}, word_letter(k), EdgeRef{spoke_next, -1}});
  }
  for (int i = 0; i < 2 * genus; ++i)
    mesh.basis_loops.push_back({EdgeRef{i, 1}});

  for (int r = 0; r < refine; ++r) {
    SurfaceMesh fine;
    fine.genus = mesh.genus;
    fine.num_vertices = mesh.num_vertices + mesh.num_edges();
    // halves of edge e: 2e (tail -> mid), 2e+1 (mid -> head)
    for (int e = 0; e < mesh.num_edges(); ++e) {
      const int mid = mesh.num_vertices + e;
      fine.edges.emplace_back(mesh.edges[e].first, mid);
      fine.edges.emplace_back(mid, mesh.edges[e].second);
    }
    // per-face midpoint triangle edges
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
      const auto& face = mesh.faces[f];
      if (face.size() != 3)
        throw std::invalid_argument("genus_surface: refinement needs triangles");
      const int base = static_cast<int>(fine.edges.size());
      const int m0 = mesh.num_vertices + face[0].edge;
      const int m1 = mesh.num_vertices + face[1].edge;
      const int m2 = mesh.num_vertices + face[2].edge;
      fine.edges.emplace_back(m0, m1);
      fine.edges.emplace_back(m1, m2);
      fine.edges.emplace_back(m2, m0);
      auto half = [&](const EdgeRef& step, int which) -> EdgeRef {
        // the `which`-th half of the step in walk direction
        if (step.sign > 0) return {2 * step.edge + which, 1};
        return {2 * step.edge + (1 - which), -1};
      };
      // corner triangles and the central triangle
      fine.faces.push_back({half(face[0], 1), half(face[1], 0),
                            EdgeRef{base, -1}});
      fine.faces.push_back({half(face[1], 1), half(face[2], 0),
                            EdgeRef{base + 1, -1}});
      fine.faces.push_back({half(face[2], 1), half(face[0], 0),
                            EdgeRef{base + 2, -1}});
      fine.faces.push_back(
          {EdgeRef{base, 1}, EdgeRef{base + 1, 1}, EdgeRef{base + 2, 1}});
    }
    for (const auto& loop : mesh.basis_loops) {
      std::vector<EdgeRef> refined;
      for (const auto& step : loop) {
        if (step.sign > 0) {
          refined.push_back({2 * step.edge, 1});
          refined.push_back({2 * step.edge + 1, 1});
        } else {
          refined.push_back({2 * step.edge + 1, -1});
          refined.push_back({2 * step.edge, -1});
        }
      }
      fine.basis_loops.push_back(std::move(refined));
    }
    mesh = std::move(fine);
  }

  validate_mesh(mesh);
  return mesh;
}

double loop_period(const SurfaceMesh& mesh, const MeshCocycle& theta,
                   const std::vector<EdgeRef>& loop) {
  (void)mesh;
  double p = 0.0;
  for (const auto& step : loop) p += step.sign * theta.edge_values[step.edge];
  return p;
}

MeshCocycle harmonic_twist(const SurfaceMesh& mesh,
                           const Eigen::VectorXd& periods) {
  if (periods.size() != static_cast<Eigen::Index>(mesh.basis_loops.size()))
    throw std::invalid_argument("harmonic_twist: period count != basis size");
  const int E = mesh.num_edges();
  const int F = mesh.num_faces();
  const int rows = F + static_cast<int>(mesh.basis_loops.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, E);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
  for (int f = 0; f < F; ++f)
    for (const auto& step : mesh.faces[f]) A(f, step.edge) += step.sign;
  for (std::size_t l = 0; l < mesh.basis_loops.size(); ++l) {
    for (const auto& step : mesh.basis_loops[l])
      A(F + l, step.edge) += step.sign;
    b[F + l] = periods[l];
  }
  // Minimum-norm cocycle with the prescribed periods.
  Eigen::VectorXd x = A.completeOrthogonalDecomposition().solve(b);
  if ((A * x - b).norm() > 1e-10 * (1.0 + b.norm()))
    throw std::runtime_error("harmonic_twist: inconsistent period system");

  MeshCocycle theta;
  theta.edge_values = x;
  theta.periods = periods;
  return theta;
}

std::vector<int> integer_cut_cocycle(const SurfaceMesh& mesh,
                                     int basis_index) {
  if (basis_index < 0 ||
      basis_index >= static_cast<int>(mesh.basis_loops.size()))
    throw std::invalid_argument("integer_cut_cocycle: bad basis index");
  Eigen::VectorXd periods =
      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.basis_loops.size()));
  periods[basis_index] = 1.0;
  // Solve in reals, then round; the rounded vector is verified to be an
  // exact integer cocycle with the requested periods.
  MeshCocycle real_cocycle = harmonic_twist(mesh, periods);
  std::vector<int> cut(mesh.num_edges());

  // The minimum-norm solution need not be integral; lift to integers by
  // clearing fractional parts along a spanning tree gauge.  Solve
  // u = round(x - d0 h) where h makes the result integral: use breadth-first
  // vertex potentials chosen so every tree edge gets value 0, then the
  // remaining values are the (integral) periods of the class.
  std::vector<double> potential(mesh.num_vertices,
                                std::numeric_limits<double>::quiet_NaN());
  std::vector<int> order{0};
  potential[0] = 0.0;
  std::vector<char> in_tree(mesh.num_edges(), 0);
  bool grew = true;
  while (grew) {
    grew = false;
    for (int e = 0; e < mesh.num_edges(); ++e) {
      const auto [u, v] = mesh.edges[e];
      if (!std::isnan(potential[u]) && std::isnan(potential[v])) {
        potential[v] = potential[u] + real_cocycle.edge_values[e];
        in_tree[e] = 1;
        grew = true;
      } else if (std::isnan(potential[u]) && !std::isnan(potential[v])) {
        potential[u] = potential[v] - real_cocycle.edge_values[e];
        in_tree[e] = 1;
        grew = true;
      }
    }
  }
  for (int v = 0; v < mesh.num_vertices; ++v)
    if (std::isnan(potential[v]))
      throw std::runtime_error("integer_cut_cocycle: mesh not connected");
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const auto [u, v] = mesh.edges[e];
    const double gauge_fixed =
        real_cocycle.edge_values[e] - (potential[v] - potential[u]);
    cut[e] = static_cast<int>(std::lround(gauge_fixed));
    if (std::abs(gauge_fixed - cut[e]) > 1e-8)
      throw std::runtime_error("integer_cut_cocycle: class not integral");
  }
  // Verify the cut is a cocycle with the requested periods.
  for (const auto& face : mesh.faces) {
    int sum = 0;
    for (const auto& step : face) sum += step.sign * cut[step.edge];
    if (sum != 0) throw std::runtime_error("integer_cut_cocycle: not closed");
  }
  for (std::size_t l = 0; l < mesh.basis_loops.size(); ++l) {
    int p = 0;
    for (const auto& step : mesh.basis_loops[l]) p += step.sign * cut[step.edge];
    if (p != (static_cast<int>(l) == basis_index ? 1 : 0))
      throw std::runtime_error("integer_cut_cocycle: wrong periods");
  }
  return cut;
}

namespace {

// Right multiplication by a_b on the commutant coordinates of a free module:
// a_b^T (x) I_mult.
vn::Mat lift_right_action(const vn::Mat& a, int mult) {
  const int d = static_cast<int>(a.rows());
  vn::Mat out = vn::Mat::Zero(d * mult, d * mult);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      out.block(i * mult, j * mult, mult, mult) =
          a(j, i) * vn::Mat::Identity(mult, mult);
  return out;
}

struct MetricWeights {
  Eigen::VectorXd g0, g1, g2;  // diagonal inner-product weights per degree
};

MetricWeights metric_weights(const SurfaceMesh& mesh) {
  MetricWeights w;
  const int V = mesh.num_vertices, E = mesh.num_edges(), F = mesh.num_faces();
  if (mesh.edge_lengths.empty()) {
    w.g0 = Eigen::VectorXd::Ones(V);
    w.g1 = Eigen::VectorXd::Ones(E);
    w.g2 = Eigen::VectorXd::Ones(F);
    return w;
  }
  if (static_cast<int>(mesh.edge_lengths.size()) != E)
    throw std::invalid_argument("SurfaceMesh: edge length count");
  w.g0 = Eigen::VectorXd::Zero(V);
  w.g1 = Eigen::VectorXd::Zero(E);
  w.g2 = Eigen::VectorXd::Zero(F);
  for (int f = 0; f < F; ++f) {
    const auto& face = mesh.faces[f];
    if (face.size() != 3)
      throw std::invalid_argument("SurfaceMesh: metric needs triangles");
    const double a = mesh.edge_lengths[face[0].edge];
    const double b = mesh.edge_lengths[face[1].edge];
    const double c = mesh.edge_lengths[face[2].edge];
    const double s = 0.5 * (a + b + c);
    const double area2 = s * (s - a) * (s - b) * (s - c);
    if (area2 <= 0.0)
      throw std::invalid_argument("SurfaceMesh: degenerate triangle metric");
    const double area = std::sqrt(area2);
    w.g2[f] = 1.0 / area;
    const auto corners = walk_corners(mesh, face);
    for (int i = 0; i < 3; ++i) {
      w.g1[face[i].edge] += area / 3.0;
      w.g0[corners[i]] += area / 3.0;
    }
  }
  for (int e = 0; e < E; ++e)
    w.g1[e] /= mesh.edge_lengths[e] * mesh.edge_lengths[e];
  return w;
}

}  // namespace

chain::FiniteComplex build_surface_complex(
    const SurfaceMesh& mesh, const MeshCocycle& theta,
    const vn::HilbertianModule& fiber, double s,
    const std::vector<vn::AlgebraElement>* edge_unitaries) {
  validate_mesh(mesh);
  if (!fiber.is_free())
    throw std::invalid_argument("build_surface_complex: fiber must be free");
  if (theta.edge_values.size() != mesh.num_edges())
    throw std::invalid_argument("build_surface_complex: cocycle size");
  if (edge_unitaries &&
      static_cast<int>(edge_unitaries->size()) != mesh.num_edges())
    throw std::invalid_argument("build_surface_complex: unitary count");

  const auto& alg = fiber.algebra();
  const int V = mesh.num_vertices, E = mesh.num_edges(), F = mesh.num_faces();
  const int mult = fiber.multiplicity();
  const MetricWeights mw = metric_weights(mesh);

  std::vector<vn::HilbertianModule> modules{
      vn::HilbertianModule::free(fiber.algebra_ptr(), mult * V),
      vn::HilbertianModule::free(fiber.algebra_ptr(), mult * E),
      vn::HilbertianModule::free(fiber.algebra_ptr(), mult * F)};

  chain::BlockMap d0, d1;
  for (std::size_t b = 0; b < alg.block_count(); ++b) {
    const int m = alg.block_dim(b) * mult;
    auto I = [&]() { return vn::Mat::Identity(m, m); };
    // transport along edge e (tail -> head) in block b
    auto rho = [&](int e) -> vn::Mat {
      vn::Mat t = std::exp(-s * theta.edge_values[e]) * I();
      if (edge_unitaries)
        t = t * lift_right_action((*edge_unitaries)[e].blocks[b], mult);
      return t;
    };

    vn::Mat D0 = vn::Mat::Zero(E * m, V * m);
    for (int e = 0; e < E; ++e) {
      const auto [tail, head] = mesh.edges[e];
      // (d psi)(e) = rho(e)^{-1} psi(head) - psi(tail), fiber at the tail
      D0.block(e * m, head * m, m, m) += rho(e).inverse();
      D0.block(e * m, tail * m, m, m) -= I();
    }

    vn::Mat D1 = vn::Mat::Zero(F * m, E * m);
    for (int f = 0; f < F; ++f) {
      // walk transports back to the starting corner of the face
      vn::Mat back = I();  // T_i : fiber at corner i -> fiber at corner 0
      for (const auto& step : mesh.faces[f]) {
        const vn::Mat step_rho =
            step.sign > 0 ? rho(step.edge) : vn::Mat(rho(step.edge).inverse());
        const vn::Mat next = back * step_rho.inverse();
        // the edge fiber sits at the stored tail: corner i for a positive
        // step, corner i+1 for a negative one
        const vn::Mat& coeff = step.sign > 0 ? back : next;
        D1.block(f * m, step.edge * m, m, m) +=
            static_cast<double>(step.sign) * coeff;
        back = next;
      }
    }

    // absorb the metric: d~ = G_{j+1}^{1/2} D G_j^{-1/2}
    for (int e = 0; e < E; ++e) {
      const double we = std::sqrt(mw.g1[e]);
      D0.middleRows(e * m, m) *= we;
      D1.middleCols(e * m, m) /= we;
    }
    for (int v = 0; v < V; ++v)
      D0.middleCols(v * m, m) /= std::sqrt(mw.g0[v]);
    for (int f = 0; f < F; ++f)
      D1.middleRows(f * m, m) *= std::sqrt(mw.g2[f]);

    d0.blocks.push_back(std::move(D0));
    d1.blocks.push_back(std::move(D1));
  }

  return chain::FiniteComplex(std::move(modules), {d0, d1});
}

CoverResult build_cover(const SurfaceMesh& base, const MeshCocycle& theta,
                        const std::vector<int>& cut, int k) {
  if (k < 1) throw std::invalid_argument("build_cover: k < 1");
  if (static_cast<int>(cut.size()) != base.num_edges())
    throw std::invalid_argument("build_cover: cut size");
  bool has_period = false;
  for (const auto& loop : base.basis_loops) {
    int p = 0;
    for (const auto& step : loop) p += step.sign * cut[step.edge];
    if (p != 0) has_period = true;
  }
  if (!has_period)
    throw std::invalid_argument("build_cover: direction has zero period");

  const int V = base.num_vertices, E = base.num_edges(), F = base.num_faces();
  auto mod = [&](int m) { return ((m % k) + k) % k; };

  CoverResult out;
  out.mesh.genus = k * (base.genus - 1) + 1;  // chi multiplies by k
  out.mesh.num_vertices = V * k;
  out.mesh.edges.resize(E * k);
  out.twist.edge_values.resize(E * k);
  if (!base.edge_lengths.empty()) out.mesh.edge_lengths.resize(E * k);
  for (int e = 0; e < E; ++e)
    for (int m = 0; m < k; ++m) {
      const auto [tail, head] = base.edges[e];
      out.mesh.edges[e * k + m] = {tail * k + m,
                                   head * k + mod(m + cut[e])};
      out.twist.edge_values[e * k + m] = theta.edge_values[e];
      if (!base.edge_lengths.empty())
        out.mesh.edge_lengths[e * k + m] = base.edge_lengths[e];
    }
  for (int f = 0; f < F; ++f)
    for (int m = 0; m < k; ++m) {
      std::vector<EdgeRef> walk;
      int layer = m;
      for (const auto& step : base.faces[f]) {
        if (step.sign > 0) {
          walk.push_back({step.edge * k + layer, 1});
          layer = mod(layer + cut[step.edge]);
        } else {
          layer = mod(layer - cut[step.edge]);
          walk.push_back({step.edge * k + layer, -1});
        }
      }
      out.mesh.faces.push_back(std::move(walk));
    }
  // Pull back the homology basis: each base loop at layer 0 closes up after
  // as many traversals as its cut period requires; store the single-layer
  // walks only when they close (period 0 loops), otherwise store the full
  // k-traversal loop.
  for (const auto& loop : base.basis_loops) {
    int period = 0;
    for (const auto& step : loop) period += step.sign * cut[step.edge];
    const int traversals = period == 0 ? 1 : k;
    std::vector<EdgeRef> lifted;
    int layer = 0;
    for (int t = 0; t < traversals; ++t)
      for (const auto& step : loop) {
        if (step.sign > 0) {
          lifted.push_back({step.edge * k + layer, 1});
          layer = mod(layer + cut[step.edge]);
        } else {
          layer = mod(layer - cut[step.edge]);
          lifted.push_back({step.edge * k + layer, -1});
        }
      }
    out.mesh.basis_loops.push_back(std::move(lifted));
  }
  out.deck_vertex_map.resize(V * k);
  for (int v = 0; v < V; ++v)
    for (int m = 0; m < k; ++m)
      out.deck_vertex_map[v * k + m] = v * k + mod(m + 1);

  out.twist.periods = theta.periods;  // period data refers to the base basis
  validate_mesh(out.mesh);
  return out;
}

std::vector<double> tower_betti(const SurfaceMesh& mesh,
                                const MeshCocycle& theta,
                                const std::vector<int>& cut, int k,
                                double s) {
  auto alg = vn::VNAlgebra::cyclic_group(k);
  auto fiber = vn::HilbertianModule::free(alg, 1);
  std::vector<vn::AlgebraElement> unitaries;
  unitaries.reserve(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    vn::AlgebraElement u = vn::AlgebraElement::zero(*alg);
    for (int l = 0; l < k; ++l)
      u.blocks[l](0, 0) =
          std::polar(1.0, 2.0 * M_PI * l * cut[e] / static_cast<double>(k));
    unitaries.push_back(std::move(u));
  }
  auto complex = build_surface_complex(mesh, theta, fiber, s, &unitaries);
  std::vector<double> betti;
  for (int j = 0; j <= 2; ++j) betti.push_back(chain::l2_betti(complex, j));
  return betti;
}

chain::FiniteComplex dual_surface_complex(const SurfaceMesh& mesh,
                                          const MeshCocycle& theta,
                                          const vn::HilbertianModule& fiber,
                                          double s) {
  auto primal = build_surface_complex(mesh, theta, fiber, s);
  // Dual cell structure: vertices <-> faces, edges self-paired.  The twisted
  // dual coboundaries are the transposes of the primal ones with the inverse
  // holonomy weights, which is exactly the adjoint complex read backwards.
  std::vector<vn::HilbertianModule> modules{primal.module(2), primal.module(1),
                                            primal.module(0)};
  chain::BlockMap d0, d1;
  for (std::size_t b = 0; b < primal.algebra().block_count(); ++b) {
    d0.blocks.push_back(primal.differential(1).blocks[b].transpose());
    d1.blocks.push_back(primal.differential(0).blocks[b].transpose());
  }
  return chain::FiniteComplex(std::move(modules), {d0, d1});
}

}  // namespace twistlab::geom
