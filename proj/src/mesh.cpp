#include "warplab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>

#include "warplab/errors.hpp"
#include "warplab/format.hpp"
#include "warplab/parallel.hpp"

namespace warplab {

std::vector<std::vector<std::vector<int>>> kuhn_simplices(int m) {
  std::vector<int> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<std::vector<int>>> out;
  do {
    std::vector<std::vector<int>> simplex;
    std::vector<int> corner(static_cast<std::size_t>(m), 0);
    simplex.push_back(corner);
    for (int axis : perm) {
      corner[static_cast<std::size_t>(axis)] = 1;
      simplex.push_back(corner);
    }
    out.push_back(std::move(simplex));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

Vec MeshedSubmanifold::param_delta(const Vec& a, const Vec& b) const {
  Vec d = b - a;
  for (int k = 0; k < param_dim; ++k) {
    const auto& ax = domain[static_cast<std::size_t>(k)];
    if (!ax.wrap) continue;
    const double P = ax.period();
    d[k] -= P * std::round(d[k] / P);
  }
  return d;
}

std::vector<Vec> MeshedSubmanifold::local_params(std::size_t s) const {
  const auto idx = simplex(s);
  std::vector<Vec> out;
  out.reserve(idx.size());
  const Vec& p0 = vertices[static_cast<std::size_t>(idx[0])].param;
  out.push_back(p0);
  for (std::size_t k = 1; k < idx.size(); ++k)
    out.push_back(p0 + param_delta(p0, vertices[static_cast<std::size_t>(idx[k])].param));
  return out;
}

Mat MeshedSubmanifold::simplex_metric(std::size_t s) const {
  const auto idx = simplex(s);
  Mat G = Mat::Zero(param_dim, param_dim);
  for (int v : idx) G += vertices[static_cast<std::size_t>(v)].metric;
  return G / static_cast<double>(idx.size());
}

double MeshedSubmanifold::max_r() const {
  double r = 0.0;
  for (const auto& v : vertices) r = std::max(r, v.r);
  return r;
}

double MeshedSubmanifold::min_r() const {
  double r = std::numeric_limits<double>::infinity();
  for (const auto& v : vertices) r = std::min(r, v.r);
  return r;
}

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

void dijkstra(MeshedSubmanifold& M) {
  const std::size_t nv = M.vertices.size();
  std::vector<std::size_t> offset(nv + 1, 0);
  for (const auto& e : M.edges) {
    ++offset[static_cast<std::size_t>(e.a) + 1];
    ++offset[static_cast<std::size_t>(e.b) + 1];
  }
  std::partial_sum(offset.begin(), offset.end(), offset.begin());
  std::vector<std::pair<int, double>> adj(offset.back());
  std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
  for (const auto& e : M.edges) {
    adj[fill[static_cast<std::size_t>(e.a)]++] = {e.b, e.length};
    adj[fill[static_cast<std::size_t>(e.b)]++] = {e.a, e.length};
  }

  M.rho.assign(nv, std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  M.rho[static_cast<std::size_t>(M.base_vertex)] = 0.0;
  queue.emplace(0.0, M.base_vertex);
  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (d > M.rho[static_cast<std::size_t>(v)]) continue;
    for (std::size_t k = offset[static_cast<std::size_t>(v)]; k < offset[static_cast<std::size_t>(v) + 1]; ++k) {
      const auto [w, len] = adj[k];
      const double nd = d + len;
      if (nd < M.rho[static_cast<std::size_t>(w)]) {
        M.rho[static_cast<std::size_t>(w)] = nd;
        queue.emplace(nd, w);
      }
    }
  }
}

}  // namespace

MeshedSubmanifold mesh(const ParametricImmersion& I, const MeshResolution& resolution, int threads) {
  const int m = I.param_dim();
  if (static_cast<int>(resolution.counts.size()) != m)
    throw MeshError("mesh: resolution needs " + std::to_string(m) + " per-axis counts");

  MeshedSubmanifold M;
  M.param_dim = m;
  M.ambient_dim = I.ambient_dim();
  M.domain = I.domain();
  M.counts = resolution.counts;
  M.compact = I.compact();

  std::size_t nv = 1;
  for (int k = 0; k < m; ++k) {
    const int c = resolution.counts[static_cast<std::size_t>(k)];
    const bool wrap = M.domain[static_cast<std::size_t>(k)].wrap;
    if (c < (wrap ? 3 : 2))
      throw MeshError("mesh: axis " + std::to_string(k + 1) + " needs at least " + (wrap ? "3" : "2") + " vertices");
    nv *= static_cast<std::size_t>(c);
  }

  // axis 0 varies fastest
  auto unflatten = [&](std::size_t idx) {
    std::vector<int> mi(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
      const auto c = static_cast<std::size_t>(M.counts[static_cast<std::size_t>(k)]);
      mi[static_cast<std::size_t>(k)] = static_cast<int>(idx % c);
      idx /= c;
    }
    return mi;
  };
  auto flatten = [&](const std::vector<int>& mi) {
    std::size_t idx = 0;
    for (int k = m - 1; k >= 0; --k) idx = idx * static_cast<std::size_t>(M.counts[static_cast<std::size_t>(k)]) + static_cast<std::size_t>(mi[static_cast<std::size_t>(k)]);
    return idx;
  };

  M.vertices.resize(nv);
  parallel_for(nv, threads, [&](std::size_t v) {
    const auto mi = unflatten(v);
    Vec u(m);
    bool boundary = false;
    for (int k = 0; k < m; ++k) {
      const auto& ax = M.domain[static_cast<std::size_t>(k)];
      const int c = M.counts[static_cast<std::size_t>(k)];
      const int i = mi[static_cast<std::size_t>(k)];
      if (ax.wrap) {
        u[k] = ax.lo + ax.period() * i / c;
      } else {
        u[k] = (i == c - 1) ? ax.hi : ax.lo + (ax.hi - ax.lo) * i / (c - 1);
        if (!ax.polar) boundary = boundary || i == 0 || i == c - 1;
      }
    }
    const SurfaceGeometry geo = surface_geometry(I, u);
    auto& out = M.vertices[v];
    out.param = u;
    out.point = geo.point;
    out.r = geo.r;
    out.metric = geo.induced;
    out.sff = geo.sff_norm;
    out.mean_curvature = geo.mean_curvature;
    out.grad_r_tangent = geo.r < AmbientChart::pole_exclusion ? std::numeric_limits<double>::quiet_NaN()
                                                               : extrinsic_quantities(geo).grad_r_tangent_norm;
    out.on_boundary = boundary;
  });

  // cells and Kuhn simplices
  const auto kuhn = kuhn_simplices(m);
  std::vector<int> cell_counts(static_cast<std::size_t>(m));
  std::size_t ncells = 1;
  for (int k = 0; k < m; ++k) {
    const int c = M.counts[static_cast<std::size_t>(k)];
    cell_counts[static_cast<std::size_t>(k)] = M.domain[static_cast<std::size_t>(k)].wrap ? c : c - 1;
    ncells *= static_cast<std::size_t>(cell_counts[static_cast<std::size_t>(k)]);
  }
  M.simplex_vertices.reserve(ncells * kuhn.size() * static_cast<std::size_t>(m + 1));
  std::vector<int> base(static_cast<std::size_t>(m));
  std::vector<int> corner(static_cast<std::size_t>(m));
  for (std::size_t cell = 0; cell < ncells; ++cell) {
    std::size_t rem = cell;
    for (int k = 0; k < m; ++k) {
      const auto c = static_cast<std::size_t>(cell_counts[static_cast<std::size_t>(k)]);
      base[static_cast<std::size_t>(k)] = static_cast<int>(rem % c);
      rem /= c;
    }
    for (const auto& simplex : kuhn) {
      for (const auto& offset : simplex) {
        for (int k = 0; k < m; ++k)
          corner[static_cast<std::size_t>(k)] =
              (base[static_cast<std::size_t>(k)] + offset[static_cast<std::size_t>(k)]) % M.counts[static_cast<std::size_t>(k)];
        M.simplex_vertices.push_back(static_cast<int>(flatten(corner)));
      }
    }
  }
  const std::size_t ns = M.simplex_vertices.size() / static_cast<std::size_t>(m + 1);

  const double mfact = factorial(m);
  M.simplex_volume.resize(ns);
  parallel_for(ns, threads, [&](std::size_t s) {
    const auto p = M.local_params(s);
    Mat E(m, m);
    for (int k = 0; k < m; ++k) E.col(k) = p[static_cast<std::size_t>(k + 1)] - p[0];
    const Mat G = M.simplex_metric(s);
    M.simplex_volume[s] = std::sqrt(std::max(0.0, (E.transpose() * G * E).determinant())) / mfact;
  });
  std::vector<std::size_t> degenerate;
  for (std::size_t s = 0; s < ns; ++s)
    if (!(M.simplex_volume[s] >= 1e-14)) degenerate.push_back(s);
  if (!degenerate.empty()) {
    std::ostringstream os;
    os << "mesh: " << degenerate.size() << " degenerate simplices (volume < 1e-14), e.g. cells";
    for (std::size_t k = 0; k < std::min<std::size_t>(degenerate.size(), 5); ++k)
      os << ' ' << degenerate[k] / kuhn.size();
    throw MeshError(os.str());
  }

  // unique edges
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(ns * static_cast<std::size_t>(m * (m + 1) / 2));
  for (std::size_t s = 0; s < ns; ++s) {
    const auto idx = M.simplex(s);
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b) pairs.emplace_back(std::min(idx[a], idx[b]), std::max(idx[a], idx[b]));
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  M.edges.resize(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t e) {
    const auto [a, b] = pairs[e];
    const Vec& pa = M.vertices[static_cast<std::size_t>(a)].param;
    const Vec d = M.param_delta(pa, M.vertices[static_cast<std::size_t>(b)].param);
    const Mat G = induced_metric(I, pa + 0.5 * d);
    M.edges[e] = {a, b, std::sqrt(std::max(0.0, d.dot(G * d)))};
  });

  // base vertex: minimal r, lowest index on ties
  M.base_vertex = 0;
  for (std::size_t v = 1; v < nv; ++v)
    if (M.vertices[v].r < M.vertices[static_cast<std::size_t>(M.base_vertex)].r) M.base_vertex = static_cast<int>(v);
  dijkstra(M);

  M.horizon = std::numeric_limits<double>::infinity();
  if (!M.compact)
    for (const auto& v : M.vertices)
      if (v.on_boundary) M.horizon = std::min(M.horizon, v.r);
  return M;
}

void write_mesh_text(const MeshedSubmanifold& M, std::ostream& out) {
  out << "# id";
  for (int k = 1; k <= M.param_dim; ++k) out << " u" << k;
  for (int k = 1; k <= M.ambient_dim; ++k) out << " x" << k;
  out << " r rho sff gradr\n";
  for (std::size_t v = 0; v < M.vertices.size(); ++v) {
    const auto& vx = M.vertices[v];
    out << v;
    for (int k = 0; k < M.param_dim; ++k) out << ' ' << format_double(vx.param[k]);
    for (int k = 0; k < M.ambient_dim; ++k) out << ' ' << format_double(vx.point[k]);
    out << ' ' << format_double(vx.r) << ' ' << format_double(M.rho[v]) << ' ' << format_double(vx.sff) << ' '
        << format_double(vx.grad_r_tangent) << '\n';
  }
  out << "# simplices " << M.simplex_count() << '\n';
  for (std::size_t s = 0; s < M.simplex_count(); ++s) {
    const auto idx = M.simplex(s);
    for (std::size_t k = 0; k < idx.size(); ++k) out << (k ? " " : "") << idx[k];
    out << '\n';
  }
}

}  // namespace warplab
