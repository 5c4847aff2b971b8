#include "warplab/topology.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "warplab/errors.hpp"
#include "warplab/parallel.hpp"
#include "warplab/union_find.hpp"

namespace warplab {

namespace {

enum class Side { inside, on, outside };

struct Corner {
  Vec p;
  Vec bary;  // barycentric coordinates in the parent simplex
  double r;
  Side side;
};

struct Facet {
  std::vector<Vec> corners;
  Vec bary_centroid;
};

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

double param_volume(const std::vector<Corner>& c) {
  const auto m = static_cast<Eigen::Index>(c.size() - 1);
  Mat E(m, m);
  for (Eigen::Index k = 0; k < m; ++k) E.col(k) = c[static_cast<std::size_t>(k + 1)].p - c[0].p;
  return std::abs(E.determinant());
}

// Splits along inside/outside edges until every piece is on one side of the level set.
void clip(const std::vector<Corner>& c, double t, double& inside_volume, std::vector<Facet>& facets) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].side != Side::inside) continue;
    for (std::size_t o = 0; o < c.size(); ++o) {
      if (c[o].side != Side::outside) continue;
      const double s = (t - c[i].r) / (c[o].r - c[i].r);
      const Corner p{c[i].p + s * (c[o].p - c[i].p), c[i].bary + s * (c[o].bary - c[i].bary), t, Side::on};
      auto a = c;
      a[o] = p;
      clip(a, t, inside_volume, facets);
      auto b = c;
      b[i] = p;
      clip(b, t, inside_volume, facets);
      return;
    }
  }
  const bool any_inside = std::any_of(c.begin(), c.end(), [](const Corner& k) { return k.side == Side::inside; });
  if (!any_inside) return;
  inside_volume += param_volume(c);
  Facet f;
  f.bary_centroid = Vec::Zero(c[0].bary.size());
  for (const auto& k : c) {
    if (k.side != Side::on) continue;
    f.corners.push_back(k.p);
    f.bary_centroid += k.bary;
  }
  if (f.corners.size() + 1 == c.size()) {
    f.bary_centroid /= static_cast<double>(f.corners.size());
    facets.push_back(std::move(f));
  }
}

}  // namespace

ExtrinsicBallMesh extrinsic_ball(const MeshedSubmanifold& M, double t) {
  ExtrinsicBallMesh B;
  B.parent = &M;
  B.t = t;
  const int m = M.param_dim;
  const double facet_fact = factorial(m - 1);
  for (std::size_t s = 0; s < M.simplex_count(); ++s) {
    const auto idx = M.simplex(s);
    int inside = 0;
    for (int v : idx)
      if (M.vertices[static_cast<std::size_t>(v)].r < t) ++inside;
    if (inside == 0) continue;
    if (inside == m + 1) {
      B.interior_simplices.push_back(s);
      continue;
    }
    const auto p = M.local_params(s);
    std::vector<Corner> c;
    c.reserve(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const double r = M.vertices[static_cast<std::size_t>(idx[k])].r;
      c.push_back({p[k], Vec::Unit(m + 1, static_cast<Eigen::Index>(k)), r, r < t ? Side::inside : Side::outside});
    }
    double inside_volume = 0.0;
    std::vector<Facet> facets;
    clip(c, t, inside_volume, facets);
    B.cut_simplices.push_back({s, std::min(1.0, inside_volume / param_volume(c))});
    for (auto& f : facets) {
      // induced metric interpolated linearly to the facet centroid
      Mat G = Mat::Zero(m, m);
      for (std::size_t k = 0; k < idx.size(); ++k)
        G += f.bary_centroid[static_cast<Eigen::Index>(k)] * M.vertices[static_cast<std::size_t>(idx[k])].metric;
      Mat F(m, m - 1);
      for (int k = 0; k < m - 1; ++k) F.col(k) = f.corners[static_cast<std::size_t>(k + 1)] - f.corners[0];
      const double a = std::sqrt(std::max(0.0, (F.transpose() * G * F).determinant())) / facet_fact;
      B.boundary_elements.push_back({s, std::move(f.corners), a});
    }
  }
  return B;
}

double volume(const ExtrinsicBallMesh& B) {
  const auto& M = *B.parent;
  double v = 0.0;
  for (std::size_t s : B.interior_simplices) v += M.simplex_volume[s];
  for (const auto& c : B.cut_simplices) v += c.fraction * M.simplex_volume[c.simplex];
  return v;
}

double area(const ExtrinsicBallMesh& B) {
  double a = 0.0;
  for (const auto& f : B.boundary_elements) a += f.area;
  return a;
}

std::vector<double> boundary_area_per_end(const ExtrinsicBallMesh& B) {
  const auto& M = *B.parent;
  UnionFind uf(M.vertices.size());
  for (std::size_t s = 0; s < M.simplex_count(); ++s) {
    const auto idx = M.simplex(s);
    int first = -1;
    for (int v : idx) {
      if (M.vertices[static_cast<std::size_t>(v)].r < B.t) continue;
      if (first < 0)
        first = v;
      else
        uf.unite(static_cast<std::size_t>(first), static_cast<std::size_t>(v));
    }
  }
  std::map<std::size_t, double> per_root;
  for (const auto& f : B.boundary_elements) {
    for (int v : M.simplex(f.parent)) {
      if (M.vertices[static_cast<std::size_t>(v)].r >= B.t) {
        per_root[uf.find(static_cast<std::size_t>(v))] += f.area;
        break;
      }
    }
  }
  std::vector<double> out;
  for (const auto& [root, a] : per_root) out.push_back(a);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

int count_components_outside(const MeshedSubmanifold& M, double t) {
  UnionFind uf(M.vertices.size());
  std::vector<char> used(M.vertices.size(), 0);
  for (std::size_t s = 0; s < M.simplex_count(); ++s) {
    const auto idx = M.simplex(s);
    const bool outside = std::all_of(idx.begin(), idx.end(),
                                     [&](int v) { return M.vertices[static_cast<std::size_t>(v)].r >= t; });
    if (!outside) continue;
    for (int v : idx) {
      used[static_cast<std::size_t>(v)] = 1;
      uf.unite(static_cast<std::size_t>(idx[0]), static_cast<std::size_t>(v));
    }
  }
  int count = 0;
  for (std::size_t v = 0; v < used.size(); ++v)
    if (used[v] && uf.find(v) == v) ++count;
  return count;
}

EndsScan count_ends(const MeshedSubmanifold& M, const std::vector<double>& radii, int threads, double window_fraction) {
  for (std::size_t k = 1; k < radii.size(); ++k)
    if (!(radii[k] > radii[k - 1])) throw DomainError("count_ends: radii must be strictly increasing");
  EndsScan E;
  E.radii = radii;
  E.counts.assign(radii.size(), 0);
  parallel_for(radii.size(), threads, [&](std::size_t k) { E.counts[k] = count_components_outside(M, radii[k]); });
  if (radii.empty()) return E;

  std::size_t start = radii.size() - 1;
  while (start > 0 && E.counts[start - 1] == E.counts.back()) --start;
  E.window_lo = radii[start];
  E.window_hi = radii.back();
  const double range = radii.back() - radii.front();
  if (E.window_hi - E.window_lo >= window_fraction * range) E.stabilized_count = E.counts.back();
  return E;
}

namespace {

bool in_annulus(double r, double lo, double hi) {
  constexpr double slack = 1e-12;
  return r >= lo * (1.0 - slack) && r <= hi * (1.0 + slack);
}

}  // namespace

VertexExtremum critical_point_scan(const MeshedSubmanifold& M, double t_lo, double t_hi) {
  VertexExtremum best{std::numeric_limits<double>::infinity(), 0, 0};
  for (std::size_t v = 0; v < M.vertices.size(); ++v) {
    const auto& vx = M.vertices[v];
    if (!in_annulus(vx.r, t_lo, t_hi) || std::isnan(vx.grad_r_tangent)) continue;
    ++best.samples;
    if (vx.grad_r_tangent < best.value) {
      best.value = vx.grad_r_tangent;
      best.vertex = v;
    }
  }
  if (best.samples == 0) {
    std::ostringstream os;
    os << "critical_point_scan: no mesh vertex with r in [" << t_lo << ", " << t_hi << "]";
    throw DomainError(os.str());
  }
  return best;
}

VertexExtremum convexity_scan(const MeshedSubmanifold& M, const ParametricImmersion& I, double r_lo, double r_hi,
                              const RadialFunction& F, int threads) {
  std::vector<std::size_t> region;
  for (std::size_t v = 0; v < M.vertices.size(); ++v)
    if (in_annulus(M.vertices[v].r, r_lo, r_hi) && M.vertices[v].r >= AmbientChart::pole_exclusion) region.push_back(v);
  if (region.empty()) {
    std::ostringstream os;
    os << "convexity_scan: no mesh vertex with r in [" << r_lo << ", " << r_hi << "]";
    throw DomainError(os.str());
  }
  std::vector<double> eig(region.size());
  parallel_for(region.size(), threads, [&](std::size_t k) {
    const Mat H = restricted_hessian_F(I, M.vertices[region[k]].param, F);
    eig[k] = Eigen::SelfAdjointEigenSolver<Mat>(H, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  });
  VertexExtremum best{std::numeric_limits<double>::infinity(), 0, region.size()};
  for (std::size_t k = 0; k < region.size(); ++k) {
    if (eig[k] < best.value) {
      best.value = eig[k];
      best.vertex = region[k];
    }
  }
  return best;
}

}  // namespace warplab
