#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "warplab/immersion.hpp"

namespace warplab {

/// Per-axis vertex counts. Wrapped axes place `count` vertices on [lo, hi); open axes
/// include both ends.
struct MeshResolution {
  std::vector<int> counts;
};

struct MeshVertex {
  Vec param;
  Vec point;
  double r = 0.0;
  Mat metric;  // induced, m x m
  double sff = 0.0;
  double mean_curvature = 0.0;
  /// NaN at the pole, where r is not differentiable.
  double grad_r_tangent = 0.0;
  bool on_boundary = false;
};

struct MeshEdge {
  int a = 0;
  int b = 0;
  double length = 0.0;
};

/// Simplicial sampling of an immersion: Kuhn triangulation of the parameter grid, per-vertex
/// geometric caches, induced edge lengths and graph distance rho from the base vertex.
class MeshedSubmanifold {
 public:
  int param_dim = 0;
  int ambient_dim = 0;
  std::vector<ParamAxis> domain;
  std::vector<int> counts;
  std::vector<MeshVertex> vertices;
  std::vector<int> simplex_vertices;  // flat, stride param_dim + 1
  std::vector<double> simplex_volume;
  std::vector<MeshEdge> edges;
  std::vector<double> rho;
  int base_vertex = 0;
  bool compact = false;
  /// Smallest r on the parameter-domain boundary; infinity for closed meshes.
  double horizon = 0.0;

  std::size_t simplex_count() const { return simplex_volume.size(); }
  std::span<const int> simplex(std::size_t s) const {
    const auto k = static_cast<std::size_t>(param_dim + 1);
    return {simplex_vertices.data() + s * k, k};
  }
  /// Parameter coordinates of the simplex corners with wrap-around undone relative to the
  /// first corner.
  std::vector<Vec> local_params(std::size_t s) const;
  /// Vertex average of the induced metric over the simplex corners.
  Mat simplex_metric(std::size_t s) const;
  /// Parameter difference b - a with wrapped axes folded into (-period/2, period/2].
  Vec param_delta(const Vec& a, const Vec& b) const;
  double max_r() const;
  double min_r() const;
};

/// Throws MeshError for fewer than 2 vertices on an axis (3 on wrapped axes) or for
/// simplices with Riemannian volume below 1e-14; ImmersionError on chart degeneracy.
MeshedSubmanifold mesh(const ParametricImmersion& I, const MeshResolution& resolution, int threads = 1);

/// Kuhn (Freudenthal) triangulation of the unit m-cube: m! simplices as corner offset lists.
std::vector<std::vector<std::vector<int>>> kuhn_simplices(int m);

/// Tab-free text export: header, one vertex per line `id u1..um x1..xn r rho sff gradr`,
/// then a `# simplices <count>` line and one index tuple per line.
void write_mesh_text(const MeshedSubmanifold& M, std::ostream& out);

}  // namespace warplab
