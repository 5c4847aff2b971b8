#include "warplab/immersion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "warplab/errors.hpp"

namespace warplab {

ParametricImmersion::ParametricImmersion(std::string name, AmbientChart ambient, std::vector<ParamAxis> domain,
                                         ChartFn chart)
    : name_(std::move(name)), ambient_(std::move(ambient)), chart_(std::move(chart)) {
  set_domain(std::move(domain));
}

ParametricImmersion& ParametricImmersion::with_derivatives(JacobianFn jacobian, SecondFn second) {
  jacobian_ = std::move(jacobian);
  second_ = std::move(second);
  return *this;
}

ParametricImmersion& ParametricImmersion::with_fd_step(double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  fd_step_ = h;
  return *this;
}

ParametricImmersion& ParametricImmersion::set_compact(bool compact) {
  compact_ = compact;
  return *this;
}

void ParametricImmersion::set_domain(std::vector<ParamAxis> domain) {
  if (domain.empty()) throw ImmersionError(name_ + ": empty parameter domain");
  if (static_cast<int>(domain.size()) >= ambient_.dim())
    throw ImmersionError(name_ + ": parameter dimension must be below the ambient dimension");
  for (const auto& a : domain)
    if (!(a.hi > a.lo)) throw ImmersionError(name_ + ": parameter axis with hi <= lo");
  domain_ = std::move(domain);
}

Vec ParametricImmersion::point(const Vec& u) const { return chart_(u); }

Mat ParametricImmersion::jacobian(const Vec& u) const {
  if (jacobian_) return jacobian_(u);
  const int m = param_dim();
  Mat J(ambient_dim(), m);
  for (int i = 0; i < m; ++i) {
    const double h = fd_step_ * std::max(1.0, std::abs(u[i]));
    Vec up = u, um = u;
    up[i] += h;
    um[i] -= h;
    J.col(i) = (chart_(up) - chart_(um)) / (2.0 * h);
  }
  return J;
}

std::vector<Vec> ParametricImmersion::second_derivatives(const Vec& u) const {
  if (second_) return second_(u);
  const int m = param_dim();
  std::vector<Vec> out(static_cast<std::size_t>(m * m));
  // coarser step than the Jacobian: second differences lose two orders to roundoff
  const Vec x0 = chart_(u);
  for (int i = 0; i < m; ++i) {
    const double hi = 10.0 * fd_step_ * std::max(1.0, std::abs(u[i]));
    for (int j = i; j < m; ++j) {
      Vec d;
      if (i == j) {
        Vec up = u, um = u;
        up[i] += hi;
        um[i] -= hi;
        d = (chart_(up) - 2.0 * x0 + chart_(um)) / (hi * hi);
      } else {
        const double hj = 10.0 * fd_step_ * std::max(1.0, std::abs(u[j]));
        Vec pp = u, pm = u, mp = u, mm = u;
        pp[i] += hi, pp[j] += hj;
        pm[i] += hi, pm[j] -= hj;
        mp[i] -= hi, mp[j] += hj;
        mm[i] -= hi, mm[j] -= hj;
        d = (chart_(pp) - chart_(pm) - chart_(mp) + chart_(mm)) / (4.0 * hi * hj);
      }
      out[static_cast<std::size_t>(i * m + j)] = d;
      out[static_cast<std::size_t>(j * m + i)] = d;
    }
  }
  return out;
}

namespace {

void check_rank(const ParametricImmersion& I, const Vec& u, const Mat& G) {
  const double det = G.determinant();
  if (!(det > 1e-12)) {
    std::ostringstream os;
    os << I.name() << ": immersion degenerate at u = (" << u.transpose() << "), det g = " << det;
    throw ImmersionError(os.str());
  }
}

// Upper-triangular L with J*L g-orthonormal; Gram-Schmidt in coordinate order.
Mat gram_schmidt(const Mat& G) {
  const auto m = G.rows();
  Mat L = Mat::Zero(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    Vec c = Vec::Unit(m, a);
    for (Eigen::Index b = 0; b < a; ++b) {
      const double proj = L.col(b).dot(G * c);
      c -= proj * L.col(b);
    }
    const double len2 = c.dot(G * c);
    L.col(a) = c / std::sqrt(len2);
  }
  return L;
}

}  // namespace

Mat induced_metric(const ParametricImmersion& I, const Vec& u) {
  const Vec x = I.point(u);
  const Mat J = I.jacobian(u);
  const Mat G = J.transpose() * I.ambient().metric(x) * J;
  check_rank(I, u, G);
  return G;
}

SurfaceGeometry surface_geometry(const ParametricImmersion& I, const Vec& u) {
  const int m = I.param_dim();
  SurfaceGeometry geo;
  geo.point = I.point(u);
  geo.r = geo.point.norm();
  geo.jacobian = I.jacobian(u);
  const Mat gamb = I.ambient().metric(geo.point);
  geo.induced = geo.jacobian.transpose() * gamb * geo.jacobian;
  check_rank(I, u, geo.induced);
  geo.frame = gram_schmidt(geo.induced);

  const auto second = I.second_derivatives(u);
  const Christoffel gamma = I.ambient().christoffel(geo.point);
  const Mat Ginv = geo.induced.inverse();
  const Mat to_tangent = Ginv * geo.jacobian.transpose() * gamb;  // m x n

  // g-orthonormal normal frame: coordinate axes with their tangential part removed, pivoted
  // Gram-Schmidt by largest remaining norm (lowest index on ties).
  const auto n = geo.point.size();
  std::vector<Vec> candidates;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Vec e = Vec::Unit(n, k);
    candidates.push_back(e - geo.jacobian * (to_tangent * e));
  }
  std::vector<Vec> normals;
  std::vector<bool> used(candidates.size(), false);
  for (Eigen::Index alpha = 0; alpha < n - m; ++alpha) {
    std::size_t best = candidates.size();
    double best_norm = 0.0;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      if (used[k]) continue;
      const double nk = candidates[k].dot(gamb * candidates[k]);
      if (nk > best_norm) {
        best_norm = nk;
        best = k;
      }
    }
    if (best == candidates.size() || !(best_norm > 0.0)) throw ImmersionError(I.name() + ": normal space is degenerate");
    used[best] = true;
    const Vec nu = candidates[best] / std::sqrt(best_norm);
    for (std::size_t k = 0; k < candidates.size(); ++k)
      if (!used[k]) candidates[k] -= nu.dot(gamb * candidates[k]) * nu;
    normals.push_back(nu);
  }

  // normal components of nabla_{d_i} d_j
  const auto q = static_cast<Eigen::Index>(normals.size());
  std::vector<Vec> coeff(static_cast<std::size_t>(m * m));
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      const Vec cov = second[static_cast<std::size_t>(i * m + j)] +
                      gamma.contract(geo.jacobian.col(i), geo.jacobian.col(j));
      const Vec g_cov = gamb * cov;
      Vec c(q);
      for (Eigen::Index a = 0; a < q; ++a) c[a] = normals[static_cast<std::size_t>(a)].dot(g_cov);
      coeff[static_cast<std::size_t>(i * m + j)] = c;
      coeff[static_cast<std::size_t>(j * m + i)] = c;
    }
  }

  geo.sff.assign(static_cast<std::size_t>(m * m), Vec::Zero(n));
  Vec trace = Vec::Zero(q);
  double norm2 = 0.0;
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      Vec c = Vec::Zero(q);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          const double w = geo.frame(i, a) * geo.frame(j, b);
          if (w != 0.0) c += w * coeff[static_cast<std::size_t>(i * m + j)];
        }
      norm2 += c.squaredNorm();
      if (a == b) trace += c;
      Vec B = Vec::Zero(n);
      for (Eigen::Index k = 0; k < q; ++k) B += c[k] * normals[static_cast<std::size_t>(k)];
      geo.sff[static_cast<std::size_t>(a * m + b)] = std::move(B);
    }
  }
  geo.sff_norm = std::sqrt(std::max(0.0, norm2));
  geo.mean_curvature = trace.norm();
  return geo;
}

double sff_norm(const ParametricImmersion& I, const Vec& u) { return surface_geometry(I, u).sff_norm; }

ExtrinsicQuantities extrinsic_quantities(const SurfaceGeometry& geo) {
  if (geo.r < AmbientChart::pole_exclusion) throw DomainError("extrinsic_quantities: chart hits the pole");
  // g(V, grad r) = <V, X^> for every V, so the tangential coefficients only need J^T X^.
  const Vec xhat = geo.point / geo.r;
  const Vec b = geo.jacobian.transpose() * xhat;
  const double t2 = b.dot(geo.induced.ldlt().solve(b));
  return {geo.r, std::sqrt(std::clamp(t2, 0.0, 1.0))};
}

ExtrinsicQuantities extrinsic_quantities(const ParametricImmersion& I, const Vec& u) {
  const Vec x = I.point(u);
  const double r = x.norm();
  if (r < AmbientChart::pole_exclusion) throw DomainError("extrinsic_quantities: chart hits the pole");
  const Mat J = I.jacobian(u);
  const Mat G = J.transpose() * I.ambient().metric(x) * J;
  check_rank(I, u, G);
  const Vec b = J.transpose() * (x / r);
  return {r, std::sqrt(std::clamp(b.dot(G.ldlt().solve(b)), 0.0, 1.0))};
}

Mat restricted_hessian_F(const ParametricImmersion& I, const SurfaceGeometry& geo, const RadialFunction& F) {
  if (geo.r < AmbientChart::pole_exclusion) throw DomainError("restricted_hessian_F: chart hits the pole");
  const int m = I.param_dim();
  const double r = geo.r;
  const Vec xhat = geo.point / r;
  const double eta = mean_curvature_eta(I.ambient().warping(), r);
  const double F1 = F(r, 1);
  const double F2 = F(r, 2);
  const Mat E = geo.jacobian * geo.frame;  // orthonormal frame, coordinate components
  const Vec radial = E.transpose() * xhat;  // <grad r, e_a>
  Mat H(m, m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      const double delta = (a == b) ? 1.0 : 0.0;
      const double hess_r = eta * (delta - radial[a] * radial[b]);
      const double normal_term = xhat.dot(geo.sff[static_cast<std::size_t>(a * m + b)]);
      H(a, b) = F2 * radial[a] * radial[b] + F1 * (hess_r + normal_term);
    }
  }
  return 0.5 * (H + H.transpose());
}

Mat restricted_hessian_F(const ParametricImmersion& I, const Vec& u, const RadialFunction& F) {
  return restricted_hessian_F(I, surface_geometry(I, u), F);
}

}  // namespace warplab
