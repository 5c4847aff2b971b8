#include "warplab/ambient.hpp"

#include <cmath>
#include <sstream>

#include "warplab/errors.hpp"

namespace warplab {

Vec Christoffel::contract(const Vec& a, const Vec& b) const {
  Vec out(static_cast<Eigen::Index>(gamma.size()));
  for (std::size_t k = 0; k < gamma.size(); ++k) out[static_cast<Eigen::Index>(k)] = a.dot(gamma[k] * b);
  return out;
}

AmbientChart::AmbientChart(ModelSpace model)
    : AmbientChart(model, model.warping.analytic_derivatives() ? ChristoffelMode::analytic_space_form
                                                               : ChristoffelMode::finite_difference) {}

AmbientChart::AmbientChart(ModelSpace model, ChristoffelMode mode) : model_(std::move(model)), mode_(mode) {}

std::pair<double, double> AmbientChart::tangential_factor(double r) const {
  if (r < pole_exclusion) return {1.0, 0.0};
  const auto& w = model_.warping;
  const double wv = w.value(r);
  const double phi = (wv * wv) / (r * r);
  if (mode_ == ChristoffelMode::finite_difference) return {phi, 0.0};
  const double dphi = 2.0 * wv * (w.d1(r) * r - wv) / (r * r * r);
  return {phi, dphi};
}

Mat AmbientChart::metric(const Vec& x) const {
  const auto n = x.size();
  const double r = x.norm();
  if (r < pole_exclusion) return Mat::Identity(n, n);
  const Vec u = x / r;
  const double phi = tangential_factor(r).first;
  return phi * Mat::Identity(n, n) + (1.0 - phi) * (u * u.transpose());
}

Mat AmbientChart::inverse_metric(const Vec& x) const {
  const auto n = x.size();
  const double r = x.norm();
  if (r < pole_exclusion) return Mat::Identity(n, n);
  const Vec u = x / r;
  const Mat P = u * u.transpose();
  const double phi = tangential_factor(r).first;
  return P + (Mat::Identity(n, n) - P) / phi;
}

double AmbientChart::metric_at(const Vec& x, const Vec& v, const Vec& w) const {
  const double r = x.norm();
  if (r < pole_exclusion) return v.dot(w);
  const Vec u = x / r;
  const double vr = v.dot(u);
  const double wr = w.dot(u);
  const double phi = tangential_factor(r).first;
  return vr * wr + phi * (v.dot(w) - vr * wr);
}

std::vector<Mat> AmbientChart::metric_derivative(const Vec& x) const {
  return mode_ == ChristoffelMode::analytic_space_form ? metric_derivative_analytic(x) : metric_derivative_fd(x);
}

std::vector<Mat> AmbientChart::metric_derivative_analytic(const Vec& x) const {
  const auto n = x.size();
  std::vector<Mat> d(static_cast<std::size_t>(n), Mat::Zero(n, n));
  const double r = x.norm();
  if (r < pole_exclusion) return d;  // metric is even in x
  const Vec u = x / r;
  const auto [phi, dphi] = tangential_factor(r);
  const Mat I = Mat::Identity(n, n);
  const Mat tangential = I - u * u.transpose();
  for (Eigen::Index l = 0; l < n; ++l) {
    // d_l u_i = (delta_il - u_i u_l) / r
    const Vec du = tangential.col(l) / r;
    d[static_cast<std::size_t>(l)] =
        dphi * u[l] * tangential + (1.0 - phi) * (du * u.transpose() + u * du.transpose());
  }
  return d;
}

std::vector<Mat> AmbientChart::metric_derivative_fd(const Vec& x) const {
  const auto n = x.size();
  std::vector<Mat> d(static_cast<std::size_t>(n), Mat::Zero(n, n));
  const double r = x.norm();
  if (r < pole_exclusion) return d;
  const double h = 1e-4 * std::max(r, 1.0);
  for (Eigen::Index l = 0; l < n; ++l) {
    Vec xp = x, xm = x;
    xp[l] += h;
    xm[l] -= h;
    d[static_cast<std::size_t>(l)] = (metric(xp) - metric(xm)) / (2.0 * h);
  }
  return d;
}

Christoffel AmbientChart::christoffel(const Vec& x) const {
  const auto n = x.size();
  const auto dg = metric_derivative(x);
  const Mat ginv = inverse_metric(x);
  // first kind: first[l](i, j) = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
  std::vector<Mat> first(static_cast<std::size_t>(n), Mat::Zero(n, n));
  for (Eigen::Index l = 0; l < n; ++l)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        first[static_cast<std::size_t>(l)](i, j) =
            0.5 * (dg[static_cast<std::size_t>(i)](j, l) + dg[static_cast<std::size_t>(j)](i, l) -
                   dg[static_cast<std::size_t>(l)](i, j));
  Christoffel c;
  c.gamma.assign(static_cast<std::size_t>(n), Mat::Zero(n, n));
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index l = 0; l < n; ++l)
      if (ginv(k, l) != 0.0) c.gamma[static_cast<std::size_t>(k)] += ginv(k, l) * first[static_cast<std::size_t>(l)];
  return c;
}

Vec AmbientChart::covariant_derivative(const Vec& x, const Vec& dir,
                                       const std::function<Vec(const Vec&)>& field) const {
  const double len = dir.norm();
  const Vec y = field(x);
  if (len == 0.0) return Vec::Zero(x.size());
  const double h = 1e-4 * std::max(x.norm(), 1.0) / len;
  const Vec dy = (field(x + h * dir) - field(x - h * dir)) / (2.0 * h);
  return dy + christoffel(x).contract(dir, y);
}

Vec AmbientChart::grad_r(const Vec& x) const {
  const double r = x.norm();
  if (r < pole_exclusion) throw DomainError("grad_r: point is at the pole");
  return x / r;
}

double AmbientChart::hessian_r_fd(const Vec& x, const Vec& v) const {
  const double r = x.norm();
  if (r < pole_exclusion) throw DomainError("hessian_r_fd: point is at the pole");
  const double len = v.norm();
  if (len == 0.0) return 0.0;
  const double h = 2e-4 * r;
  if (h < 1e-12) throw NumericError("hessian_r_fd: finite-difference step underflow near the pole");
  const double hv = h / len;
  const double second = (r_of(x + hv * v) - 2.0 * r + r_of(x - hv * v)) / (hv * hv);
  Vec grad(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Vec xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    grad[k] = (r_of(xp) - r_of(xm)) / (2.0 * h);
  }
  return second - christoffel(x).contract(v, v).dot(grad);
}

}  // namespace warplab
