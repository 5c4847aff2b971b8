#include "warplab/builtin.hpp"

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <memory>
#include <numbers>

#include "warplab/errors.hpp"

namespace warplab {

namespace {

using ProfileState = std::array<double, 3>;  // y, y', s

// Quintic Hermite basis on [0, 1] and its t-derivative.
struct Quintic {
  double h[6];
  double dh[6];

  explicit Quintic(double t) {
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    h[0] = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
    h[1] = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
    h[2] = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
    h[3] = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
    h[4] = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
    h[5] = 0.5 * (t3 - 2.0 * t4 + t5);
    dh[0] = -30.0 * t2 + 60.0 * t3 - 30.0 * t4;
    dh[1] = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4;
    dh[2] = 0.5 * (2.0 * t - 9.0 * t2 + 12.0 * t3 - 5.0 * t4);
    dh[3] = 30.0 * t2 - 60.0 * t3 + 30.0 * t4;
    dh[4] = -12.0 * t2 + 28.0 * t3 - 15.0 * t4;
    dh[5] = 0.5 * (3.0 * t2 - 8.0 * t3 + 5.0 * t4);
  }

  // value and derivative (in the physical variable) from endpoint data f, f', f''
  std::pair<double, double> eval(double h_, double f0, double d0, double dd0, double f1, double d1,
                                 double dd1) const {
    const double c[6] = {f0, h_ * d0, h_ * h_ * dd0, f1, h_ * d1, h_ * h_ * dd1};
    double v = 0.0, dv = 0.0;
    for (int k = 0; k < 6; ++k) {
      v += c[k] * h[k];
      dv += c[k] * dh[k];
    }
    return {v, dv / h_};
  }
};

}  // namespace

RotationalMinimalProfile::RotationalMinimalProfile(int m, double sigma_max, double spacing, double tolerance)
    : m_(m), sigma_max_(sigma_max), spacing_(spacing) {
  if (m < 2) throw ImmersionError("higher_catenoid: dimension must be >= 2");
  if (!(sigma_max > 0.0) || !(spacing > 0.0)) throw ImmersionError("higher_catenoid: bad profile range");
  namespace ode = boost::numeric::odeint;
  const double mm1 = m - 1;
  auto rhs = [mm1](const ProfileState& x, ProfileState& dxdt, double) {
    dxdt[0] = x[1];
    dxdt[1] = mm1 * std::pow(x[0], 1.0 - 2.0 * (mm1 + 1.0));
    dxdt[2] = std::pow(x[0], -mm1);
  };

  const auto count = static_cast<std::size_t>(std::ceil(sigma_max / spacing)) + 2;
  std::vector<double> times(count);
  for (std::size_t i = 0; i < count; ++i) times[i] = static_cast<double>(i) * spacing;
  y_.reserve(count);
  dy_.reserve(count);
  s_.reserve(count);

  ProfileState x{1.0, 0.0, 0.0};
  auto stepper = ode::make_controlled(tolerance, tolerance, ode::runge_kutta_dopri5<ProfileState>());
  try {
    ode::integrate_times(stepper, rhs, x, times.begin(), times.end(), spacing / 8.0,
                         [&](const ProfileState& st, double) {
                           if (!std::isfinite(st[0]) || !std::isfinite(st[1]) || !std::isfinite(st[2]))
                             throw NumericError("higher_catenoid: profile ODE blew up");
                           y_.push_back(st[0]);
                           dy_.push_back(st[1]);
                           s_.push_back(st[2]);
                         });
  } catch (const ode::step_adjustment_error& e) {
    throw NumericError(std::string("higher_catenoid: step size control failed: ") + e.what());
  }
  if (y_.size() != count) throw NumericError("higher_catenoid: profile integration stopped early");

  for (std::size_t i = 0; i < count; ++i) {
    const double fi = 1.0 / std::sqrt(dy_[i] * dy_[i] + std::pow(y_[i], -2.0 * mm1));
    drift_ = std::max(drift_, std::abs(fi - 1.0));
  }
}

RotationalMinimalProfile::Sample RotationalMinimalProfile::at_node(std::size_t i) const {
  const double mm1 = m_ - 1;
  const double y = y_[i];
  const double dy = dy_[i];
  return {y, dy, mm1 * std::pow(y, 1.0 - 2.0 * m_), s_[i], std::pow(y, -mm1), -mm1 * std::pow(y, -static_cast<double>(m_)) * dy};
}

RotationalMinimalProfile::Sample RotationalMinimalProfile::operator()(double sigma) const {
  const bool negative = sigma < 0.0;
  const double a = std::abs(sigma);
  if (a > sigma_max_ + spacing_) throw DomainError("higher_catenoid: sigma outside the integrated profile");
  auto i = static_cast<std::size_t>(a / spacing_);
  i = std::min(i, y_.size() - 2);
  const double t = (a - static_cast<double>(i) * spacing_) / spacing_;
  const Sample p = at_node(i);
  const Sample q = at_node(i + 1);
  const Quintic basis(t);
  const auto [y, dy] = basis.eval(spacing_, p.y, p.dy, p.ddy, q.y, q.dy, q.ddy);
  const auto [s, ds] = basis.eval(spacing_, p.s, p.ds, p.dds, q.s, q.ds, q.dds);
  const double mm1 = m_ - 1;
  Sample out{y, dy, mm1 * std::pow(y, 1.0 - 2.0 * m_), s, ds, -mm1 * std::pow(y, -static_cast<double>(m_)) * dy};
  if (negative) {
    out.dy = -out.dy;
    out.s = -out.s;
    out.dds = -out.dds;
  }
  return out;
}

double RotationalMinimalProfile::first_integral(double sigma) const {
  const Sample p = (*this)(sigma);
  const double dyds = p.dy / p.ds;
  return std::pow(p.y, m_ - 1) / std::sqrt(1.0 + dyds * dyds);
}

namespace {

// factor kinds: 0 = sin, 1 = cos, 2 = constant one
double factor(int kind, double a, int order) {
  if (kind == 2) return order == 0 ? 1.0 : 0.0;
  const double s = std::sin(a), c = std::cos(a);
  if (kind == 0) return order == 0 ? s : (order == 1 ? c : -s);
  return order == 0 ? c : (order == 1 ? -s : -c);
}

// component i of the unit vector uses sin for angles j < i, cos for j == i (when i < k)
Vec hyperspherical_impl(const Vec& angles, int da, int db) {
  const auto k = static_cast<int>(angles.size());
  Vec out(k + 1);
  for (int i = 0; i <= k; ++i) {
    double v = 1.0;
    for (int j = 0; j < k; ++j) {
      const int kind = j < i ? 0 : (j == i ? 1 : 2);
      const int order = (j == da ? 1 : 0) + (j == db ? 1 : 0);
      v *= factor(kind, angles[j], order);
      if (v == 0.0) break;
    }
    out[i] = v;
  }
  return out;
}

Vec embed(const Vec& v, int n) {
  Vec out = Vec::Zero(n);
  out.head(v.size()) = v;
  return out;
}

void require_flat(const AmbientChart& ambient, std::string_view name) {
  const auto b = ambient.warping().curvature();
  if (!b || *b != 0.0)
    throw ImmersionError(std::string(name) + " is a Euclidean construction; ambient warping must be space_form:0");
}

ParametricImmersion coordinate_plane(std::string_view name, int m, double extent, const AmbientChart& ambient) {
  const int n = ambient.dim();
  if (m < 2 || m >= n) throw ImmersionError(std::string(name) + ": need 2 <= m < n");
  std::vector<ParamAxis> domain(static_cast<std::size_t>(m), ParamAxis{-extent, extent, false});
  ParametricImmersion I(std::string(name), ambient, domain, [n](const Vec& u) { return embed(u, n); });
  I.with_derivatives(
      [n, m](const Vec&) {
        Mat J = Mat::Zero(n, m);
        J.topRows(m).setIdentity();
        return J;
      },
      [n, m](const Vec&) { return std::vector<Vec>(static_cast<std::size_t>(m * m), Vec::Zero(n)); });
  return I;
}

ParametricImmersion catenoid(const BuiltinParams& p, const AmbientChart& ambient) {
  require_flat(ambient, "catenoid");
  const int n = ambient.dim();
  if (n < 3) throw ImmersionError("catenoid: ambient dimension must be >= 3");
  const double a = p.scale;
  std::vector<ParamAxis> domain{{-p.v_max, p.v_max, false}, {0.0, 2.0 * std::numbers::pi, true}};
  ParametricImmersion I("catenoid", ambient, domain, [a, n](const Vec& u) {
    Vec x = Vec::Zero(n);
    x[0] = a * std::cosh(u[0]) * std::cos(u[1]);
    x[1] = a * std::cosh(u[0]) * std::sin(u[1]);
    x[2] = a * u[0];
    return x;
  });
  I.with_derivatives(
      [a, n](const Vec& u) {
        const double ch = std::cosh(u[0]), sh = std::sinh(u[0]), c = std::cos(u[1]), s = std::sin(u[1]);
        Mat J = Mat::Zero(n, 2);
        J(0, 0) = a * sh * c, J(1, 0) = a * sh * s, J(2, 0) = a;
        J(0, 1) = -a * ch * s, J(1, 1) = a * ch * c;
        return J;
      },
      [a, n](const Vec& u) {
        const double ch = std::cosh(u[0]), sh = std::sinh(u[0]), c = std::cos(u[1]), s = std::sin(u[1]);
        std::vector<Vec> d(4, Vec::Zero(n));
        d[0][0] = a * ch * c, d[0][1] = a * ch * s;
        d[1][0] = -a * sh * s, d[1][1] = a * sh * c;
        d[2] = d[1];
        d[3][0] = -a * ch * c, d[3][1] = -a * ch * s;
        return d;
      });
  return I;
}

ParametricImmersion higher_catenoid(const BuiltinParams& p, const AmbientChart& ambient) {
  require_flat(ambient, "higher_catenoid");
  const int m = p.m;
  const int n = ambient.dim();
  if (m < 2 || n < m + 1) throw ImmersionError("higher_catenoid: need m >= 2 and ambient dimension >= m + 1");
  auto profile = std::make_shared<const RotationalMinimalProfile>(m, p.sigma_max);
  std::vector<ParamAxis> domain;
  domain.push_back({-p.sigma_max, p.sigma_max, false});
  for (int k = 0; k + 1 < m - 1; ++k) domain.push_back({p.cap, std::numbers::pi - p.cap, false, true});
  domain.push_back({0.0, 2.0 * std::numbers::pi, true});

  ParametricImmersion I("higher_catenoid", ambient, domain, [profile, m, n](const Vec& u) {
    const auto pr = (*profile)(u[0]);
    Vec x = Vec::Zero(n);
    x.head(m) = pr.y * hyperspherical(u.tail(m - 1));
    x[m] = pr.s;
    return x;
  });
  I.with_derivatives(
      [profile, m, n](const Vec& u) {
        const auto pr = (*profile)(u[0]);
        const Vec ang = u.tail(m - 1);
        Mat J = Mat::Zero(n, m);
        J.col(0).head(m) = pr.dy * hyperspherical(ang);
        J(m, 0) = pr.ds;
        for (int k = 0; k < m - 1; ++k) J.col(k + 1).head(m) = pr.y * hyperspherical_d(ang, k);
        return J;
      },
      [profile, m, n](const Vec& u) {
        const auto pr = (*profile)(u[0]);
        const Vec ang = u.tail(m - 1);
        std::vector<Vec> d(static_cast<std::size_t>(m * m), Vec::Zero(n));
        d[0].head(m) = pr.ddy * hyperspherical(ang);
        d[0][m] = pr.dds;
        for (int k = 0; k < m - 1; ++k) {
          const Vec mixed = pr.dy * hyperspherical_d(ang, k);
          d[static_cast<std::size_t>(k + 1)].head(m) = mixed;
          d[static_cast<std::size_t>((k + 1) * m)].head(m) = mixed;
          for (int l = 0; l < m - 1; ++l)
            d[static_cast<std::size_t>((k + 1) * m + l + 1)].head(m) = pr.y * hyperspherical_dd(ang, k, l);
        }
        return d;
      });
  return I;
}

ParametricImmersion round_sphere(const BuiltinParams& p, const AmbientChart& ambient) {
  require_flat(ambient, "round_sphere");
  const int n = ambient.dim();
  if (n < 3) throw ImmersionError("round_sphere: ambient dimension must be >= 3");
  const double R = p.radius;
  std::vector<ParamAxis> domain{{p.cap, std::numbers::pi - p.cap, false, true}, {0.0, 2.0 * std::numbers::pi, true}};
  ParametricImmersion I("round_sphere", ambient, domain, [R, n](const Vec& u) { return embed(R * hyperspherical(u), n); });
  I.with_derivatives(
      [R, n](const Vec& u) {
        Mat J(n, 2);
        J.col(0) = embed(R * hyperspherical_d(u, 0), n);
        J.col(1) = embed(R * hyperspherical_d(u, 1), n);
        return J;
      },
      [R, n](const Vec& u) {
        std::vector<Vec> d(4);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) d[static_cast<std::size_t>(i * 2 + j)] = embed(R * hyperspherical_dd(u, i, j), n);
        return d;
      });
  I.set_compact(true);
  return I;
}

}  // namespace

Vec hyperspherical(const Vec& angles) { return hyperspherical_impl(angles, -1, -1); }
Vec hyperspherical_d(const Vec& angles, int a) { return hyperspherical_impl(angles, a, -1); }
Vec hyperspherical_dd(const Vec& angles, int a, int b) { return hyperspherical_impl(angles, a, b); }

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"euclidean_plane", "catenoid", "higher_catenoid",
                                              "hyperbolic_hyperplane", "round_sphere"};
  return names;
}

ParametricImmersion builtin_example(std::string_view name, const BuiltinParams& params, const AmbientChart& ambient) {
  if (name == "euclidean_plane") {
    require_flat(ambient, name);
    return coordinate_plane(name, params.m, params.extent, ambient);
  }
  if (name == "hyperbolic_hyperplane") {
    const auto b = ambient.warping().curvature();
    if (!b || *b >= 0.0) throw ImmersionError("hyperbolic_hyperplane: ambient warping must be space_form:<b> with b < 0");
    return coordinate_plane(name, params.m, params.extent, ambient);
  }
  if (name == "catenoid") return catenoid(params, ambient);
  if (name == "higher_catenoid") return higher_catenoid(params, ambient);
  if (name == "round_sphere") return round_sphere(params, ambient);
  throw ImmersionError("unknown builtin immersion '" + std::string(name) + "'");
}

}  // namespace warplab
