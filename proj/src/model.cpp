#include "nlwr/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nlwr {

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a,
                     double fa, double b, double fb, double fm, double whole,
                     double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(f, a, fa, m, fm, flm);
  double right = simpson(f, m, fm, b, fb, frm);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_step(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_quadrature(const std::function<double(double)>& f, double a,
                           double b, double abs_tol) {
  if (b <= a) return 0.0;
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = simpson(f, a, fa, b, fb, fm);
  return adaptive_step(f, a, fa, b, fb, fm, whole, abs_tol, 40);
}

VelocityModel VelocityModel::linear(double rho_max, double v_free) {
  if (rho_max <= 0.0) throw std::invalid_argument("rho_max must be positive");
  if (v_free <= 0.0) throw std::invalid_argument("v_free must be positive");
  VelocityModel m;
  m.kind_ = VelocityKind::linear;
  m.rho_max_ = rho_max;
  m.v_free_ = v_free;
  m.v0_ = v_free;
  return m;
}

VelocityModel VelocityModel::custom(std::function<double(double)> v,
                                    std::function<double(double)> dv,
                                    double rho_max) {
  if (rho_max <= 0.0) throw std::invalid_argument("rho_max must be positive");
  if (!v || !dv) throw std::invalid_argument("speed law callables required");
  VelocityModel m;
  m.kind_ = VelocityKind::custom;
  m.rho_max_ = rho_max;
  m.eval_ = std::move(v);
  m.deriv_ = std::move(dv);
  m.v0_ = m.eval_(0.0);
  if (m.eval_(rho_max) < 0.0)
    throw std::invalid_argument("v(rho_max) must be nonnegative");
  // strict monotone decrease, checked on a dense sample
  const int n = 1000;
  double prev = m.v0_;
  for (int i = 1; i <= n; ++i) {
    double cur = m.eval_(rho_max * i / n);
    if (cur >= prev)
      throw std::invalid_argument("speed law is not strictly decreasing");
    prev = cur;
  }
  return m;
}

double VelocityModel::operator()(double rho) const {
  if (!(rho >= 0.0) || rho > rho_max_ * (1.0 + 1e-12))
    throw std::domain_error("density outside [0, rho_max]");
  rho = std::min(rho, rho_max_);
  if (kind_ == VelocityKind::linear) return v_free_ * (1.0 - rho / rho_max_);
  return eval_(rho);
}

ArrayXd VelocityModel::operator()(const ArrayXd& rho) const {
  if (rho.size() > 0) {
    if (!(rho.minCoeff() >= -1e-12) || rho.maxCoeff() > rho_max_ * (1.0 + 1e-12))
      throw std::domain_error("density outside [0, rho_max]");
  }
  ArrayXd r = rho.max(0.0).min(rho_max_);
  if (kind_ == VelocityKind::linear) return v_free_ * (1.0 - r / rho_max_);
  return r.unaryExpr(eval_);
}

double VelocityModel::deriv(double rho) const {
  if (kind_ == VelocityKind::linear) return -v_free_ / rho_max_;
  return deriv_(std::clamp(rho, 0.0, rho_max_));
}

double VelocityModel::inverse(double vbar) const {
  if (vbar >= v0_)
    throw std::domain_error(
        "control infeasible: target speed must be strictly below v(0)");
  double v_min = (*this)(rho_max_);
  if (vbar < v_min - 1e-12)
    throw std::domain_error("target speed below v(rho_max)");
  if (kind_ == VelocityKind::linear)
    return rho_max_ * (1.0 - vbar / v_free_);
  double lo = 0.0, hi = rho_max_;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (eval_(mid) > vbar)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double VelocityModel::vprime_max(double rho_min) const {
  if (kind_ == VelocityKind::linear) return -v_free_ / rho_max_;
  rho_min = std::clamp(rho_min, 0.0, rho_max_);
  const int n = 10000;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    double rho = rho_min + (rho_max_ - rho_min) * i / n;
    best = std::max(best, deriv_(rho));
  }
  if (best >= 0.0)
    throw std::domain_error("speed law derivative is not negative");
  return 0.9 * best;  // margin toward zero covers sampling error
}

double VelocityModel::vprime_abs_max() const {
  if (kind_ == VelocityKind::linear) return v_free_ / rho_max_;
  const int n = 10000;
  double best = 0.0;
  for (int i = 0; i <= n; ++i)
    best = std::max(best, std::abs(deriv_(rho_max_ * i / n)));
  return 1.1 * best;
}

std::string to_string(KernelKind k) {
  switch (k) {
    case KernelKind::constant: return "constant";
    case KernelKind::linear: return "linear";
    case KernelKind::concave: return "concave";
    case KernelKind::custom: return "custom";
  }
  return "?";
}

KernelKind kernel_kind_from_string(const std::string& s) {
  if (s == "constant") return KernelKind::constant;
  if (s == "linear") return KernelKind::linear;
  if (s == "concave") return KernelKind::concave;
  if (s == "custom") return KernelKind::custom;
  throw std::invalid_argument("unknown kernel kind: " + s);
}

Kernel Kernel::constant(double eta) {
  if (eta <= 0.0) throw std::invalid_argument("eta must be positive");
  Kernel k;
  k.kind_ = KernelKind::constant;
  k.eta_ = eta;
  return k;
}

Kernel Kernel::linear(double eta) {
  Kernel k = constant(eta);
  k.kind_ = KernelKind::linear;
  return k;
}

Kernel Kernel::concave(double eta) {
  Kernel k = constant(eta);
  k.kind_ = KernelKind::concave;
  return k;
}

Kernel Kernel::custom(double eta, std::function<double(double)> w) {
  if (!w) throw std::invalid_argument("kernel density callable required");
  Kernel k = constant(eta);
  k.kind_ = KernelKind::custom;
  k.density_ = std::move(w);
  return k;
}

Kernel Kernel::make(KernelKind kind, double eta) {
  switch (kind) {
    case KernelKind::constant: return constant(eta);
    case KernelKind::linear: return linear(eta);
    case KernelKind::concave: return concave(eta);
    case KernelKind::custom: break;
  }
  throw std::invalid_argument("custom kernel needs an explicit density");
}

double Kernel::density(double x) const {
  if (x < 0.0 || x > eta_) return 0.0;
  switch (kind_) {
    case KernelKind::constant: return 1.0 / eta_;
    case KernelKind::linear: return 2.0 * (eta_ - x) / (eta_ * eta_);
    case KernelKind::concave:
      return 3.0 * (eta_ * eta_ - x * x) / (2.0 * eta_ * eta_ * eta_);
    case KernelKind::custom: return density_(x);
  }
  return 0.0;
}

double Kernel::integral(double a, double b) const {
  a = std::clamp(a, 0.0, eta_);
  b = std::clamp(b, 0.0, eta_);
  if (b <= a) return 0.0;
  auto antideriv = [this](double x) {
    switch (kind_) {
      case KernelKind::constant: return x / eta_;
      case KernelKind::linear:
        return (2.0 * eta_ * x - x * x) / (eta_ * eta_);
      case KernelKind::concave:
        return (3.0 * eta_ * eta_ * x - x * x * x) /
               (2.0 * eta_ * eta_ * eta_);
      default: return 0.0;
    }
  };
  if (kind_ == KernelKind::custom)
    return adaptive_quadrature(density_, a, b, 1e-12);
  return antideriv(b) - antideriv(a);
}

WeightTable kernel_weights(const Kernel& kernel, double dx) {
  if (dx <= 0.0) throw std::invalid_argument("dx must be positive");
  if (dx > kernel.eta() * (1.0 + 1e-12))
    throw std::invalid_argument("dx exceeds the nonlocal reach: empty stencil");
  auto K = static_cast<Index>(std::floor(kernel.eta() / dx + 1e-12));
  WeightTable w;
  w.dx = dx;
  w.eta = kernel.eta();
  w.gamma.resize(K);
  for (Index k = 0; k < K; ++k)
    w.gamma[k] = kernel.integral(k * dx, (k + 1) * dx);
  w.tail_mass = kernel.integral(K * dx, kernel.eta());
  return w;
}

KernelReport validate_kernel(const Kernel& kernel, int samples) {
  if (samples < 2) throw std::invalid_argument("need at least 2 samples");
  KernelReport r;
  r.nonnegative = true;
  r.non_increasing = true;
  double prev = kernel.density(0.0);
  for (int i = 0; i <= samples; ++i) {
    double x = kernel.eta() * i / samples;
    double w = kernel.density(x);
    if (w < 0.0) r.nonnegative = false;
    if (i > 0 && w > prev + 1e-12) r.non_increasing = false;
    prev = w;
  }
  r.integral = kernel.integral(0.0, kernel.eta());
  r.normalized = std::abs(r.integral - 1.0) <= 1e-10;
  return r;
}

}  // namespace nlwr
