#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>

namespace nlwr {

using Eigen::ArrayXd;
using Eigen::Index;

enum class VelocityKind { linear, custom };

/// Speed law v(rho): strictly decreasing on [0, rho_max], v(rho_max) >= 0.
class VelocityModel {
public:
  static VelocityModel linear(double rho_max = 1.0, double v_free = 1.0);
  static VelocityModel custom(std::function<double(double)> v,
                              std::function<double(double)> dv,
                              double rho_max);

  double operator()(double rho) const;           // v(rho), range-checked
  ArrayXd operator()(const ArrayXd& rho) const;  // elementwise
  double deriv(double rho) const;                // v'(rho)

  /// rho with |v(rho) - vbar| <= 1e-12. Closed form for the linear law,
  /// monotone bisection otherwise.
  double inverse(double vbar) const;

  /// Upper bound on v' over [rho_min, rho_max]; always negative.
  /// Exact for the linear law, dense sampling with a 10% margin otherwise.
  double vprime_max(double rho_min) const;

  /// Upper bound on |v'| over [0, rho_max] (Lipschitz constant of the speed
  /// law). Exact for the linear law, sampled with a 10% margin otherwise.
  double vprime_abs_max() const;

  VelocityKind kind() const { return kind_; }
  double rho_max() const { return rho_max_; }
  double v0() const { return v0_; }  // free-flow speed v(0)

private:
  VelocityModel() = default;

  VelocityKind kind_ = VelocityKind::linear;
  double rho_max_ = 1.0;
  double v_free_ = 1.0;
  double v0_ = 1.0;
  std::function<double(double)> eval_;
  std::function<double(double)> deriv_;
};

enum class KernelKind { constant, linear, concave, custom };

std::string to_string(KernelKind k);
KernelKind kernel_kind_from_string(const std::string& s);

/// Look-ahead weight density W on [0, eta]: nonnegative, non-increasing,
/// integrating to one.
class Kernel {
public:
  static Kernel constant(double eta);  // 1/eta
  static Kernel linear(double eta);    // 2(eta-x)/eta^2
  static Kernel concave(double eta);   // 3(eta^2-x^2)/(2 eta^3)
  static Kernel custom(double eta, std::function<double(double)> w);
  static Kernel make(KernelKind kind, double eta);

  double density(double x) const;

  /// Exact integral of the density over [a,b] (clipped to [0, eta]).
  /// Closed-form antiderivatives for the named kinds, adaptive quadrature
  /// (abs tol 1e-12) for custom.
  double integral(double a, double b) const;

  double eta() const { return eta_; }
  KernelKind kind() const { return kind_; }

private:
  Kernel() = default;

  KernelKind kind_ = KernelKind::constant;
  double eta_ = 1.0;
  std::function<double(double)> density_;
};

/// Cell weights gamma_k discretizing the convolution on a grid with spacing dx.
struct WeightTable {
  ArrayXd gamma;     // K = floor(eta/dx) entries, non-increasing
  double dx = 0.0;
  double eta = 0.0;
  double tail_mass = 0.0;  // kernel mass beyond K*dx, dropped by the stencil
};

WeightTable kernel_weights(const Kernel& kernel, double dx);

struct KernelReport {
  bool nonnegative = false;
  bool non_increasing = false;
  bool normalized = false;
  double integral = 0.0;
  bool pass() const { return nonnegative && non_increasing && normalized; }
};

KernelReport validate_kernel(const Kernel& kernel, int samples);

/// Adaptive Simpson quadrature, absolute tolerance.
double adaptive_quadrature(const std::function<double(double)>& f, double a,
                           double b, double abs_tol);

}  // namespace nlwr
