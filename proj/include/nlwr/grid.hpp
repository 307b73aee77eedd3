#pragma once

#include <Eigen/Dense>

#include <vector>

namespace nlwr {

using Eigen::ArrayXd;
using Eigen::Index;

/// Fixed uniform cell grid on [x_left, x_left + n_cells*dx].
struct GridSpec {
  double x_left = 0.0;
  double dx = 1.0;
  Index n_cells = 0;

  double x_right() const { return x_left + n_cells * dx; }
  double center(Index j) const { return x_left + (j + 0.5) * dx; }
  double edge(Index j) const { return x_left + j * dx; }  // left edge of cell j
  ArrayXd centers() const {
    return x_left + 0.5 * dx +
           dx * ArrayXd::LinSpaced(n_cells, 0.0, double(n_cells - 1));
  }
};

struct Segment {
  double x_upper;  // segment covers (previous upper, x_upper]
  double value;
};

/// Piecewise-constant profile on the whole line. The last segment must have
/// x_upper = +inf so the profile is total.
struct PiecewiseConstant {
  std::vector<Segment> segments;

  double value_at(double x) const;
  double integral(double a, double b) const;  // exact, a <= b
  double average(double a, double b) const { return integral(a, b) / (b - a); }
  double min_value() const;
  double max_value() const;
  void validate() const;
};

/// Exact cell averages of a piecewise-constant profile.
ArrayXd cell_averages(const PiecewiseConstant& profile, const GridSpec& grid);

}  // namespace nlwr
