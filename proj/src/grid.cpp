#include "nlwr/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nlwr {

void PiecewiseConstant::validate() const {
  if (segments.empty())
    throw std::invalid_argument("initial profile has no segments");
  for (size_t i = 1; i < segments.size(); ++i)
    if (!(segments[i].x_upper > segments[i - 1].x_upper))
      throw std::invalid_argument("profile breakpoints must be increasing");
  if (!std::isinf(segments.back().x_upper))
    throw std::invalid_argument("last profile segment must extend to +inf");
}

double PiecewiseConstant::value_at(double x) const {
  for (const auto& s : segments)
    if (x <= s.x_upper) return s.value;
  return segments.back().value;
}

double PiecewiseConstant::integral(double a, double b) const {
  if (b <= a) return 0.0;
  double acc = 0.0;
  double lo = -std::numeric_limits<double>::infinity();
  for (const auto& s : segments) {
    double l = std::max(a, lo);
    double r = std::min(b, s.x_upper);
    if (r > l) acc += (r - l) * s.value;
    lo = s.x_upper;
    if (lo >= b) break;
  }
  return acc;
}

double PiecewiseConstant::min_value() const {
  double m = segments.front().value;
  for (const auto& s : segments) m = std::min(m, s.value);
  return m;
}

double PiecewiseConstant::max_value() const {
  double m = segments.front().value;
  for (const auto& s : segments) m = std::max(m, s.value);
  return m;
}

ArrayXd cell_averages(const PiecewiseConstant& profile, const GridSpec& grid) {
  ArrayXd rho(grid.n_cells);
  for (Index j = 0; j < grid.n_cells; ++j)
    rho[j] = profile.average(grid.edge(j), grid.edge(j + 1));
  return rho;
}

}  // namespace nlwr
