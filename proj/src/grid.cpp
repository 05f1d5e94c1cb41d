#include "drsplit/grid.hpp"

#include <cmath>

#include "drsplit/errors.hpp"
#include "drsplit/random.hpp"

namespace drsplit {

GridImage::GridImage(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), values_(width * height, fill) {
  if (width == 0 || height == 0) throw ContractViolation("GridImage: empty grid");
}

GridImage::GridImage(std::size_t width, std::size_t height, Vec values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (width == 0 || height == 0) throw ContractViolation("GridImage: empty grid");
  if (values_.size() != width * height)
    throw ContractViolation("GridImage: value count does not match width*height");
}

bool GridImage::all_finite() const { return drsplit::all_finite(values_); }

DualField::DualField(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), data_(2 * width * height, fill) {
  if (width == 0 || height == 0) throw ContractViolation("DualField: empty grid");
}

DualField::DualField(std::size_t width, std::size_t height, Vec data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width == 0 || height == 0) throw ContractViolation("DualField: empty grid");
  if (data_.size() != 2 * width * height)
    throw ContractViolation("DualField: data length must be 2*width*height");
}

bool DualField::all_finite() const { return drsplit::all_finite(data_); }

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ContractViolation("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ContractViolation("max_abs_diff: length mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

bool all_finite(std::span<const double> a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

double SeededRng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  // 1 - uniform() lies in (0, 1], so the logarithm is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  cached_ = r * std::sin(angle);
  has_cached_ = true;
  return r * std::cos(angle);
}

}  // namespace drsplit
