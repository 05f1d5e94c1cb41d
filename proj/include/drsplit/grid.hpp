#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace drsplit {

using Vec = std::vector<double>;

/// Real scalar field on a width x height grid, stored row-major:
/// value(i, j) lives at index j * width + i (i is the column, j the row).
class GridImage {
 public:
  GridImage() = default;
  GridImage(std::size_t width, std::size_t height, double fill = 0.0);
  GridImage(std::size_t width, std::size_t height, Vec values);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return values_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return values_[j * width_ + i]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[j * width_ + i]; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  const Vec& vector() const noexcept { return values_; }
  Vec& vector() noexcept { return values_; }

  bool all_finite() const;
  bool same_shape(const GridImage& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const GridImage&, const GridImage&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  Vec values_;
};

/// Per-pixel 2-vector field. comp1 holds differences along the width
/// (horizontal), comp2 along the height. Both channels are stored in one
/// buffer, comp1 first, so the field flattens to a vector of length 2*w*h.
class DualField {
 public:
  DualField() = default;
  DualField(std::size_t width, std::size_t height, double fill = 0.0);
  DualField(std::size_t width, std::size_t height, Vec data);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t pixels() const noexcept { return width_ * height_; }

  std::span<double> comp1() noexcept { return {data_.data(), pixels()}; }
  std::span<const double> comp1() const noexcept { return {data_.data(), pixels()}; }
  std::span<double> comp2() noexcept { return {data_.data() + pixels(), pixels()}; }
  std::span<const double> comp2() const noexcept { return {data_.data() + pixels(), pixels()}; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  const Vec& vector() const noexcept { return data_; }
  Vec& vector() noexcept { return data_; }

  bool all_finite() const;
  bool matches(const GridImage& u) const noexcept {
    return width_ == u.width() && height_ == u.height();
  }

  friend bool operator==(const DualField&, const DualField&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  Vec data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
bool all_finite(std::span<const double> a);

}  // namespace drsplit
