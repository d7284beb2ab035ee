#pragma once

// Zernike radial polynomials, basis functions and discrete moments.
//
// Pixel (r, c) of an H x W region maps to the point
//   x = (2c - W + 1) / W,   y = -(2r - H + 1) / H
// i.e. pixel centres of the rectangle stretched onto [-1, 1]^2 with y up.
// Only points inside the unit disk contribute, and every sample carries the
// area element dA = (2/W)(2/H), so that
//   Z_nm = (n + 1)/pi * sum psi(x, y) conj(V_nm(x, y)) dA
// approximates the continuous moment independently of the resolution.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <string>
#include <vector>

#include "gaitlab/error.hpp"
#include "gaitlab/grid.hpp"

namespace gaitlab {

using Complex = std::complex<double>;

struct ZernikeIndex {
  int n = 0;
  int m = 0;

  bool valid() const noexcept { return n >= 0 && std::abs(m) <= n && (n - std::abs(m)) % 2 == 0; }
  void validate() const {
    if (!valid()) {
      throw Error(ErrorKind::Parameter, "invalid Zernike index (n=" + std::to_string(n) + ", m=" + std::to_string(m) +
                                            "): need |m| <= n and n - |m| even");
    }
  }
  friend bool operator==(const ZernikeIndex&, const ZernikeIndex&) = default;
  friend auto operator<=>(const ZernikeIndex&, const ZernikeIndex&) = default;
};

/// Order 5 with repetitions 1, 3 and 5.
inline std::vector<ZernikeIndex> default_zernike_indices() { return {{5, 1}, {5, 3}, {5, 5}}; }

/// Every valid index with n <= max_order, ordered by (n, m).
inline std::vector<ZernikeIndex> all_zernike_indices(int max_order) {
  std::vector<ZernikeIndex> out;
  for (int n = 0; n <= max_order; ++n)
    for (int m = -n; m <= n; m += 2) out.push_back({n, m});
  return out;
}

/// Coefficients of R_nm in descending powers rho^n, rho^(n-2), ...
/// c_0 = n! / (((n+|m|)/2)! ((n-|m|)/2)!) and successive terms follow the
/// ratio c_{s+1}/c_s = -((n+|m|)/2 - s)((n-|m|)/2 - s) / ((s+1)(n-s)).
inline std::vector<double> radial_coefficients(ZernikeIndex idx) {
  idx.validate();
  const int n = idx.n;
  const int up = (n + std::abs(idx.m)) / 2;
  const int down = (n - std::abs(idx.m)) / 2;
  double c = 1.0;
  // n! / (up! down!) = prod_{k=1..down} (up + k) / k
  for (int k = 1; k <= down; ++k) c = c * (up + k) / k;
  std::vector<double> coeffs;
  coeffs.reserve(static_cast<std::size_t>(down) + 1);
  for (int s = 0; s <= down; ++s) {
    coeffs.push_back(c);
    if (s < down) c = -c * (up - s) * (down - s) / (static_cast<double>(s + 1) * (n - s));
  }
  return coeffs;
}

inline double evaluate_radial(const std::vector<double>& coeffs, int n, double rho) {
  double value = 0.0;
  const double rho2 = rho * rho;
  // Horner over rho^2, then multiply by the lowest power rho^(n - 2*down).
  for (double c : coeffs) value = value * rho2 + c;
  const int lowest = n - 2 * (static_cast<int>(coeffs.size()) - 1);
  double tail = 1.0;
  for (int k = 0; k < lowest; ++k) tail *= rho;
  return value * tail;
}

inline double radial_polynomial(ZernikeIndex idx, double rho) {
  idx.validate();
  if (!(rho >= 0.0 && rho <= 1.0)) throw Error(ErrorKind::Parameter, "rho must lie in [0, 1]");
  return evaluate_radial(radial_coefficients(idx), idx.n, rho);
}

/// V_nm(x, y) = R_nm(rho) e^{j m theta} on the unit disk.
inline Complex basis_function(ZernikeIndex idx, double x, double y) {
  idx.validate();
  const double r2 = x * x + y * y;
  if (r2 > 1.0) throw Error(ErrorKind::Parameter, "point outside the unit disk");
  const double rho = std::sqrt(r2);
  const double radial = evaluate_radial(radial_coefficients(idx), idx.n, rho);
  return std::polar(radial, idx.m * std::atan2(y, x));
}

struct ZernikeMomentSet {
  std::vector<ZernikeIndex> indices;
  std::vector<Complex> values;
  int region_width = 0;
  int region_height = 0;

  std::size_t size() const noexcept { return values.size(); }

  const Complex& at(ZernikeIndex idx) const {
    for (std::size_t i = 0; i < indices.size(); ++i)
      if (indices[i] == idx) return values[i];
    throw Error(ErrorKind::Parameter, "moment (" + std::to_string(idx.n) + "," + std::to_string(idx.m) + ") not in set");
  }

  friend bool operator==(const ZernikeMomentSet&, const ZernikeMomentSet&) = default;
};

/// Pixel-centre coordinates on [-1, 1]^2 for an H x W region.
inline double pixel_x(int col, int width) { return (2.0 * col - width + 1.0) / width; }
inline double pixel_y(int row, int height) { return -(2.0 * row - height + 1.0) / height; }

/// Conjugate basis values for a fixed region size and index list, scaled by
/// (n+1)/pi * dA. Immutable after construction, shareable across threads.
class ZernikeBasis {
 public:
  ZernikeBasis(int width, int height, std::vector<ZernikeIndex> indices)
      : width_(width), height_(height), indices_(std::move(indices)) {
    if (width <= 0 || height <= 0) throw Error(ErrorKind::DegenerateInput, "empty moment region");
    if (indices_.empty()) throw Error(ErrorKind::Parameter, "empty Zernike index list");
    std::vector<std::vector<double>> coeffs;
    for (const auto& idx : indices_) coeffs.push_back(radial_coefficients(idx));

    const double area = (2.0 / width) * (2.0 / height);
    for (int r = 0; r < height; ++r) {
      const double y = pixel_y(r, height);
      for (int c = 0; c < width; ++c) {
        const double x = pixel_x(c, width);
        const double r2 = x * x + y * y;
        if (r2 > 1.0) continue;
        const double rho = std::sqrt(r2);
        const double theta = std::atan2(y, x);
        pixels_.push_back(static_cast<std::size_t>(r) * width + c);
        for (std::size_t k = 0; k < indices_.size(); ++k) {
          const auto& idx = indices_[k];
          const double scale = (idx.n + 1) / std::numbers::pi * area;
          const double radial = evaluate_radial(coeffs[k], idx.n, rho);
          weights_.push_back(std::polar(radial * scale, -idx.m * theta));
        }
      }
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  const std::vector<ZernikeIndex>& indices() const noexcept { return indices_; }

  ZernikeMomentSet moments(const RealGrid& image) const {
    if (image.width() != width_ || image.height() != height_) {
      throw Error(ErrorKind::Dimension, "image size does not match the Zernike basis");
    }
    const std::size_t k = indices_.size();
    std::vector<Complex> acc(k);
    auto px = image.values();
    for (std::size_t p = 0; p < pixels_.size(); ++p) {
      const double v = px[pixels_[p]];
      if (v == 0.0) continue;
      const Complex* w = &weights_[p * k];
      for (std::size_t i = 0; i < k; ++i) acc[i] += v * w[i];
    }
    return ZernikeMomentSet{indices_, std::move(acc), width_, height_};
  }

 private:
  int width_;
  int height_;
  std::vector<ZernikeIndex> indices_;
  std::vector<std::size_t> pixels_;
  std::vector<Complex> weights_;
};

inline ZernikeMomentSet compute_moments(const RealGrid& image, const std::vector<ZernikeIndex>& indices) {
  if (image.empty()) throw Error(ErrorKind::DegenerateInput, "empty image");
  return ZernikeBasis(image.width(), image.height(), indices).moments(image);
}

}  // namespace gaitlab
