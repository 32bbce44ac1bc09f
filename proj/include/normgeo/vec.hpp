#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "normgeo/errors.hpp"

namespace normgeo {

/// Dense real vector. All operations check dimensions and throw
/// DimensionMismatch on disagreement.
class Vec {
 public:
  Vec() = default;
  explicit Vec(std::size_t n) : c_(n, 0.0) {}
  Vec(std::initializer_list<double> xs) : c_(xs) {}
  explicit Vec(std::vector<double> xs) : c_(std::move(xs)) {}

  std::size_t dim() const { return c_.size(); }
  double& operator[](std::size_t i) { return c_[i]; }
  double operator[](std::size_t i) const { return c_[i]; }
  const std::vector<double>& coords() const { return c_; }

  auto begin() const { return c_.begin(); }
  auto end() const { return c_.end(); }

  bool operator==(const Vec& o) const { return c_ == o.c_; }

 private:
  std::vector<double> c_;
};

inline void require_same_dim(const Vec& a, const Vec& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("vector dimensions differ: " +
                            std::to_string(a.dim()) + " vs " +
                            std::to_string(b.dim()));
  }
}

inline Vec operator+(const Vec& a, const Vec& b) {
  require_same_dim(a, b);
  Vec r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
  require_same_dim(a, b);
  Vec r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec operator-(const Vec& a) {
  Vec r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) r[i] = -a[i];
  return r;
}

inline Vec operator*(double s, const Vec& a) {
  Vec r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) r[i] = s * a[i];
  return r;
}

inline Vec operator*(const Vec& a, double s) { return s * a; }

inline double dot(const Vec& a, const Vec& b) {
  require_same_dim(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

/// Euclidean length, used as reference machinery only.
inline double euclid(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double sup_abs(const Vec& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

inline bool is_zero(const Vec& a) {
  for (double x : a)
    if (x != 0.0) return false;
  return true;
}

inline bool all_finite(const Vec& a) {
  for (double x : a)
    if (!std::isfinite(x)) return false;
  return true;
}

/// 2D cross product; only defined for dim 2.
inline double cross2(const Vec& a, const Vec& b) {
  return a[0] * b[1] - a[1] * b[0];
}

inline Vec normalized_euclid(const Vec& a) {
  const double n = euclid(a);
  if (n == 0.0) throw ZeroBasePoint("cannot normalize the zero vector");
  return (1.0 / n) * a;
}

/// Component of `a` orthogonal (Euclidean) to the line spanned by unit `u`.
inline double rejection_euclid(const Vec& a, const Vec& u) {
  const double p = dot(a, u);
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double r = a[i] - p * u[i];
    s += r * r;
  }
  return std::sqrt(s);
}

}  // namespace normgeo
