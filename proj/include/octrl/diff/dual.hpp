// Copyright 2026 The octrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace octrl {

/// Forward-mode dual number: a value plus a gradient with respect to a seed vector.
///
/// An empty derivative vector means "all zeros" so constants stay allocation-free.
/// Nesting (`Dual<Dual<double>>`) yields second derivatives.
template <typename T>
class Dual {
 public:
  using value_type = T;

  Dual() : value_(0.0) {}
  Dual(const T& value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  template <typename U = T, std::enable_if_t<!std::is_same_v<U, double>, int> = 0>
  Dual(double value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Dual(T value, std::vector<T> derivatives) : value_(std::move(value)), derivatives_(std::move(derivatives)) {}

  /// Independent variable `index` of `dim` seeded with a unit derivative.
  static Dual variable(const T& value, std::size_t index, std::size_t dim) {
    std::vector<T> d(dim, T(0.0));
    d[index] = T(1.0);
    return Dual(value, std::move(d));
  }

  const T& value() const { return value_; }
  const std::vector<T>& derivatives() const { return derivatives_; }
  T derivative(std::size_t i) const { return i < derivatives_.size() ? derivatives_[i] : T(0.0); }

  Dual& operator+=(const Dual& o) { return *this = *this + o; }
  Dual& operator-=(const Dual& o) { return *this = *this - o; }
  Dual& operator*=(const Dual& o) { return *this = *this * o; }
  Dual& operator/=(const Dual& o) { return *this = *this / o; }

  friend Dual operator+(const Dual& a) { return a; }
  friend Dual operator-(const Dual& a) { return Dual(-a.value_, combine(a.derivatives_, T(-1.0), {}, T(0.0))); }

  friend Dual operator+(const Dual& a, const Dual& b) {
    return Dual(a.value_ + b.value_, combine(a.derivatives_, T(1.0), b.derivatives_, T(1.0)));
  }
  friend Dual operator-(const Dual& a, const Dual& b) {
    return Dual(a.value_ - b.value_, combine(a.derivatives_, T(1.0), b.derivatives_, T(-1.0)));
  }
  friend Dual operator*(const Dual& a, const Dual& b) {
    return Dual(a.value_ * b.value_, combine(a.derivatives_, b.value_, b.derivatives_, a.value_));
  }
  friend Dual operator/(const Dual& a, const Dual& b) {
    const T inv = T(1.0) / b.value_;
    const T q = a.value_ * inv;
    return Dual(q, combine(a.derivatives_, inv, b.derivatives_, -q * inv));
  }

  friend bool operator<(const Dual& a, const Dual& b) { return a.value_ < b.value_; }
  friend bool operator>(const Dual& a, const Dual& b) { return a.value_ > b.value_; }
  friend bool operator<=(const Dual& a, const Dual& b) { return a.value_ <= b.value_; }
  friend bool operator>=(const Dual& a, const Dual& b) { return a.value_ >= b.value_; }
  friend bool operator==(const Dual& a, const Dual& b) { return a.value_ == b.value_; }
  friend bool operator!=(const Dual& a, const Dual& b) { return a.value_ != b.value_; }

  /// Chain rule: result value `f`, derivative factor `df` = f'(value).
  Dual apply(T f, const T& df) const { return Dual(std::move(f), combine(derivatives_, df, {}, T(0.0))); }

 private:
  // ca * a + cb * b with empty vectors treated as zero.
  static std::vector<T> combine(const std::vector<T>& a, const T& ca, const std::vector<T>& b, const T& cb) {
    if (a.empty() && b.empty()) return {};
    std::vector<T> out;
    if (a.empty()) {
      out.reserve(b.size());
      for (const auto& bi : b) out.push_back(cb * bi);
    } else if (b.empty()) {
      out.reserve(a.size());
      for (const auto& ai : a) out.push_back(ca * ai);
    } else {
      out.reserve(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) out.push_back(ca * a[i] + cb * b[i]);
    }
    return out;
  }

  T value_;
  std::vector<T> derivatives_;
};

using Dual1 = Dual<double>;
using Dual2 = Dual<Dual<double>>;

template <typename S>
using VectorX = Eigen::Matrix<S, Eigen::Dynamic, 1>;
using DualVector = VectorX<Dual1>;
using Dual2Vector = VectorX<Dual2>;

/// Plain value of a scalar, stripping every dual layer.
inline double primal(double v) { return v; }
template <typename T>
double primal(const Dual<T>& v) {
  return primal(v.value());
}

template <typename T>
Dual<T> sin(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return a.apply(sin(a.value()), cos(a.value()));
}
template <typename T>
Dual<T> cos(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return a.apply(cos(a.value()), -sin(a.value()));
}
template <typename T>
Dual<T> tan(const Dual<T>& a) {
  using std::cos;
  using std::tan;
  const T c = cos(a.value());
  return a.apply(tan(a.value()), T(1.0) / (c * c));
}
template <typename T>
Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  const T e = exp(a.value());
  return a.apply(e, e);
}
template <typename T>
Dual<T> log(const Dual<T>& a) {
  using std::log;
  return a.apply(log(a.value()), T(1.0) / a.value());
}
template <typename T>
Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  const T s = sqrt(a.value());
  return a.apply(s, T(0.5) / s);
}
template <typename T>
Dual<T> tanh(const Dual<T>& a) {
  using std::tanh;
  const T th = tanh(a.value());
  return a.apply(th, T(1.0) - th * th);
}
template <typename T>
Dual<T> atan(const Dual<T>& a) {
  using std::atan;
  return a.apply(atan(a.value()), T(1.0) / (T(1.0) + a.value() * a.value()));
}
/// |a| with subgradient 0 at a == 0.
template <typename T>
Dual<T> abs(const Dual<T>& a) {
  const double v = primal(a.value());
  const double sign = v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
  return a.apply(sign >= 0.0 ? a.value() : -a.value(), T(sign));
}
template <typename T>
Dual<T> pow(const Dual<T>& a, double p) {
  using std::pow;
  return a.apply(pow(a.value(), p), T(p) * pow(a.value(), p - 1.0));
}
template <typename T>
Dual<T> pow(const Dual<T>& a, const Dual<T>& p) {
  return exp(p * log(a));
}
template <typename T>
Dual<T> atan2(const Dual<T>& y, const Dual<T>& x) {
  using std::atan2;
  const T r2 = x.value() * x.value() + y.value() * y.value();
  const Dual<T> slope = (Dual<T>(x.value()) * y - Dual<T>(y.value()) * x) / Dual<T>(r2);
  return Dual<T>(atan2(y.value(), x.value()), slope.derivatives());
}
/// max(a, b) taking the derivative of the selected branch (a on ties).
template <typename T>
Dual<T> max(const Dual<T>& a, const Dual<T>& b) {
  return a >= b ? a : b;
}
template <typename T>
Dual<T> min(const Dual<T>& a, const Dual<T>& b) {
  return a <= b ? a : b;
}
template <typename T>
bool isfinite(const Dual<T>& a) {
  using std::isfinite;
  return isfinite(a.value());
}

}  // namespace octrl

namespace Eigen {

template <typename T>
struct NumTraits<octrl::Dual<T>> : NumTraits<double> {
  using Real = octrl::Dual<T>;
  using NonInteger = octrl::Dual<T>;
  using Nested = octrl::Dual<T>;
  using Literal = octrl::Dual<T>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 3,
    MulCost = 3
  };
};

}  // namespace Eigen
