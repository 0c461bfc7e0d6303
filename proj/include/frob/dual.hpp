#pragma once

// Forward-mode dual numbers. Nesting Dual<Dual<double>> carries a second
// directional derivative; the pipeline never needs more than two levels.

#include <cmath>
#include <type_traits>

#include <Eigen/Core>

namespace frob {

template <class T>
struct Dual {
  T re{};
  T du{};

  constexpr Dual() = default;
  constexpr Dual(double x) : re(x), du(0.0) {}  // NOLINT: implicit on purpose
  constexpr explicit Dual(const T& x) requires(!std::is_same_v<T, double>) : re(x), du(0.0) {}
  constexpr Dual(T r, T d) : re(r), du(d) {}

  Dual& operator+=(const Dual& o) { re += o.re; du += o.du; return *this; }
  Dual& operator-=(const Dual& o) { re -= o.re; du -= o.du; return *this; }
  Dual& operator*=(const Dual& o) { *this = *this * o; return *this; }
  Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }
};

using D1 = Dual<double>;
using D2 = Dual<D1>;

template <class T> struct is_dual : std::false_type {};
template <class T> struct is_dual<Dual<T>> : std::true_type {};
template <class T> inline constexpr bool is_dual_v = is_dual<T>::value;

inline double primal(double x) { return x; }
template <class T> double primal(const Dual<T>& x) { return primal(x.re); }

template <class T> Dual<T> operator+(const Dual<T>& a) { return a; }
template <class T> Dual<T> operator-(const Dual<T>& a) { return Dual<T>(-a.re, -a.du); }

template <class T> Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return Dual<T>(a.re + b.re, a.du + b.du); }
template <class T> Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) { return Dual<T>(a.re - b.re, a.du - b.du); }
template <class T> Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  return Dual<T>(a.re * b.re, a.du * b.re + a.re * b.du);
}
template <class T> Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  T q = a.re / b.re;
  return Dual<T>(q, (a.du - q * b.du) / b.re);
}

template <class T> Dual<T> operator+(const Dual<T>& a, double b) { return Dual<T>(a.re + b, a.du); }
template <class T> Dual<T> operator+(double a, const Dual<T>& b) { return Dual<T>(a + b.re, b.du); }
template <class T> Dual<T> operator-(const Dual<T>& a, double b) { return Dual<T>(a.re - b, a.du); }
template <class T> Dual<T> operator-(double a, const Dual<T>& b) { return Dual<T>(a - b.re, -b.du); }
template <class T> Dual<T> operator*(const Dual<T>& a, double b) { return Dual<T>(a.re * b, a.du * b); }
template <class T> Dual<T> operator*(double a, const Dual<T>& b) { return Dual<T>(a * b.re, a * b.du); }
template <class T> Dual<T> operator/(const Dual<T>& a, double b) { return Dual<T>(a.re / b, a.du / b); }
template <class T> Dual<T> operator/(double a, const Dual<T>& b) { return Dual<T>(a) / b; }

// Comparisons look at the primal value only.
template <class T> bool operator<(const Dual<T>& a, const Dual<T>& b) { return primal(a) < primal(b); }
template <class T> bool operator>(const Dual<T>& a, const Dual<T>& b) { return primal(a) > primal(b); }
template <class T> bool operator<=(const Dual<T>& a, const Dual<T>& b) { return primal(a) <= primal(b); }
template <class T> bool operator>=(const Dual<T>& a, const Dual<T>& b) { return primal(a) >= primal(b); }
template <class T> bool operator==(const Dual<T>& a, const Dual<T>& b) { return primal(a) == primal(b); }
template <class T> bool operator!=(const Dual<T>& a, const Dual<T>& b) { return primal(a) != primal(b); }

template <class T> Dual<T> sin(const Dual<T>& a) {
  using std::cos; using std::sin;
  return Dual<T>(sin(a.re), a.du * cos(a.re));
}
template <class T> Dual<T> cos(const Dual<T>& a) {
  using std::cos; using std::sin;
  return Dual<T>(cos(a.re), -(a.du * sin(a.re)));
}
template <class T> Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  T e = exp(a.re);
  return Dual<T>(e, a.du * e);
}
template <class T> Dual<T> log(const Dual<T>& a) {
  using std::log;
  return Dual<T>(log(a.re), a.du / a.re);
}
template <class T> Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  T s = sqrt(a.re);
  return Dual<T>(s, a.du / (2.0 * s));
}
template <class T> Dual<T> abs(const Dual<T>& a) { return primal(a) < 0.0 ? -a : a; }

template <class T> bool isfinite(const Dual<T>& a) {
  using std::isfinite;
  return isfinite(a.re) && isfinite(a.du);
}

// The point x carrying tangent v one level up.
template <class S, int MaxRows>
Eigen::Matrix<Dual<S>, Eigen::Dynamic, 1, 0, MaxRows, 1> seed_point(
    const Eigen::Matrix<S, Eigen::Dynamic, 1, 0, MaxRows, 1>& x,
    const Eigen::Matrix<S, Eigen::Dynamic, 1, 0, MaxRows, 1>& v) {
  Eigen::Matrix<Dual<S>, Eigen::Dynamic, 1, 0, MaxRows, 1> out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out(i) = Dual<S>(x(i), v(i));
  return out;
}

}  // namespace frob

namespace Eigen {

template <class T>
struct NumTraits<frob::Dual<T>> : GenericNumTraits<frob::Dual<T>> {
  using Real = frob::Dual<T>;
  using NonInteger = frob::Dual<T>;
  using Nested = frob::Dual<T>;
  using Literal = frob::Dual<T>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2 * NumTraits<T>::ReadCost,
    AddCost = 2 * NumTraits<T>::AddCost,
    MulCost = 3 * NumTraits<T>::MulCost + NumTraits<T>::AddCost
  };
  static inline Real epsilon() { return Real(std::numeric_limits<double>::epsilon()); }
  static inline Real dummy_precision() { return Real(1e-12); }
  static inline Real highest() { return Real(std::numeric_limits<double>::max()); }
  static inline Real lowest() { return Real(std::numeric_limits<double>::lowest()); }
  static inline int digits10() { return std::numeric_limits<double>::digits10; }
};

template <class T, class BinaryOp>
struct ScalarBinaryOpTraits<frob::Dual<T>, double, BinaryOp> {
  using ReturnType = frob::Dual<T>;
};
template <class T, class BinaryOp>
struct ScalarBinaryOpTraits<double, frob::Dual<T>, BinaryOp> {
  using ReturnType = frob::Dual<T>;
};

}  // namespace Eigen
