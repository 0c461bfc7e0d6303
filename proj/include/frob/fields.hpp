#pragma once

#include <functional>
#include <utility>

#include "frob/dual.hpp"
#include "frob/linalg.hpp"

namespace frob {

// A smooth vector field on the coordinate chart, evaluable on every level of
// the dual tower (double, D1, D2). Build one from a generic lambda
// `[](const auto& p) { ...; return Vec<S>(...); }`.
class VectorField {
 public:
  VectorField() = default;

  template <class F>
  explicit VectorField(F f) : f0_(f), f1_(f), f2_(f) {}

  template <class S>
  Vec<S> operator()(const Vec<S>& p) const {
    if constexpr (std::is_same_v<S, double>) return f0_(p);
    else if constexpr (std::is_same_v<S, D1>) return f1_(p);
    else {
      static_assert(std::is_same_v<S, D2>, "VectorField supports double, D1 and D2");
      return f2_(p);
    }
  }

  explicit operator bool() const { return static_cast<bool>(f0_); }

  static VectorField constant(const Vector& v) {
    return VectorField([v](const auto& p) {
      using S = typename std::decay_t<decltype(p)>::Scalar;
      return lift<S>(v);
    });
  }

  // x ↦ f(x)·V(x) for a generic scalar function f.
  template <class F>
  VectorField scaled(F f) const {
    VectorField self = *this;
    return VectorField([self, f](const auto& p) {
      using S = typename std::decay_t<decltype(p)>::Scalar;
      const S s = f(p);
      Vec<S> out = self(p);
      for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = s * out(i);
      return out;
    });
  }

  VectorField operator+(const VectorField& o) const {
    VectorField a = *this, b = o;
    return VectorField([a, b](const auto& p) {
      using S = typename std::decay_t<decltype(p)>::Scalar;
      return Vec<S>(a(p) + b(p));
    });
  }

 private:
  std::function<Vec<double>(const Vec<double>&)> f0_;
  std::function<Vec<D1>(const Vec<D1>&)> f1_;
  std::function<Vec<D2>(const Vec<D2>&)> f2_;
};

// Directional derivative D_w V(p).
inline Vector derivative(const VectorField& field, const Vector& p, const Vector& w) {
  return tangent(field(seed_point(p, w)));
}

}  // namespace frob
