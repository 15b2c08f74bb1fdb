#pragma once

#include <cmath>

namespace gcflab {

/// Value of a scalar field together with its partials in (u, v) up to
/// second order. Arithmetic propagates all six slots exactly (Leibniz and
/// chain rule), so composing expressions never needs finite differences.
template <typename Scalar>
struct Jet2 {
  Scalar val{0};
  Scalar du{0};
  Scalar dv{0};
  Scalar duu{0};
  Scalar duv{0};
  Scalar dvv{0};

  static Jet2 constant(Scalar c) { return Jet2{c, 0, 0, 0, 0, 0}; }
  static Jet2 coord_u(Scalar u) { return Jet2{u, 1, 0, 0, 0, 0}; }
  static Jet2 coord_v(Scalar v) { return Jet2{v, 0, 1, 0, 0, 0}; }

  Jet2& operator+=(const Jet2& b) { return *this = *this + b; }
  Jet2& operator-=(const Jet2& b) { return *this = *this - b; }
  Jet2& operator*=(const Jet2& b) { return *this = *this * b; }
  Jet2& operator/=(const Jet2& b) { return *this = *this / b; }
};

using Jet2d = Jet2<double>;

/// f(a) given f, f', f'' evaluated at a.val.
template <typename Scalar>
Jet2<Scalar> compose(const Jet2<Scalar>& a, Scalar f0, Scalar f1, Scalar f2) {
  return Jet2<Scalar>{f0,
                      f1 * a.du,
                      f1 * a.dv,
                      f2 * a.du * a.du + f1 * a.duu,
                      f2 * a.du * a.dv + f1 * a.duv,
                      f2 * a.dv * a.dv + f1 * a.dvv};
}

template <typename Scalar>
Jet2<Scalar> operator+(const Jet2<Scalar>& a, const Jet2<Scalar>& b) {
  return {a.val + b.val, a.du + b.du, a.dv + b.dv, a.duu + b.duu, a.duv + b.duv, a.dvv + b.dvv};
}

template <typename Scalar>
Jet2<Scalar> operator-(const Jet2<Scalar>& a, const Jet2<Scalar>& b) {
  return {a.val - b.val, a.du - b.du, a.dv - b.dv, a.duu - b.duu, a.duv - b.duv, a.dvv - b.dvv};
}

template <typename Scalar>
Jet2<Scalar> operator-(const Jet2<Scalar>& a) {
  return {-a.val, -a.du, -a.dv, -a.duu, -a.duv, -a.dvv};
}

template <typename Scalar>
Jet2<Scalar> operator*(const Jet2<Scalar>& a, const Jet2<Scalar>& b) {
  return {a.val * b.val,
          a.du * b.val + a.val * b.du,
          a.dv * b.val + a.val * b.dv,
          a.duu * b.val + Scalar(2) * a.du * b.du + a.val * b.duu,
          a.duv * b.val + a.du * b.dv + a.dv * b.du + a.val * b.duv,
          a.dvv * b.val + Scalar(2) * a.dv * b.dv + a.val * b.dvv};
}

template <typename Scalar>
Jet2<Scalar> reciprocal(const Jet2<Scalar>& a) {
  const Scalar r = Scalar(1) / a.val;
  return compose(a, r, -r * r, Scalar(2) * r * r * r);
}

template <typename Scalar>
Jet2<Scalar> operator/(const Jet2<Scalar>& a, const Jet2<Scalar>& b) {
  return a * reciprocal(b);
}

template <typename Scalar>
Jet2<Scalar> operator+(const Jet2<Scalar>& a, Scalar c) {
  Jet2<Scalar> r = a;
  r.val += c;
  return r;
}
template <typename Scalar>
Jet2<Scalar> operator+(Scalar c, const Jet2<Scalar>& a) {
  return a + c;
}
template <typename Scalar>
Jet2<Scalar> operator-(const Jet2<Scalar>& a, Scalar c) {
  return a + (-c);
}
template <typename Scalar>
Jet2<Scalar> operator-(Scalar c, const Jet2<Scalar>& a) {
  return (-a) + c;
}
template <typename Scalar>
Jet2<Scalar> operator*(const Jet2<Scalar>& a, Scalar c) {
  return {a.val * c, a.du * c, a.dv * c, a.duu * c, a.duv * c, a.dvv * c};
}
template <typename Scalar>
Jet2<Scalar> operator*(Scalar c, const Jet2<Scalar>& a) {
  return a * c;
}
template <typename Scalar>
Jet2<Scalar> operator/(const Jet2<Scalar>& a, Scalar c) {
  return a * (Scalar(1) / c);
}
template <typename Scalar>
Jet2<Scalar> operator/(Scalar c, const Jet2<Scalar>& a) {
  return reciprocal(a) * c;
}

template <typename Scalar>
Jet2<Scalar> sin(const Jet2<Scalar>& a) {
  using std::cos;
  using std::sin;
  const Scalar s = sin(a.val);
  return compose(a, s, cos(a.val), -s);
}

template <typename Scalar>
Jet2<Scalar> cos(const Jet2<Scalar>& a) {
  using std::cos;
  using std::sin;
  const Scalar c = cos(a.val);
  return compose(a, c, -sin(a.val), -c);
}

template <typename Scalar>
Jet2<Scalar> exp(const Jet2<Scalar>& a) {
  using std::exp;
  const Scalar e = exp(a.val);
  return compose(a, e, e, e);
}

template <typename Scalar>
Jet2<Scalar> log(const Jet2<Scalar>& a) {
  using std::log;
  const Scalar r = Scalar(1) / a.val;
  return compose(a, log(a.val), r, -r * r);
}

template <typename Scalar>
Jet2<Scalar> sqrt(const Jet2<Scalar>& a) {
  using std::sqrt;
  const Scalar s = sqrt(a.val);
  return compose(a, s, Scalar(0.5) / s, Scalar(-0.25) / (s * a.val));
}

/// Integer power. Negative exponents go through the reciprocal.
template <typename Scalar>
Jet2<Scalar> pow(const Jet2<Scalar>& a, int n) {
  using std::pow;
  if (n < 0) return reciprocal(pow(a, -n));
  if (n == 0) return Jet2<Scalar>::constant(Scalar(1));
  if (n == 1) return a;
  const Scalar x = a.val;
  const Scalar xn2 = pow(x, n - 2);
  return compose(a, xn2 * x * x, Scalar(n) * xn2 * x, Scalar(n) * Scalar(n - 1) * xn2);
}

}  // namespace gcflab
