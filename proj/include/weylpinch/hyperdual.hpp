#ifndef WEYLPINCH_HYPERDUAL_HPP
#define WEYLPINCH_HYPERDUAL_HPP

#include <array>
#include <cmath>

namespace weylpinch {

// -------------------------------------------------------------------
// Second-order forward-mode scalar: value, gradient and Hessian with
// respect to the four chart coordinates, propagated simultaneously.
// Equivalent to evaluating on hyper-dual numbers once per coordinate
// pair, but sharing the value/gradient work across all ten pairs.
// -------------------------------------------------------------------

struct HyperDual {
  double v = 0.0;
  std::array<double, 4> d{};   // d[k]   = df/dx_k
  std::array<double, 10> h{};  // packed upper triangle of d2f/dx_k dx_l
};

/// Packed index for the Hessian entry (k,l), k <= l.
constexpr int hd_index(int k, int l) {
  if (k > l) { int t = k; k = l; l = t; }
  constexpr int base[4] = {0, 4, 7, 9};
  return base[k] + (l - k);
}

inline HyperDual hd_const(double c) {
  HyperDual r;
  r.v = c;
  return r;
}

/// Coordinate seed: value with unit first derivative in slot `i`.
inline HyperDual hd_coord(double value, int i) {
  HyperDual r;
  r.v = value;
  r.d[i] = 1.0;
  return r;
}

inline HyperDual operator+(const HyperDual& a, const HyperDual& b) {
  HyperDual r;
  r.v = a.v + b.v;
  for (int k = 0; k < 4; ++k) r.d[k] = a.d[k] + b.d[k];
  for (int k = 0; k < 10; ++k) r.h[k] = a.h[k] + b.h[k];
  return r;
}

inline HyperDual operator-(const HyperDual& a, const HyperDual& b) {
  HyperDual r;
  r.v = a.v - b.v;
  for (int k = 0; k < 4; ++k) r.d[k] = a.d[k] - b.d[k];
  for (int k = 0; k < 10; ++k) r.h[k] = a.h[k] - b.h[k];
  return r;
}

inline HyperDual operator-(const HyperDual& a) {
  HyperDual r;
  r.v = -a.v;
  for (int k = 0; k < 4; ++k) r.d[k] = -a.d[k];
  for (int k = 0; k < 10; ++k) r.h[k] = -a.h[k];
  return r;
}

inline HyperDual operator*(const HyperDual& a, const HyperDual& b) {
  HyperDual r;
  r.v = a.v * b.v;
  for (int k = 0; k < 4; ++k) r.d[k] = a.d[k] * b.v + a.v * b.d[k];
  for (int k = 0; k < 4; ++k)
    for (int l = k; l < 4; ++l) {
      int i = hd_index(k, l);
      r.h[i] = a.h[i] * b.v + a.v * b.h[i] + a.d[k] * b.d[l] + a.d[l] * b.d[k];
    }
  return r;
}

/// f(x) composed through value, first and second derivative at x.v.
inline HyperDual hd_chain(const HyperDual& x, double f, double fp, double fpp) {
  HyperDual r;
  r.v = f;
  for (int k = 0; k < 4; ++k) r.d[k] = fp * x.d[k];
  for (int k = 0; k < 4; ++k)
    for (int l = k; l < 4; ++l) {
      int i = hd_index(k, l);
      r.h[i] = fp * x.h[i] + fpp * x.d[k] * x.d[l];
    }
  return r;
}

inline HyperDual operator/(const HyperDual& a, const HyperDual& b) {
  double iv = 1.0 / b.v;
  return a * hd_chain(b, iv, -iv * iv, 2.0 * iv * iv * iv);
}

inline HyperDual operator+(const HyperDual& a, double c) { return a + hd_const(c); }
inline HyperDual operator+(double c, const HyperDual& a) { return a + hd_const(c); }
inline HyperDual operator-(const HyperDual& a, double c) { return a - hd_const(c); }
inline HyperDual operator-(double c, const HyperDual& a) { return hd_const(c) - a; }
inline HyperDual operator*(const HyperDual& a, double c) { return a * hd_const(c); }
inline HyperDual operator*(double c, const HyperDual& a) { return a * hd_const(c); }
inline HyperDual operator/(const HyperDual& a, double c) { return a / hd_const(c); }
inline HyperDual operator/(double c, const HyperDual& a) { return hd_const(c) / a; }

inline HyperDual sin(const HyperDual& x) {
  double s = std::sin(x.v), c = std::cos(x.v);
  return hd_chain(x, s, c, -s);
}

inline HyperDual cos(const HyperDual& x) {
  double s = std::sin(x.v), c = std::cos(x.v);
  return hd_chain(x, c, -s, -c);
}

inline HyperDual tan(const HyperDual& x) {
  double t = std::tan(x.v);
  double sec2 = 1.0 + t * t;
  return hd_chain(x, t, sec2, 2.0 * t * sec2);
}

inline HyperDual sinh(const HyperDual& x) {
  double s = std::sinh(x.v), c = std::cosh(x.v);
  return hd_chain(x, s, c, s);
}

inline HyperDual cosh(const HyperDual& x) {
  double s = std::sinh(x.v), c = std::cosh(x.v);
  return hd_chain(x, c, s, c);
}

inline HyperDual tanh(const HyperDual& x) {
  double t = std::tanh(x.v);
  double sech2 = 1.0 - t * t;
  return hd_chain(x, t, sech2, -2.0 * t * sech2);
}

inline HyperDual exp(const HyperDual& x) {
  double e = std::exp(x.v);
  return hd_chain(x, e, e, e);
}

inline HyperDual log(const HyperDual& x) {
  double iv = 1.0 / x.v;
  return hd_chain(x, std::log(x.v), iv, -iv * iv);
}

inline HyperDual sqrt(const HyperDual& x) {
  double s = std::sqrt(x.v);
  double fp = 0.5 / s;
  return hd_chain(x, s, fp, -0.5 * fp / x.v);
}

} // namespace weylpinch

#endif
