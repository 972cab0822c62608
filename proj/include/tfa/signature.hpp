#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfa/grid.hpp"
#include "tfa/rational.hpp"

namespace tfa {

struct SignatureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ternary fraction sum a_j 3^{-j}, a_j in {0,1}; kept as the digit string so
// comparisons stay exact at any depth. Digit j is 0 exactly when the point
// lies in the concentric child of its level-j cell, simultaneously on every
// axis.
struct Signature {
  std::vector<uint8_t> digits;  // a_1 .. a_J

  double value() const {
    double v = 0.0, p = 1.0;
    for (uint8_t a : digits) {
      p /= 3.0;
      v += a * p;
    }
    return v;
  }

  // exact value at the computed depth; 64-bit safe up to 39 digits, with a
  // truncation error below 3^{-J} / 2 against the untruncated sum
  Rat to_rational() const {
    size_t J = std::min<size_t>(digits.size(), 39);
    long long num = 0, den = 1;
    for (size_t j = 0; j < J; ++j) {
      num = num * 3 + digits[j];
      den *= 3;
    }
    return Rat(num, den);
  }

  int cmp(const Signature& o) const {
    size_t m = std::max(digits.size(), o.digits.size());
    for (size_t j = 0; j < m; ++j) {
      int a = j < digits.size() ? digits[j] : 0;
      int b = j < o.digits.size() ? o.digits[j] : 0;
      if (a != b) return a < b ? -1 : 1;
    }
    return 0;
  }
  bool operator<(const Signature& o) const { return cmp(o) < 0; }
  bool operator==(const Signature& o) const { return cmp(o) == 0; }
};

namespace detail {

// base-3^kappa digit stream of the fractional part of a rational, overflow
// free: state stays below the (fixed) denominator
struct TernaryStream {
  __int128 p;  // remainder numerator, 0 <= p < q
  __int128 q;
  long long base;
  bool terminated = false;  // hit an exact digit boundary

  TernaryStream(const Rat& x, long long b) : base(b) {
    q = x.den;
    __int128 n = x.num % q;
    if (n < 0) n += q;
    p = n;
  }
  long long next() {
    if (p == 0) {
      terminated = true;
      return 0;
    }
    __int128 t = p * base;
    long long d = (long long)(t / q);
    p = t - (__int128)d * q;
    return d;
  }
};

}  // namespace detail

inline bool has_triadic_coordinate(const GridConfig& g, const RatVec& eta,
                                   int depth) {
  long long base = g.branching();
  for (int i = 0; i < g.dim; ++i) {
    detail::TernaryStream st(eta[i] - g.shift[i], base);
    for (int j = 0; j <= depth + 1; ++j) {
      st.next();
      if (st.terminated) return true;
    }
  }
  return false;
}

inline Signature signature(const RatVec& eta, const GridConfig& g,
                           int depth = 40) {
  long long base = g.branching();
  long long centre = (base - 1) / 2;
  std::vector<detail::TernaryStream> st;
  for (int i = 0; i < g.dim; ++i)
    st.emplace_back(eta[i] - g.shift[i], base);
  // the level-j cell membership in the concentric child reads digit j+1
  for (auto& s : st) s.next();  // discard digit 1 (level-0 position)
  Signature sig;
  sig.digits.reserve(depth);
  for (int j = 1; j <= depth; ++j) {
    bool central = true;
    for (auto& s : st) {
      long long d = s.next();
      if (s.terminated)
        throw SignatureError("ill-defined-signature: triadic coordinate");
      if (d != centre) central = false;
    }
    sig.digits.push_back(central ? 0 : 1);
  }
  return sig;
}

}  // namespace tfa
