#pragma once

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace tfa {

// Exact rational on int64 with __int128 intermediates. Denominator stays
// positive and reduced; construction throws on overflow rather than wrap.
struct Rat {
  long long num = 0;
  long long den = 1;

  Rat() = default;
  Rat(long long n) : num(n), den(1) {}
  Rat(long long n, long long d) : num(n), den(d) {
    if (d == 0) throw std::invalid_argument("Rat: zero denominator");
    reduce_small();
  }

  static Rat from128(__int128 n, __int128 d) {
    if (d == 0) throw std::invalid_argument("Rat: zero denominator");
    if (d < 0) { n = -n; d = -d; }
    __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
    constexpr __int128 lim = __int128(INT64_MAX);
    if (n > lim || n < -lim || d > lim)
      throw std::overflow_error("Rat: value exceeds 64-bit range");
    Rat r;
    r.num = (long long)n;
    r.den = (long long)d;
    return r;
  }

  double to_double() const { return double(num) / double(den); }
  bool is_zero() const { return num == 0; }

  Rat operator-() const { Rat r; r.num = -num; r.den = den; return r; }
  Rat operator+(const Rat& o) const {
    return from128((__int128)num * o.den + (__int128)o.num * den,
                   (__int128)den * o.den);
  }
  Rat operator-(const Rat& o) const {
    return from128((__int128)num * o.den - (__int128)o.num * den,
                   (__int128)den * o.den);
  }
  Rat operator*(const Rat& o) const {
    return from128((__int128)num * o.num, (__int128)den * o.den);
  }
  Rat operator/(const Rat& o) const {
    if (o.num == 0) throw std::invalid_argument("Rat: division by zero");
    return from128((__int128)num * o.den, (__int128)den * o.num);
  }
  Rat& operator+=(const Rat& o) { *this = *this + o; return *this; }
  Rat& operator-=(const Rat& o) { *this = *this - o; return *this; }
  Rat& operator*=(const Rat& o) { *this = *this * o; return *this; }
  Rat& operator/=(const Rat& o) { *this = *this / o; return *this; }

  // three-way compare without overflow
  int cmp(const Rat& o) const {
    __int128 l = (__int128)num * o.den;
    __int128 r = (__int128)o.num * den;
    return l < r ? -1 : (l > r ? 1 : 0);
  }
  bool operator<(const Rat& o) const { return cmp(o) < 0; }
  bool operator<=(const Rat& o) const { return cmp(o) <= 0; }
  bool operator>(const Rat& o) const { return cmp(o) > 0; }
  bool operator>=(const Rat& o) const { return cmp(o) >= 0; }
  bool operator==(const Rat& o) const { return num == o.num && den == o.den; }
  bool operator!=(const Rat& o) const { return !(*this == o); }

  Rat abs() const { return num < 0 ? -*this : *this; }

  // largest integer <= value
  long long floor() const {
    long long q = num / den;
    if (num % den != 0 && num < 0) --q;
    return q;
  }

  std::string str() const {
    return den == 1 ? std::to_string(num)
                    : std::to_string(num) + "/" + std::to_string(den);
  }

 private:
  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) { __int128 t = a % b; a = b; b = t; }
    return a < 0 ? -a : a;
  }
  void reduce_small() {
    if (den < 0) { num = -num; den = -den; }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
  }
};

inline Rat rat(long long n, long long d = 1) { return Rat(n, d); }

// 3^e as an exact rational, |e| <= 39 (3^39 < 2^63)
inline Rat pow3(int e) {
  int a = e < 0 ? -e : e;
  if (a > 39) throw std::overflow_error("pow3: exponent out of range");
  long long p = 1;
  for (int i = 0; i < a; ++i) p *= 3;
  return e >= 0 ? Rat(p) : Rat(1, p);
}

using RatVec = std::vector<Rat>;

inline Rat dot(const RatVec& a, const RatVec& b) {
  Rat s(0);
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rat norm2_sq(const RatVec& a) { return dot(a, a); }

inline RatVec operator-(const RatVec& a, const RatVec& b) {
  RatVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline RatVec operator+(const RatVec& a, const RatVec& b) {
  RatVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

// floor(x / step) for positive step
inline long long floor_div(const Rat& x, const Rat& step) {
  return (x / step).floor();
}

}  // namespace tfa
