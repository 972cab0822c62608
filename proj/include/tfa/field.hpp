#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace tfa {

using cplx = std::complex<double>;

// Uniform periodic grid on [0,1)^n with the integer frequency lattice
// folded to [-N/2, N/2)^n. N must factor into powers of 2 and 3.
struct TorusGrid {
  int n = 2;
  int N = 64;

  TorusGrid() = default;
  TorusGrid(int dim, int samples) : n(dim), N(samples) {
    if (n < 1 || n > 3) throw std::invalid_argument("TorusGrid: dim 1..3");
    int m = N;
    while (m % 2 == 0) m /= 2;
    while (m % 3 == 0) m /= 3;
    if (m != 1 || N < 2)
      throw std::invalid_argument("TorusGrid: N must be 2^a * 3^b");
  }

  size_t cells() const {
    size_t c = 1;
    for (int i = 0; i < n; ++i) c *= (size_t)N;
    return c;
  }
  double cell_volume() const { return 1.0 / double(cells()); }

  // signed frequency of a raw index
  int freq(int k) const { return k < N - N / 2 ? k : k - N; }
  int index_of_freq(int f) const { return f >= 0 ? f : f + N; }

  size_t flat(const std::array<int, 3>& ix) const {
    size_t r = 0;
    for (int i = 0; i < n; ++i) r = r * (size_t)N + (size_t)ix[i];
    return r;
  }
  std::array<int, 3> unflat(size_t id) const {
    std::array<int, 3> ix{0, 0, 0};
    for (int i = n - 1; i >= 0; --i) {
      ix[i] = int(id % (size_t)N);
      id /= (size_t)N;
    }
    return ix;
  }
  // sample positions sit at the low corner of each cell [k/N, (k+1)/N)
  double coord(int k) const { return double(k) / double(N); }

  bool operator==(const TorusGrid& o) const { return n == o.n && N == o.N; }
};

// ---- mixed-radix FFT (radix 2 and 3), plan-cached ---------------------------

namespace fftcore {

struct Plan {
  int N;
  std::vector<cplx> tw;  // e^{-2pi i k / N}
  explicit Plan(int n) : N(n), tw(n) {
    for (int k = 0; k < n; ++k) {
      double a = -2.0 * std::numbers::pi * double(k) / double(n);
      tw[k] = cplx(std::cos(a), std::sin(a));
    }
  }
};

inline const Plan& plan_for(int N) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<Plan>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(N);
  if (it == cache.end())
    it = cache.emplace(N, std::make_unique<Plan>(N)).first;
  return *it->second;
}

// recursive decimation-in-time over strided data; out contiguous
inline void fft_rec(const cplx* in, cplx* out, int n, int stride,
                    const Plan& plan, int sign) {
  if (n == 1) {
    out[0] = in[0];
    return;
  }
  int root = plan.N;
  auto twiddle = [&](long long k) -> cplx {
    long long idx = (k * (root / n)) % root;
    cplx w = plan.tw[idx];
    return sign < 0 ? w : std::conj(w);
  };
  if (n % 2 == 0) {
    int h = n / 2;
    fft_rec(in, out, h, stride * 2, plan, sign);
    fft_rec(in + stride, out + h, h, stride * 2, plan, sign);
    for (int k = 0; k < h; ++k) {
      cplx e = out[k], o = twiddle(k) * out[k + h];
      out[k] = e + o;
      out[k + h] = e - o;
    }
    return;
  }
  if (n % 3 == 0) {
    int h = n / 3;
    fft_rec(in, out, h, stride * 3, plan, sign);
    fft_rec(in + stride, out + h, h, stride * 3, plan, sign);
    fft_rec(in + 2 * stride, out + 2 * h, h, stride * 3, plan, sign);
    const double s3 = std::sqrt(3.0) / 2.0;
    const cplx w3a(-0.5, sign < 0 ? -s3 : s3);   // e^{sign*2pi i/3}
    const cplx w3b = std::conj(w3a);
    for (int k = 0; k < h; ++k) {
      cplx a = out[k];
      cplx b = twiddle(k) * out[k + h];
      cplx c = twiddle(2 * k) * out[k + 2 * h];
      out[k] = a + b + c;
      out[k + h] = a + w3a * b + w3b * c;
      out[k + 2 * h] = a + w3b * b + w3a * c;
    }
    return;
  }
  throw std::invalid_argument("fft: length not of the form 2^a 3^b");
}

inline void fft_1d(std::vector<cplx>& data, int sign) {
  int n = (int)data.size();
  static thread_local std::vector<cplx> buf;
  buf.resize(n);
  fft_rec(data.data(), buf.data(), n, 1, plan_for(n), sign);
  data.swap(buf);
}

}  // namespace fftcore

// Complex samples on a torus grid, in either representation. The spectral
// convention is the Fourier-series one: f(x) = sum_xi c_xi e^{2pi i xi.x},
// so Parseval reads mean(|f|^2) = sum |c|^2 exactly on band-limited data.
struct DiscreteField {
  TorusGrid grid;
  bool spectral = false;
  std::vector<cplx> a;

  DiscreteField() = default;
  explicit DiscreteField(const TorusGrid& g, bool spec = false)
      : grid(g), spectral(spec), a(g.cells(), cplx(0.0)) {}

  static DiscreteField zeros(const TorusGrid& g) { return DiscreteField(g); }

  cplx& at(const std::array<int, 3>& ix) { return a[grid.flat(ix)]; }
  const cplx& at(const std::array<int, 3>& ix) const { return a[grid.flat(ix)]; }

  // transform along each axis in turn
  void transform_axes(int sign) {
    int N = grid.N, n = grid.n;
    std::vector<cplx> line((size_t)N);
    size_t total = grid.cells();
    for (int axis = 0; axis < n; ++axis) {
      size_t stride = 1;
      for (int i = axis + 1; i < n; ++i) stride *= (size_t)N;
      size_t block = stride * (size_t)N;
      for (size_t base = 0; base < total; base += block) {
        for (size_t off = 0; off < stride; ++off) {
          for (int k = 0; k < N; ++k) line[k] = a[base + off + stride * k];
          fftcore::fft_1d(line, sign);
          for (int k = 0; k < N; ++k) a[base + off + stride * k] = line[k];
        }
      }
    }
  }

  void to_spectral() {
    if (spectral) return;
    transform_axes(-1);
    double inv = 1.0 / double(grid.cells());
    for (auto& c : a) c *= inv;
    spectral = true;
  }
  void to_space() {
    if (!spectral) return;
    transform_axes(+1);
    spectral = false;
  }
  DiscreteField as_spectral() const {
    DiscreteField f = *this;
    f.to_spectral();
    return f;
  }
  DiscreteField as_space() const {
    DiscreteField f = *this;
    f.to_space();
    return f;
  }

  double norm_l2() const {
    double s = 0.0;
    for (const auto& c : a) s += std::norm(c);
    if (!spectral) s /= double(grid.cells());
    return std::sqrt(s);
  }

  double norm_lp(double p) const {
    if (spectral) return as_space().norm_lp(p);
    double s = 0.0;
    for (const auto& c : a) s += std::pow(std::abs(c), p);
    return std::pow(s / double(grid.cells()), 1.0 / p);
  }

  DiscreteField& operator+=(const DiscreteField& o) {
    for (size_t i = 0; i < a.size(); ++i) a[i] += o.a[i];
    return *this;
  }
  DiscreteField& operator-=(const DiscreteField& o) {
    for (size_t i = 0; i < a.size(); ++i) a[i] -= o.a[i];
    return *this;
  }
  DiscreteField& operator*=(cplx z) {
    for (auto& c : a) c *= z;
    return *this;
  }
};

// L2 inner product <f, g>; both fields in the same representation
inline cplx inner(const DiscreteField& f, const DiscreteField& g) {
  if (f.spectral != g.spectral)
    throw std::invalid_argument("inner: representation mismatch");
  cplx s(0.0);
  for (size_t i = 0; i < f.a.size(); ++i) s += f.a[i] * std::conj(g.a[i]);
  if (!f.spectral) s /= double(f.grid.cells());
  return s;
}

// ---- binary field I/O --------------------------------------------------------
//
// little-endian header: magic "TWF1", u32 n, u32 N, u8 domain flag,
// then row-major complex64 pairs (float32 re, float32 im).

inline void write_field(const DiscreteField& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_field: cannot open " + path);
  os.write("TWF1", 4);
  uint32_t n = (uint32_t)f.grid.n, N = (uint32_t)f.grid.N;
  uint8_t dom = f.spectral ? 1 : 0;
  os.write(reinterpret_cast<const char*>(&n), 4);
  os.write(reinterpret_cast<const char*>(&N), 4);
  os.write(reinterpret_cast<const char*>(&dom), 1);
  for (const auto& c : f.a) {
    float re = (float)c.real(), im = (float)c.imag();
    os.write(reinterpret_cast<const char*>(&re), 4);
    os.write(reinterpret_cast<const char*>(&im), 4);
  }
}

inline DiscreteField read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_field: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (std::memcmp(magic, "TWF1", 4) != 0)
    throw std::runtime_error("read_field: bad magic");
  uint32_t n = 0, N = 0;
  uint8_t dom = 0;
  is.read(reinterpret_cast<char*>(&n), 4);
  is.read(reinterpret_cast<char*>(&N), 4);
  is.read(reinterpret_cast<char*>(&dom), 1);
  DiscreteField f(TorusGrid((int)n, (int)N), dom != 0);
  for (auto& c : f.a) {
    float re = 0, im = 0;
    is.read(reinterpret_cast<char*>(&re), 4);
    is.read(reinterpret_cast<char*>(&im), 4);
    c = cplx(re, im);
  }
  if (!is) throw std::runtime_error("read_field: truncated payload");
  return f;
}

// CSV export of a 1D or 2D slice (RFC-4180 line endings are handled by the
// csv writer; this emits plain numeric rows)
inline void write_slice_csv(const DiscreteField& f, const std::string& path,
                            int fixed_last = 0) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_slice_csv: cannot open " + path);
  os << "i,j,re,im\r\n";
  int N = f.grid.N;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < (f.grid.n >= 2 ? N : 1); ++j) {
      std::array<int, 3> ix{i, j, fixed_last};
      if (f.grid.n == 1) ix = {i, 0, 0};
      const cplx& c = f.at(ix);
      os << i << "," << j << "," << c.real() << "," << c.imag() << "\r\n";
    }
  }
}

}  // namespace tfa
