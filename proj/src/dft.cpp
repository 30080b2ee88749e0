#include "velvetkit/dft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace velvetkit {
namespace {

// FFTW planning is not thread-safe and plans are tied to the buffers they
// were created with; keep one cached plan + scratch pair per size and
// serialize executions (callers are batch jobs, not latency-sensitive).
struct RealPlans {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
  double* real = nullptr;
  fftw_complex* cplx = nullptr;
  std::size_t n = 0;

  explicit RealPlans(std::size_t size) : n(size) {
    real = fftw_alloc_real(n);
    cplx = fftw_alloc_complex(n / 2 + 1);
    fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), real, cplx, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(static_cast<int>(n), cplx, real, FFTW_ESTIMATE);
  }
  ~RealPlans() {
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
    fftw_free(real);
    fftw_free(cplx);
  }
};

struct ComplexPlans {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  std::size_t n = 0;

  explicit ComplexPlans(std::size_t size) : n(size) {
    in = fftw_alloc_complex(n);
    out = fftw_alloc_complex(n);
    fwd = fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_FORWARD,
                           FFTW_ESTIMATE);
    inv = fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_BACKWARD,
                           FFTW_ESTIMATE);
  }
  ~ComplexPlans() {
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
    fftw_free(in);
    fftw_free(out);
  }
};

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

RealPlans& real_plans(std::size_t n) {
  static std::map<std::size_t, RealPlans> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.try_emplace(n, n).first;
  return it->second;
}

ComplexPlans& complex_plans(std::size_t n) {
  static std::map<std::size_t, ComplexPlans> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.try_emplace(n, n).first;
  return it->second;
}

}  // namespace

CVec rfft(const Vec& x) {
  if (x.empty()) throw std::invalid_argument("rfft: empty input");
  std::lock_guard<std::mutex> lock(plan_mutex());
  RealPlans& p = real_plans(x.size());
  std::memcpy(p.real, x.data(), x.size() * sizeof(double));
  fftw_execute(p.fwd);
  CVec out(x.size() / 2 + 1);
  std::memcpy(static_cast<void*>(out.data()), p.cplx,
              out.size() * sizeof(fftw_complex));
  return out;
}

Vec irfft(const CVec& spectrum, std::size_t n) {
  if (n == 0 || spectrum.size() != n / 2 + 1)
    throw std::invalid_argument("irfft: spectrum size must be n/2+1");
  std::lock_guard<std::mutex> lock(plan_mutex());
  RealPlans& p = real_plans(n);
  std::memcpy(p.cplx, spectrum.data(), spectrum.size() * sizeof(fftw_complex));
  fftw_execute(p.inv);
  Vec out(n);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = p.real[i] * scale;
  return out;
}

CVec fft(const CVec& x) {
  if (x.empty()) throw std::invalid_argument("fft: empty input");
  std::lock_guard<std::mutex> lock(plan_mutex());
  ComplexPlans& p = complex_plans(x.size());
  std::memcpy(p.in, x.data(), x.size() * sizeof(fftw_complex));
  fftw_execute(p.fwd);
  CVec out(x.size());
  std::memcpy(static_cast<void*>(out.data()), p.out,
              x.size() * sizeof(fftw_complex));
  return out;
}

CVec ifft(const CVec& x) {
  if (x.empty()) throw std::invalid_argument("ifft: empty input");
  std::lock_guard<std::mutex> lock(plan_mutex());
  ComplexPlans& p = complex_plans(x.size());
  std::memcpy(p.in, x.data(), x.size() * sizeof(fftw_complex));
  fftw_execute(p.inv);
  CVec out(x.size());
  const double scale = 1.0 / static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = std::complex<double>(p.out[i][0] * scale, p.out[i][1] * scale);
  }
  return out;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

Vec fft_convolve(const Vec& x, const Vec& h) {
  if (x.empty() || h.empty())
    throw std::invalid_argument("fft_convolve: empty input");
  const std::size_t out_len = x.size() + h.size() - 1;
  const std::size_t n = next_pow2(out_len);
  Vec xp(n, 0.0), hp(n, 0.0);
  std::memcpy(xp.data(), x.data(), x.size() * sizeof(double));
  std::memcpy(hp.data(), h.data(), h.size() * sizeof(double));
  CVec X = rfft(xp);
  CVec H = rfft(hp);
  for (std::size_t i = 0; i < X.size(); ++i) X[i] *= H[i];
  Vec y = irfft(X, n);
  y.resize(out_len);
  return y;
}

Vec overlap_add_convolve(const Vec& x, const Vec& h, std::size_t block) {
  if (x.empty() || h.empty())
    throw std::invalid_argument("overlap_add_convolve: empty input");
  if (block == 0) block = next_pow2(8 * h.size());
  block = next_pow2(block);
  if (block < 2 * h.size()) block = next_pow2(2 * h.size());
  const std::size_t hop = block - h.size() + 1;

  Vec hp(block, 0.0);
  std::memcpy(hp.data(), h.data(), h.size() * sizeof(double));
  const CVec H = rfft(hp);

  Vec y(x.size() + h.size() - 1, 0.0);
  Vec seg(block);
  for (std::size_t start = 0; start < x.size(); start += hop) {
    const std::size_t len = std::min(hop, x.size() - start);
    std::fill(seg.begin(), seg.end(), 0.0);
    std::memcpy(seg.data(), x.data() + start, len * sizeof(double));
    CVec S = rfft(seg);
    for (std::size_t i = 0; i < S.size(); ++i) S[i] *= H[i];
    Vec part = irfft(S, block);
    const std::size_t tail = std::min(len + h.size() - 1, y.size() - start);
    for (std::size_t i = 0; i < tail; ++i) y[start + i] += part[i];
  }
  return y;
}

}  // namespace velvetkit
