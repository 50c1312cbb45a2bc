#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace homsim::detail {

/// Owning FFTW buffer + forward/backward plans of one length.
class FftwWorkspace {
 public:
  explicit FftwWorkspace(std::size_t length)
      : length_(length),
        data_(fftw_alloc_complex(length), &fftw_free),
        forward_(nullptr, &fftw_destroy_plan),
        backward_(nullptr, &fftw_destroy_plan) {
    if (!data_) throw std::bad_alloc();
    // FFTW_ESTIMATE keeps the plan (and therefore the bits) independent of timing.
    forward_.reset(fftw_plan_dft_1d(static_cast<int>(length), data_.get(), data_.get(), FFTW_FORWARD, FFTW_ESTIMATE));
    backward_.reset(
        fftw_plan_dft_1d(static_cast<int>(length), data_.get(), data_.get(), FFTW_BACKWARD, FFTW_ESTIMATE));
    if (!forward_ || !backward_) throw std::runtime_error("fftw plan creation failed");
  }

  std::complex<double>* data() { return reinterpret_cast<std::complex<double>*>(data_.get()); }
  std::size_t size() const { return length_; }
  void forward() { fftw_execute(forward_.get()); }
  void backward() { fftw_execute(backward_.get()); }

 private:
  std::size_t length_;
  std::unique_ptr<fftw_complex, decltype(&fftw_free)> data_;
  std::unique_ptr<fftw_plan_s, decltype(&fftw_destroy_plan)> forward_;
  std::unique_ptr<fftw_plan_s, decltype(&fftw_destroy_plan)> backward_;
};

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// Chirp-z (Bluestein) evaluation of
///   X_n = sum_k x_k exp(-i (u0 + k du) (t0 + n dt)),  n = 0 .. count-1
/// with two FFT convolutions of length >= x.size() + count - 1.
inline std::vector<std::complex<double>> chirp_z(std::span<const std::complex<double>> x, double u0, double du,
                                                 double t0, double dt, std::size_t count) {
  using C = std::complex<double>;
  const std::size_t K = x.size();
  std::vector<C> out(count);
  if (K == 0 || count == 0) return out;
  const std::size_t L = next_pow2(K + count - 1);
  const double alpha = du * dt;
  auto chirp = [alpha](double m) { return std::polar(1.0, 0.5 * alpha * m * m); };

  FftwWorkspace a(L), c(L);
  std::fill(a.data(), a.data() + L, C{});
  std::fill(c.data(), c.data() + L, C{});
  for (std::size_t k = 0; k < K; ++k) {
    const double kd = static_cast<double>(k);
    a.data()[k] = x[k] * std::polar(1.0, -kd * du * t0) * std::conj(chirp(kd));
  }
  for (std::size_t m = 0; m < count; ++m) c.data()[m] = chirp(static_cast<double>(m));
  for (std::size_t m = 1; m < K; ++m) c.data()[L - m] = chirp(static_cast<double>(m));

  a.forward();
  c.forward();
  for (std::size_t i = 0; i < L; ++i) a.data()[i] *= c.data()[i];
  a.backward();

  const double inv_L = 1.0 / static_cast<double>(L);
  for (std::size_t n = 0; n < count; ++n) {
    const double nd = static_cast<double>(n);
    out[n] = a.data()[n] * inv_L * std::polar(1.0, -u0 * (t0 + nd * dt)) * std::conj(chirp(nd));
  }
  return out;
}

}  // namespace homsim::detail
