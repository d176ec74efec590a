#pragma once

#include <complex>
#include <mutex>

#include <fftw3.h>

namespace trapres::model {

/// Unnormalised in-place batch of 1D complex transforms; sign -1 forward, +1 backward.
/// Planning is serialised because the FFTW planner is not thread-safe.
inline void fft_many(std::complex<double>* data, int n, int howmany, int stride, int dist, int sign) {
  static std::mutex planner;
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lk(planner);
    auto* p = reinterpret_cast<fftw_complex*>(data);
    plan = fftw_plan_many_dft(1, &n, howmany, p, nullptr, stride, dist, p, nullptr, stride, dist,
                              sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lk(planner);
    fftw_destroy_plan(plan);
  }
}

}  // namespace trapres::model
