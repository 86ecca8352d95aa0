#include "torusdirac/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <new>

namespace torusdirac {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

FftPlan::FftPlan(int rows, int cols, int batch)
    : size_(static_cast<std::size_t>(rows) * cols * batch) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  data_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(size_));
  if (data_ == nullptr) throw std::bad_alloc();
  auto* buf = reinterpret_cast<fftw_complex*>(data_);
  const int dims2[2] = {rows, cols};
  const int rank = rows == 1 ? 1 : 2;
  const int* dims = rows == 1 ? &dims2[1] : dims2;
  const int dist = rows * cols;
  forward_plan_ = fftw_plan_many_dft(rank, dims, batch, buf, nullptr, 1, dist, buf, nullptr, 1,
                                     dist, FFTW_FORWARD, FFTW_ESTIMATE);
  backward_plan_ = fftw_plan_many_dft(rank, dims, batch, buf, nullptr, 1, dist, buf, nullptr, 1,
                                      dist, FFTW_BACKWARD, FFTW_ESTIMATE);
}

FftPlan::~FftPlan() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
  fftw_free(data_);
}

void FftPlan::forward() { fftw_execute(static_cast<fftw_plan>(forward_plan_)); }
void FftPlan::backward() { fftw_execute(static_cast<fftw_plan>(backward_plan_)); }

}  // namespace torusdirac
