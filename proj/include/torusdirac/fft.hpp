#ifndef TORUSDIRAC_FFT_HPP
#define TORUSDIRAC_FFT_HPP

#include <complex>
#include <cstddef>

namespace torusdirac {

// In-place complex FFT over an owned, SIMD-aligned buffer. Holds `batch`
// contiguous transforms of shape rows x cols (rows == 1 for 1-D). Both
// directions are unnormalized; backward uses exp(+i ...).
//
// Plans are made with FFTW_ESTIMATE so results are bit-reproducible from run
// to run. Construction is serialized internally; execution of distinct
// objects is safe from several threads.
class FftPlan {
 public:
  FftPlan(int rows, int cols, int batch = 1);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  std::complex<double>* data() { return data_; }
  const std::complex<double>* data() const { return data_; }
  std::size_t size() const { return size_; }

  void forward();
  void backward();

 private:
  std::complex<double>* data_ = nullptr;
  std::size_t size_ = 0;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

}  // namespace torusdirac

#endif  // TORUSDIRAC_FFT_HPP
