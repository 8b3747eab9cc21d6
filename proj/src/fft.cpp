#include "sclink/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace sclink {

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
class PlanCache {
public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int n, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    // In-place plan: every execution below passes the same array as in and out.
    auto* buf = fftw_alloc_complex(static_cast<size_t>(n));
    fftw_plan plan = fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    require(plan != nullptr, "fft: FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

void execute(Eigen::Ref<ComplexVector> x, int sign) {
  const Index n = x.size();
  require(is_power_of_two(n), "fft: length " + std::to_string(n) + " is not a power of two");
  if (n == 1) return;
  auto* data = reinterpret_cast<fftw_complex*>(x.data());
  fftw_execute_dft(PlanCache::instance().get(static_cast<int>(n), sign), data, data);
}

}  // namespace

bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

void fft_inplace(Eigen::Ref<ComplexVector> x) { execute(x, FFTW_FORWARD); }

void ifft_inplace(Eigen::Ref<ComplexVector> x) {
  execute(x, FFTW_BACKWARD);
  x /= static_cast<double>(x.size());
}

ComplexVector fft(const Eigen::Ref<const ComplexVector>& x) {
  ComplexVector y = x;
  fft_inplace(y);
  return y;
}

ComplexVector ifft(const Eigen::Ref<const ComplexVector>& x) {
  ComplexVector y = x;
  ifft_inplace(y);
  return y;
}

ComplexSeq fft_forward(const ComplexSeq& seq) { return {fft(seq.samples), seq.sample_rate}; }

ComplexSeq fft_inverse(const ComplexSeq& seq) { return {ifft(seq.samples), seq.sample_rate}; }

RealVector angular_frequency_grid(Index n, double sample_rate) {
  RealVector w(n);
  const double df = sample_rate / static_cast<double>(n);
  for (Index k = 0; k < n; ++k) w[k] = 2.0 * kPi * df * static_cast<double>(signed_bin(k, n));
  return w;
}

}  // namespace sclink
