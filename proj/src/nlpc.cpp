#include "sclink/jscpr.hpp"
#include "sclink/lstsq.hpp"

#include <algorithm>
#include <cmath>

namespace sclink {

void NlpcFilter::validate() const {
  require(taps.outputs() == taps.inputs() && taps.outputs() > 0, "NlpcFilter: taps must be square M x M");
  require(static_cast<Index>(taps.coeffs.size()) == taps.span(), "NlpcFilter: tap count != 2N_c+1");
  require(is_power_of_two(n_fft) && n_fft > 2 * taps.half_length, "NlpcFilter: n_fft must be a power of two > 2N_c");
  require(mean_intensity.size() == taps.outputs(), "NlpcFilter: mean intensity has wrong length");
  require(taps.all_finite() && mean_intensity.allFinite(), "NlpcFilter: non-finite coefficients");
}

RealMatrix compute_intensities(const SymbolFrame& frame) {
  require(frame.stream_count() % 2 == 0 && frame.stream_count() > 0,
          "compute_intensities: frame must hold 2M streams");
  const Index m_count = frame.subcarriers();
  RealMatrix intensity(frame.length(), m_count);
  for (Index m = 0; m < m_count; ++m)
    intensity.col(m) = frame.streams.col(2 * m).cwiseAbs2() + frame.streams.col(2 * m + 1).cwiseAbs2();
  return intensity;
}

RealMatrix nlpc_target_phase(const SymbolFrame& frame, Index detrend_window) {
  require(frame.known_symbols.has_value(), "nlpc_target_phase: training frame lacks known symbols");
  const auto& x = *frame.known_symbols;
  require(x.rows() == frame.length() && x.cols() == frame.stream_count(),
          "nlpc_target_phase: known symbols do not match the frame");
  const Index k_sym = frame.length();
  const Index m_count = frame.subcarriers();

  ComplexMatrix corr(k_sym, m_count);
  for (Index m = 0; m < m_count; ++m)
    corr.col(m) = x.col(2 * m).conjugate().cwiseProduct(frame.streams.col(2 * m)) +
                  x.col(2 * m + 1).conjugate().cwiseProduct(frame.streams.col(2 * m + 1));

  RealMatrix target(k_sym, m_count);
  if (detrend_window <= 0) {
    for (Index m = 0; m < m_count; ++m)
      for (Index k = 0; k < k_sym; ++k) target(k, m) = std::arg(corr(k, m));
    return target;
  }
  const Index half = detrend_window / 2;
  for (Index m = 0; m < m_count; ++m) {
    ComplexVector prefix(k_sym + 1);
    prefix[0] = 0.0;
    for (Index k = 0; k < k_sym; ++k) prefix[k + 1] = prefix[k] + corr(k, m);
    for (Index k = 0; k < k_sym; ++k) {
      const Index lo = std::max<Index>(0, k - half);
      const Index hi = std::min<Index>(k_sym, k + half + 1);
      const cdouble trend = prefix[hi] - prefix[lo];
      target(k, m) = std::arg(corr(k, m) * std::conj(trend));
    }
  }
  return target;
}

NlpcResult nlpc_apply(const SymbolFrame& frame, const NlpcFilter& filter) {
  filter.validate();
  require(frame.subcarriers() == filter.subcarriers(), "nlpc_apply: filter built for " +
                                                          std::to_string(filter.subcarriers()) +
                                                          " subcarriers, frame has " +
                                                          std::to_string(frame.subcarriers()));
  RealMatrix centered = compute_intensities(frame);
  centered.rowwise() -= filter.mean_intensity.transpose();

  NlpcResult out;
  out.theta = mimo_convolve_overlap_save<double>(centered, filter.taps, filter.n_fft);
  out.y = frame;
  for (Index m = 0; m < filter.subcarriers(); ++m)
    for (Index k = 0; k < frame.length(); ++k) {
      const cdouble rot = std::polar(1.0, -out.theta(k, m));
      out.y.streams(k, 2 * m) *= rot;
      out.y.streams(k, 2 * m + 1) *= rot;
    }
  return out;
}

namespace {

// Normal-equation accumulator for one frame's edge-replicated regressors
// X_{(j,a)}(k) = I_a(clamp(k - j)). Gram entries are window sums of lagged
// products, read off prefix sums instead of forming X.
void accumulate_gram(const RealMatrix& intensity, Index half, RealMatrix& gram, RealVector& column_sums) {
  const Index k_sym = intensity.rows();
  const Index m_count = intensity.cols();
  const Index ext = k_sym + 2 * half;  // u = -N .. K-1+N, stored at u + N
  auto sample = [&](Index a, Index t) { return intensity(std::clamp<Index>(t, 0, k_sym - 1), a); };
  auto column = [&](Index j, Index a) { return (j + half) * m_count + a; };

  // prefix[u + N + 1] = sum_{v=-N}^{u} q(v)
  std::vector<double> prefix(static_cast<size_t>(ext + 1));
  auto window_sum = [&](Index j) {
    // sum over u = -j .. K-1-j
    return prefix[static_cast<size_t>(k_sym - 1 - j + half + 1)] - prefix[static_cast<size_t>(-j + half)];
  };

  for (Index a = 0; a < m_count; ++a) {
    prefix[0] = 0.0;
    for (Index u = -half; u < k_sym + half; ++u)
      prefix[static_cast<size_t>(u + half + 1)] = prefix[static_cast<size_t>(u + half)] + sample(a, u);
    for (Index j = -half; j <= half; ++j) column_sums[column(j, a)] += window_sum(j);
  }

  for (Index a = 0; a < m_count; ++a) {
    for (Index b = a; b < m_count; ++b) {
      for (Index d = -2 * half; d <= 2 * half; ++d) {
        if (a == b && d < 0) continue;
        prefix[0] = 0.0;
        for (Index u = -half; u < k_sym + half; ++u)
          prefix[static_cast<size_t>(u + half + 1)] =
              prefix[static_cast<size_t>(u + half)] + sample(a, u) * sample(b, u + d);
        // entry ((j,a), (j',b)) with j' = j - d
        for (Index j = std::max(-half, -half + d); j <= std::min(half, half + d); ++j) {
          const double s = window_sum(j);
          const Index r = column(j, a), c = column(j - d, b);
          gram(r, c) += s;
          if (r != c) gram(c, r) += s;
        }
      }
    }
  }
}

}  // namespace

NlpcFilter nlpc_train(const std::vector<SymbolFrame>& frames, const NlpcTrainOptions& options) {
  require(!frames.empty(), "nlpc_train: no training frames");
  require(options.half_length >= 0, "nlpc_train: negative half length");
  require(is_power_of_two(options.n_fft) && options.n_fft > 2 * options.half_length,
          "nlpc_train: n_fft must be a power of two > 2N_c");
  require(options.ridge >= 0.0, "nlpc_train: ridge must be >= 0");

  const Index m_count = frames.front().subcarriers();
  const Index half = options.half_length;
  const Index dim = m_count * (2 * half + 1);

  std::vector<RealMatrix> intensities;
  std::vector<RealMatrix> targets;
  Index total = 0;
  RealVector mean_intensity = RealVector::Zero(m_count);
  RealVector mean_target = RealVector::Zero(m_count);
  for (const auto& f : frames) {
    require(f.subcarriers() == m_count, "nlpc_train: frames disagree on the subcarrier count");
    intensities.push_back(compute_intensities(f));
    targets.push_back(nlpc_target_phase(f, options.detrend_window));
    mean_intensity += intensities.back().colwise().sum().transpose();
    mean_target += targets.back().colwise().sum().transpose();
    total += f.length();
  }
  require(total > dim, "nlpc_train: fewer training symbols than filter coefficients");
  mean_intensity /= static_cast<double>(total);
  mean_target /= static_cast<double>(total);

  RealMatrix gram = RealMatrix::Zero(dim, dim);
  RealVector column_sums = RealVector::Zero(dim);
  RealMatrix rhs = RealMatrix::Zero(dim, m_count);
  for (size_t f = 0; f < frames.size(); ++f) {
    const RealMatrix& inten = intensities[f];
    const Index k_sym = inten.rows();
    accumulate_gram(inten, half, gram, column_sums);
    RealMatrix centered_target = targets[f];
    centered_target.rowwise() -= mean_target.transpose();
    // rhs((j,a), m) = sum_k I_a(clamp(k - j)) * target_m(k)
    for (Index a = 0; a < m_count; ++a)
      for (Index j = -half; j <= half; ++j) {
        const Index r = (j + half) * m_count + a;
        for (Index m = 0; m < m_count; ++m) {
          double s = 0.0;
          for (Index k = 0; k < k_sym; ++k) s += inten(std::clamp<Index>(k - j, 0, k_sym - 1), a) * centered_target(k, m);
          rhs(r, m) += s;
        }
      }
  }
  gram.noalias() -= column_sums * column_sums.transpose() / static_cast<double>(total);

  const RealMatrix solution = solve_normal_equations(gram, rhs, options.ridge, "nlpc_train");

  NlpcFilter filter;
  filter.n_fft = options.n_fft;
  filter.mean_intensity = mean_intensity;
  filter.taps = RealMimoTaps::zeros(m_count, m_count, half);
  for (Index j = -half; j <= half; ++j)
    for (Index m = 0; m < m_count; ++m)
      for (Index a = 0; a < m_count; ++a) filter.taps.at(j)(m, a) = solution((j + half) * m_count + a, m);
  return filter;
}

}  // namespace sclink
