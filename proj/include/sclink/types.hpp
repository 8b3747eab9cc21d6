#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sclink {

using Index = Eigen::Index;
using cdouble = std::complex<double>;

using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Thrown for every contract violation in the library (bad sizes, bad
/// parameters, numerically impossible requests).
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& what) {
  if (!condition) throw Error(what);
}

constexpr double kPi = 3.14159265358979323846;
constexpr double kSpeedOfLight = 299792458.0;   // m/s
constexpr double kPlanck = 6.62607015e-34;      // J s

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
inline double dbm_to_watt(double dbm) { return 1e-3 * db_to_linear(dbm); }
inline double watt_to_dbm(double w) { return linear_to_db(w / 1e-3); }

/// A single complex sample stream.
struct ComplexSeq {
  ComplexVector samples;
  double sample_rate = 1.0;  // Hz

  Index size() const { return samples.size(); }
};

/// Multi-channel baseband samples; one column per channel (e.g. pol-x, pol-y).
struct Waveform {
  ComplexMatrix samples;          // length x channels
  double sample_rate = 1.0;       // Hz
  std::vector<double> center_offsets;  // Hz, one per channel

  Index length() const { return samples.rows(); }
  Index channels() const { return samples.cols(); }

  ComplexSeq channel(Index c) const { return {samples.col(c), sample_rate}; }
};

/// 2M symbol-rate streams, stream 2m is pol-x and 2m+1 pol-y of subcarrier m
/// (0-based). Time runs down the rows.
struct SymbolFrame {
  ComplexMatrix streams;  // K x 2M
  double symbol_rate = 1.0;
  std::vector<bool> pilot_mask;  // length K, shared by all streams
  std::optional<ComplexMatrix> known_symbols;  // K x 2M

  Index length() const { return streams.rows(); }
  Index stream_count() const { return streams.cols(); }
  Index subcarriers() const { return streams.cols() / 2; }
};

}  // namespace sclink
