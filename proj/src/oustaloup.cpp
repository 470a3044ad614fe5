#include "hybridlfc/oustaloup.hpp"

#include <cmath>

#include <fmt/format.h>

#include "hybridlfc/error.hpp"

namespace hybridlfc {

std::complex<double> ZpkFilter::evaluate(std::complex<double> s) const {
  std::complex<double> h(gain, 0.0);
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    h *= (s - zeros[i]) / (s - poles[i]);
  }
  return h;
}

ZpkFilter oustaloup_zpk(double alpha, double w_b, double w_h, int n) {
  if (!(w_b > 0.0) || !(w_b < w_h)) {
    throw Error(ErrorCode::InvalidBand,
                fmt::format("invalid Oustaloup band [{}, {}]", w_b, w_h));
  }
  if (!(std::abs(alpha) <= 1.0)) {
    throw Error(ErrorCode::OrderOutOfRange,
                fmt::format("fractional order {} outside [-1, 1]", alpha));
  }
  if (n < 1) {
    throw Error(ErrorCode::InvalidArgument, "Oustaloup recursion depth must be >= 1");
  }

  const double ratio = w_h / w_b;
  const double sections = 2.0 * n + 1.0;
  ZpkFilter f;
  f.zeros.reserve(static_cast<std::size_t>(2 * n + 1));
  f.poles.reserve(static_cast<std::size_t>(2 * n + 1));
  for (int k = -n; k <= n; ++k) {
    const double zero_exp = (k + n + 0.5 * (1.0 - alpha)) / sections;
    const double pole_exp = (k + n + 0.5 * (1.0 + alpha)) / sections;
    f.zeros.push_back(-w_b * std::pow(ratio, zero_exp));
    f.poles.push_back(-w_b * std::pow(ratio, pole_exp));
  }
  f.gain = std::pow(w_h, alpha);
  return f;
}

ZpkFilter oustaloup_zpk(double alpha, const OustaloupBand& band) {
  return oustaloup_zpk(alpha, band.low, band.high, band.order_n);
}

LinearStateSpace zpk_to_state_space(const ZpkFilter& filter) {
  const auto n = static_cast<Eigen::Index>(filter.poles.size());
  LinearStateSpace ss;
  ss.A = Eigen::MatrixXd::Zero(n, n);
  ss.B = Eigen::VectorXd::Ones(n);
  ss.C.resize(n);
  // Section i sees u + sum_{j<i} (p_j - z_j) x_j, i.e. the output of the
  // sections before it.
  for (Eigen::Index i = 0; i < n; ++i) {
    const double p = filter.poles[static_cast<std::size_t>(i)];
    const double z = filter.zeros[static_cast<std::size_t>(i)];
    ss.A(i, i) = p;
    const double residue = p - z;
    for (Eigen::Index r = i + 1; r < n; ++r) ss.A(r, i) = residue;
    ss.C(i) = filter.gain * residue;
  }
  ss.D = filter.gain;
  return ss;
}

LinearStateSpace fractional_operator(double alpha, const OustaloupBand& band) {
  return zpk_to_state_space(oustaloup_zpk(alpha, band));
}

}  // namespace hybridlfc
