#include "hybridlfc/state_space.hpp"

#include <Eigen/Eigenvalues>

#include "hybridlfc/error.hpp"

namespace hybridlfc {

double LinearStateSpace::output(std::span<const double> x, double u) const {
  const Eigen::Map<const Eigen::VectorXd> xs(x.data(), static_cast<Eigen::Index>(order()));
  return C.dot(xs) + D * u;
}

void LinearStateSpace::derivative(std::span<const double> x, double u,
                                  std::span<double> dx) const {
  const auto n = static_cast<Eigen::Index>(order());
  const Eigen::Map<const Eigen::VectorXd> xs(x.data(), n);
  Eigen::Map<Eigen::VectorXd> out(dx.data(), n);
  out.noalias() = A * xs;
  out += B * u;
}

std::complex<double> LinearStateSpace::freq_response(double omega) const {
  const auto n = static_cast<Eigen::Index>(order());
  if (n == 0) return {D, 0.0};
  const std::complex<double> jw(0.0, omega);
  Eigen::MatrixXcd m = -A.cast<std::complex<double>>();
  m.diagonal().array() += jw;
  const Eigen::VectorXcd sol = m.partialPivLu().solve(B.cast<std::complex<double>>());
  return (C.cast<std::complex<double>>() * sol)(0) + D;
}

double LinearStateSpace::dc_gain() const {
  if (order() == 0) return D;
  const Eigen::VectorXd sol = A.partialPivLu().solve(B);
  return -C.dot(sol) + D;
}

bool LinearStateSpace::is_hurwitz() const {
  if (order() == 0) return true;
  const Eigen::VectorXcd eig = A.eigenvalues();
  return (eig.real().array() < 0.0).all();
}

LinearStateSpace static_gain(double gain) {
  LinearStateSpace ss;
  ss.A.resize(0, 0);
  ss.B.resize(0);
  ss.C.resize(0);
  ss.D = gain;
  return ss;
}

LinearStateSpace parallel_lags(std::span<const LagTerm> terms) {
  const auto n = static_cast<Eigen::Index>(terms.size());
  LinearStateSpace ss;
  ss.A = Eigen::MatrixXd::Zero(n, n);
  ss.B = Eigen::VectorXd::Ones(n);
  ss.C.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const LagTerm& t = terms[static_cast<std::size_t>(i)];
    if (!(t.time_constant > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "lag time constant must be positive");
    }
    // x' = -x/T + u,  y = (k/T) x
    ss.A(i, i) = -1.0 / t.time_constant;
    ss.C(i) = t.gain / t.time_constant;
  }
  ss.D = 0.0;
  return ss;
}

}  // namespace hybridlfc
