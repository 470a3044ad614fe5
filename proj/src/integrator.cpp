#include "hybridlfc/integrator.hpp"

namespace hybridlfc {

std::vector<double> bs3_step(const Rhs& f, double t, std::span<const double> y, double h) {
  std::vector<double> next(y.begin(), y.end());
  Bs3Stepper stepper(y.size());
  stepper.step(f, t, next, h);
  return next;
}

}  // namespace hybridlfc
