#include "hybridlfc/controllers.hpp"

#include <array>
#include <cmath>

#include <fmt/format.h>

#include "hybridlfc/error.hpp"

namespace hybridlfc {

namespace {

constexpr std::array<std::string_view, 3> kPidNames{"kp", "ki", "kd"};
constexpr std::array<std::string_view, 4> kFuzzyPidNames{"ke", "kd", "k_pi", "k_pd"};
constexpr std::array<std::string_view, 6> kFuzzyFopidNames{"ke",   "kd",     "k_pi",
                                                           "k_pd", "lambda", "mu"};

void require_nonnegative(double v, std::string_view name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("controller gain {} = {} must be finite and >= 0", name, v));
  }
}

void require_order(double v, std::string_view name) {
  if (!(v > 0.0 && v <= 1.0)) {
    throw Error(ErrorCode::OrderOutOfRange,
                fmt::format("controller order {} = {} outside (0, 1]", name, v));
  }
}

}  // namespace

ControllerKind kind_of(const ControllerParams& params) {
  return static_cast<ControllerKind>(params.index());
}

std::string_view controller_tag(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::Pid: return "pid";
    case ControllerKind::FuzzyPid: return "fpid";
    case ControllerKind::FuzzyFopid: return "fofpid";
  }
  return "unknown";
}

ControllerKind parse_controller_tag(std::string_view tag) {
  if (tag == "pid") return ControllerKind::Pid;
  if (tag == "fpid") return ControllerKind::FuzzyPid;
  if (tag == "fofpid") return ControllerKind::FuzzyFopid;
  throw Error(ErrorCode::Config, fmt::format("unknown controller tag '{}'", tag));
}

std::size_t parameter_count(ControllerKind kind) { return parameter_names(kind).size(); }

std::span<const std::string_view> parameter_names(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::Pid: return kPidNames;
    case ControllerKind::FuzzyPid: return kFuzzyPidNames;
    case ControllerKind::FuzzyFopid: return kFuzzyFopidNames;
  }
  return {};
}

std::vector<double> to_vector(const ControllerParams& params) {
  struct Visitor {
    std::vector<double> operator()(const PidParams& p) const { return {p.kp, p.ki, p.kd}; }
    std::vector<double> operator()(const FuzzyPidParams& p) const {
      return {p.ke, p.kd, p.k_pi, p.k_pd};
    }
    std::vector<double> operator()(const FuzzyFopidParams& p) const {
      return {p.ke, p.kd, p.k_pi, p.k_pd, p.lambda, p.mu};
    }
  };
  return std::visit(Visitor{}, params);
}

ControllerParams from_vector(ControllerKind kind, std::span<const double> v) {
  if (v.size() != parameter_count(kind)) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("{} expects {} parameters, got {}", controller_tag(kind),
                            parameter_count(kind), v.size()));
  }
  switch (kind) {
    case ControllerKind::Pid: return PidParams{v[0], v[1], v[2]};
    case ControllerKind::FuzzyPid: return FuzzyPidParams{v[0], v[1], v[2], v[3]};
    case ControllerKind::FuzzyFopid:
      return FuzzyFopidParams{v[0], v[1], v[2], v[3], v[4], v[5]};
  }
  throw Error(ErrorCode::InvalidArgument, "unknown controller kind");
}

void validate(const ControllerParams& params) {
  const ControllerKind kind = kind_of(params);
  const std::vector<double> values = to_vector(params);
  const auto names = parameter_names(kind);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (names[i] == "lambda" || names[i] == "mu") {
      require_order(values[i], names[i]);
    } else {
      require_nonnegative(values[i], names[i]);
    }
  }
}

std::size_t ControllerBlock::state_size() const {
  switch (kind_) {
    case ControllerKind::Pid:
    case ControllerKind::FuzzyPid: return 2;
    case ControllerKind::FuzzyFopid:
      return frac_derivative_.order() + frac_integral_.order();
  }
  return 0;
}

double ControllerBlock::evaluate(std::span<const double> x, double e,
                                 std::span<double> dx) const {
  switch (kind_) {
    case ControllerKind::Pid: {
      // x = [integral of e, derivative filter state]
      const auto& p = std::get<PidParams>(params_);
      const double rate = (e - x[1]) / derivative_tau_;
      dx[0] = e;
      dx[1] = rate;
      return p.kp * e + p.ki * x[0] + p.kd * rate;
    }
    case ControllerKind::FuzzyPid: {
      // x = [derivative filter state, integral of the FLC output]
      const auto& p = std::get<FuzzyPidParams>(params_);
      const double rate = (e - x[0]) / derivative_tau_;
      const double u_flc = inference_.evaluate(p.ke * e, p.kd * rate);
      dx[0] = rate;
      dx[1] = u_flc;
      return p.k_pd * u_flc + p.k_pi * x[1];
    }
    case ControllerKind::FuzzyFopid: {
      // x = [D^mu states | I^lambda states]
      const auto& p = std::get<FuzzyFopidParams>(params_);
      const std::size_t nd = frac_derivative_.order();
      const std::size_t ni = frac_integral_.order();
      const auto xd = x.subspan(0, nd);
      const auto xi = x.subspan(nd, ni);
      const double rate = frac_derivative_.output(xd, e);
      const double u_flc = inference_.evaluate(p.ke * e, p.kd * rate);
      frac_derivative_.derivative(xd, e, dx.subspan(0, nd));
      frac_integral_.derivative(xi, u_flc, dx.subspan(nd, ni));
      return p.k_pd * u_flc + p.k_pi * frac_integral_.output(xi, u_flc);
    }
  }
  return 0.0;
}

double ControllerBlock::output(std::span<const double> x, double e) const {
  std::vector<double> scratch(state_size());
  return evaluate(x, e, scratch);
}

const LinearStateSpace* ControllerBlock::integral_operator() const {
  return kind_ == ControllerKind::FuzzyFopid ? &frac_integral_ : nullptr;
}

const LinearStateSpace* ControllerBlock::derivative_operator() const {
  return kind_ == ControllerKind::FuzzyFopid ? &frac_derivative_ : nullptr;
}

ControllerBlock make_pid(double kp, double ki, double kd, const ControllerOptions& options) {
  const PidParams p{kp, ki, kd};
  validate(p);
  if (!(options.derivative_tau > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "derivative filter time constant must be > 0");
  }
  ControllerBlock b;
  b.kind_ = ControllerKind::Pid;
  b.params_ = p;
  b.derivative_tau_ = options.derivative_tau;
  return b;
}

ControllerBlock make_fuzzy_pid(const FuzzyPidParams& params, const ControllerOptions& options) {
  validate(params);
  if (!(options.derivative_tau > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "derivative filter time constant must be > 0");
  }
  ControllerBlock b;
  b.kind_ = ControllerKind::FuzzyPid;
  b.params_ = params;
  b.derivative_tau_ = options.derivative_tau;
  return b;
}

ControllerBlock make_fuzzy_fopid(const FuzzyFopidParams& params,
                                 const ControllerOptions& options) {
  validate(params);
  ControllerBlock b;
  b.kind_ = ControllerKind::FuzzyFopid;
  b.params_ = params;
  b.frac_derivative_ = fractional_operator(params.mu, options.band);
  b.frac_integral_ = fractional_operator(-params.lambda, options.band);
  return b;
}

ControllerBlock make_controller(const ControllerParams& params,
                                const ControllerOptions& options) {
  switch (kind_of(params)) {
    case ControllerKind::Pid: {
      const auto& p = std::get<PidParams>(params);
      return make_pid(p.kp, p.ki, p.kd, options);
    }
    case ControllerKind::FuzzyPid: return make_fuzzy_pid(std::get<FuzzyPidParams>(params), options);
    case ControllerKind::FuzzyFopid:
      return make_fuzzy_fopid(std::get<FuzzyFopidParams>(params), options);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown controller kind");
}

}  // namespace hybridlfc
