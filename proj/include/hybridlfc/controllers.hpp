#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "hybridlfc/fuzzy.hpp"
#include "hybridlfc/oustaloup.hpp"
#include "hybridlfc/state_space.hpp"

namespace hybridlfc {

struct PidParams {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
};

struct FuzzyPidParams {
  double ke = 0.0;
  double kd = 0.0;
  double k_pi = 0.0;
  double k_pd = 0.0;
};

struct FuzzyFopidParams {
  double ke = 0.0;
  double kd = 0.0;
  double k_pi = 0.0;
  double k_pd = 0.0;
  double lambda = 1.0;  // integral order
  double mu = 1.0;      // derivative order
};

using ControllerParams = std::variant<PidParams, FuzzyPidParams, FuzzyFopidParams>;

enum class ControllerKind { Pid, FuzzyPid, FuzzyFopid };

ControllerKind kind_of(const ControllerParams& params);
std::string_view controller_tag(ControllerKind kind);
ControllerKind parse_controller_tag(std::string_view tag);
std::size_t parameter_count(ControllerKind kind);
/// Parameter names in vector order, e.g. {"ke", "kd", "k_pi", "k_pd", "lambda", "mu"}.
std::span<const std::string_view> parameter_names(ControllerKind kind);

std::vector<double> to_vector(const ControllerParams& params);
ControllerParams from_vector(ControllerKind kind, std::span<const double> values);

/// Rejects negative gains and orders outside (0, 1].
void validate(const ControllerParams& params);

struct ControllerOptions {
  /// Time constant of the realizable derivative s / (tau s + 1).
  double derivative_tau = 0.01;
  OustaloupBand band{};
};

/// Causal SISO block mapping the error e to the actuation u. The block's
/// states live in the caller's integration vector; every method is const.
class ControllerBlock {
 public:
  ControllerKind kind() const { return kind_; }
  const ControllerParams& params() const { return params_; }
  std::size_t state_size() const;

  /// Returns u at (x, e) and writes the state derivative into dx.
  double evaluate(std::span<const double> x, double e, std::span<double> dx) const;
  double output(std::span<const double> x, double e) const;

  /// Oustaloup-realized operators of the fuzzy FOPID; nullptr otherwise.
  const LinearStateSpace* integral_operator() const;
  const LinearStateSpace* derivative_operator() const;
  const FuzzyInference& inference() const { return inference_; }

 private:
  friend ControllerBlock make_pid(double, double, double, const ControllerOptions&);
  friend ControllerBlock make_fuzzy_pid(const FuzzyPidParams&, const ControllerOptions&);
  friend ControllerBlock make_fuzzy_fopid(const FuzzyFopidParams&, const ControllerOptions&);

  ControllerBlock() = default;

  ControllerKind kind_ = ControllerKind::Pid;
  ControllerParams params_{};
  double derivative_tau_ = 0.01;
  LinearStateSpace frac_derivative_;
  LinearStateSpace frac_integral_;
  FuzzyInference inference_;
};

ControllerBlock make_pid(double kp, double ki, double kd, const ControllerOptions& options = {});
ControllerBlock make_fuzzy_pid(const FuzzyPidParams& params, const ControllerOptions& options = {});
ControllerBlock make_fuzzy_fopid(const FuzzyFopidParams& params,
                                 const ControllerOptions& options = {});
ControllerBlock make_controller(const ControllerParams& params,
                                const ControllerOptions& options = {});

}  // namespace hybridlfc
