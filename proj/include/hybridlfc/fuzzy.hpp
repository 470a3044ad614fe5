#pragma once

#include <array>
#include <cstddef>
#include <string_view>

namespace hybridlfc {

inline constexpr std::size_t kLabelCount = 7;

enum class Label : int { NL = 0, NM, NS, ZR, PS, PM, PL };

std::string_view label_name(Label label);
Label mirror(Label label);

using Degrees = std::array<double, kLabelCount>;

/// Seven triangular labels on [-1, 1]. Each triangle has its feet on the
/// neighbouring centers; NL and PL saturate to 1 outside the outer centers.
struct MembershipFamily {
  std::array<double, kLabelCount> centers{-1.0, -2.0 / 3.0, -1.0 / 3.0, 0.0,
                                          1.0 / 3.0, 2.0 / 3.0, 1.0};

  double degree(Label label, double x) const;
  /// Clamps x to [-1, 1] and returns all seven degrees (they sum to 1).
  Degrees fuzzify(double x) const;
  void validate() const;
};

/// 7x7 table indexed [rate-of-error label][error label] -> output label.
struct RuleBase {
  std::array<std::array<Label, kLabelCount>, kLabelCount> table;

  Label rule(Label rate, Label error) const {
    return table[static_cast<std::size_t>(rate)][static_cast<std::size_t>(error)];
  }

  /// Standard sliding-surface table (output index = clamp(i + j - 3, 0, 6)).
  static RuleBase standard();
};

/// Mamdani inference: product t-norm, bounded-sum combination of rules that
/// share a consequent, clipping implication, max union of the clipped sets
/// and centre-of-gravity defuzzification over the output universe [-1, 1].
class FuzzyInference {
 public:
  FuzzyInference();
  FuzzyInference(MembershipFamily inputs, MembershipFamily output, RuleBase rules);

  /// Per-output-label clipping level: min(1, sum of the strengths of the
  /// rules with that consequent).
  Degrees fire(double error, double rate) const;
  double evaluate(double error, double rate) const;

  const MembershipFamily& input_family() const { return inputs_; }
  const MembershipFamily& output_family() const { return output_; }
  const RuleBase& rules() const { return rules_; }

 private:
  MembershipFamily inputs_;
  MembershipFamily output_;
  RuleBase rules_;
};

/// Free functions over the default engine.
Degrees fuzzify(double x, const MembershipFamily& family = {});
double flc(double error, double rate);

/// Centroid of the aggregated set max_k min(level_k, mu_k(y)) on [-1, 1],
/// integrated exactly over its piecewise-linear pieces.
double centroid(const MembershipFamily& output, const Degrees& levels);

}  // namespace hybridlfc
