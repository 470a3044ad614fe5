#include "hybridlfc/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hybridlfc/error.hpp"

namespace hybridlfc {

namespace {

constexpr std::array<std::string_view, kLabelCount> kNames{"NL", "NM", "NS", "ZR",
                                                          "PS", "PM", "PL"};

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

// Linear piece a + b*y.
struct Line {
  double a;
  double b;
  double at(double y) const { return a + b * y; }
};

}  // namespace

std::string_view label_name(Label label) {
  return kNames[static_cast<std::size_t>(label)];
}

Label mirror(Label label) { return static_cast<Label>(6 - static_cast<int>(label)); }

double MembershipFamily::degree(Label label, double x) const {
  const auto i = static_cast<std::size_t>(label);
  const double c = centers[i];
  if (x <= c) {
    if (i == 0) return 1.0;
    const double left = centers[i - 1];
    if (x <= left) return 0.0;
    return (x - left) / (c - left);
  }
  if (i == kLabelCount - 1) return 1.0;
  const double right = centers[i + 1];
  if (x >= right) return 0.0;
  return (right - x) / (right - c);
}

Degrees MembershipFamily::fuzzify(double x) const {
  x = clamp_unit(x);
  Degrees d{};
  // Locate the pair of neighbouring centers bracketing x; only those two fire.
  std::size_t i = 0;
  while (i + 1 < kLabelCount - 1 && x > centers[i + 1]) ++i;
  const double lo = centers[i];
  const double hi = centers[i + 1];
  const double w = std::clamp((x - lo) / (hi - lo), 0.0, 1.0);
  d[i] = 1.0 - w;
  d[i + 1] = w;
  return d;
}

void MembershipFamily::validate() const {
  for (std::size_t i = 0; i + 1 < kLabelCount; ++i) {
    if (!(centers[i] < centers[i + 1])) {
      throw Error(ErrorCode::Config, "membership centers must be strictly increasing");
    }
  }
  for (std::size_t i = 0; i < kLabelCount; ++i) {
    if (std::abs(centers[i] + centers[kLabelCount - 1 - i]) > 1e-12) {
      throw Error(ErrorCode::Config, "membership centers must be symmetric about 0");
    }
  }
  if (centers.front() != -1.0 || centers.back() != 1.0) {
    throw Error(ErrorCode::Config, "outer membership centers must sit at -1 and 1");
  }
}

RuleBase RuleBase::standard() {
  using enum Label;
  // Rows: rate of error NL..PL, columns: error NL..PL.
  RuleBase rb{{{
      {NL, NL, NL, NL, NM, NS, ZR},  // NL
      {NL, NL, NL, NM, NS, ZR, PS},  // NM
      {NL, NL, NM, NS, ZR, PS, PM},  // NS
      {NL, NM, NS, ZR, PS, PM, PL},  // ZR
      {NM, NS, ZR, PS, PM, PL, PL},  // PS
      {NS, ZR, PS, PM, PL, PL, PL},  // PM
      {ZR, PS, PM, PL, PL, PL, PL},  // PL
  }}};
  return rb;
}

FuzzyInference::FuzzyInference()
    : FuzzyInference(MembershipFamily{}, MembershipFamily{}, RuleBase::standard()) {}

FuzzyInference::FuzzyInference(MembershipFamily inputs, MembershipFamily output,
                               RuleBase rules)
    : inputs_(inputs), output_(output), rules_(rules) {
  inputs_.validate();
  output_.validate();
}

Degrees FuzzyInference::fire(double error, double rate) const {
  const Degrees de = inputs_.fuzzify(error);
  const Degrees dr = inputs_.fuzzify(rate);
  Degrees levels{};
  for (std::size_t r = 0; r < kLabelCount; ++r) {
    if (dr[r] == 0.0) continue;
    for (std::size_t e = 0; e < kLabelCount; ++e) {
      if (de[e] == 0.0) continue;
      const auto out = static_cast<std::size_t>(rules_.table[r][e]);
      levels[out] += dr[r] * de[e];
    }
  }
  // Rules sharing a consequent combine by bounded sum.
  for (double& l : levels) l = std::min(l, 1.0);
  return levels;
}

double FuzzyInference::evaluate(double error, double rate) const {
  return centroid(output_, fire(clamp_unit(error), clamp_unit(rate)));
}

double centroid(const MembershipFamily& output, const Degrees& levels) {
  const auto& c = output.centers;
  double area = 0.0;
  double moment = 0.0;
  std::vector<double> knots;
  knots.reserve(12);

  // Between neighbouring centers only labels i (falling) and i+1 (rising)
  // are nonzero, so the aggregate there is max of two clipped ramps.
  for (std::size_t i = 0; i + 1 < kLabelCount; ++i) {
    const double lo = c[i];
    const double hi = c[i + 1];
    const double width = hi - lo;
    const double s_fall = levels[i];
    const double s_rise = levels[i + 1];
    if (s_fall == 0.0 && s_rise == 0.0) continue;

    const Line fall{hi / width, -1.0 / width};
    const Line rise{-lo / width, 1.0 / width};
    const Line flat_fall{s_fall, 0.0};
    const Line flat_rise{s_rise, 0.0};
    auto mu = [&](double y) {
      return std::max(std::min(s_fall, fall.at(y)), std::min(s_rise, rise.at(y)));
    };

    knots.clear();
    knots.push_back(lo);
    knots.push_back(hi);
    auto add_crossing = [&](const Line& p, const Line& q) {
      const double db = p.b - q.b;
      if (db == 0.0) return;
      const double y = (q.a - p.a) / db;
      if (y > lo && y < hi) knots.push_back(y);
    };
    add_crossing(fall, flat_fall);
    add_crossing(rise, flat_rise);
    for (const Line& p : {fall, flat_fall}) {
      for (const Line& q : {rise, flat_rise}) add_crossing(p, q);
    }
    std::sort(knots.begin(), knots.end());

    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
      const double ya = knots[k];
      const double yb = knots[k + 1];
      const double len = yb - ya;
      if (len <= 0.0) continue;
      const double ma = mu(ya);
      const double mb = mu(yb);
      area += 0.5 * len * (ma + mb);
      moment += len / 6.0 * (ya * (2.0 * ma + mb) + yb * (ma + 2.0 * mb));
    }
  }

  if (!(area > 0.0)) {
    throw Error(ErrorCode::DegenerateAggregate, "aggregated output set has zero area");
  }
  return moment / area;
}

Degrees fuzzify(double x, const MembershipFamily& family) { return family.fuzzify(x); }

double flc(double error, double rate) {
  static const FuzzyInference engine;
  return engine.evaluate(error, rate);
}

}  // namespace hybridlfc
