#include <cmath>
#include <random>

#include <doctest.h>

#include "../support/oracles.hpp"
#include "hybridlfc/error.hpp"
#include "hybridlfc/fuzzy.hpp"

using namespace hybridlfc;

TEST_CASE("membership partition") {
  const MembershipFamily fam;
  CHECK_NOTHROW(fam.validate());
  for (int i = -150; i <= 150; ++i) {
    const double x = i / 100.0;
    const Degrees d = fuzzify(x);
    double sum = 0.0;
    int nonzero = 0;
    for (std::size_t k = 0; k < kLabelCount; ++k) {
      CHECK(d[k] >= 0.0);
      CHECK(d[k] <= 1.0);
      CHECK(d[k] == doctest::Approx(oracle::membership(static_cast<int>(k), x)).epsilon(1e-12));
      sum += d[k];
      nonzero += d[k] > 0.0;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(nonzero <= 2);
  }
}

TEST_CASE("fuzzify examples") {
  const Degrees zero = fuzzify(0.0);
  CHECK(zero[static_cast<std::size_t>(Label::ZR)] == 1.0);
  const Degrees one = fuzzify(1.0);
  CHECK(one[static_cast<std::size_t>(Label::PL)] == 1.0);
  CHECK(fuzzify(7.0)[static_cast<std::size_t>(Label::PL)] == 1.0);
  const Degrees half = fuzzify(0.5);
  CHECK(half[static_cast<std::size_t>(Label::PS)] == doctest::Approx(0.5));
  CHECK(half[static_cast<std::size_t>(Label::PM)] == doctest::Approx(0.5));
}

TEST_CASE("rule table shape") {
  const RuleBase rb = RuleBase::standard();
  for (int r = 0; r < 7; ++r) {
    for (int c = 0; c < 7; ++c) {
      const Label out = rb.rule(static_cast<Label>(r), static_cast<Label>(c));
      CHECK(static_cast<int>(out) == oracle::rule_index(r, c));
      CHECK(rb.rule(static_cast<Label>(6 - r), static_cast<Label>(6 - c)) == mirror(out));
      if (r + 1 < 7 && c > 0) {
        CHECK(rb.rule(static_cast<Label>(r + 1), static_cast<Label>(c - 1)) == out);
      }
    }
  }
  // Row NL (rate), column PL (error) reads ZR.
  CHECK(rb.rule(Label::NL, Label::PL) == Label::ZR);
  CHECK(label_name(Label::PM) == "PM");
}

TEST_CASE("flc examples") {
  CHECK(flc(0.0, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::abs(flc(1.0, -1.0)) < 1e-12);
  const double v = flc(0.5, 0.5);
  CHECK(v > 0.0);
  CHECK(v == doctest::Approx(oracle::flc_dense(0.5, 0.5)).epsilon(1e-6));
}

TEST_CASE("centroid agrees with dense sampling") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  for (int i = 0; i < 300; ++i) {
    const double e = u(rng);
    const double de = u(rng);
    CHECK(std::abs(flc(e, de) - oracle::flc_dense(e, de)) < 1e-6);
  }
}

TEST_CASE("odd symmetry and bounds") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 1000; ++i) {
    const double e = u(rng);
    const double de = u(rng);
    const double v = flc(e, de);
    CHECK(std::abs(v + flc(-e, -de)) < 1e-9);
    CHECK(std::abs(v) <= 1.0);
  }
}

TEST_CASE("anti-diagonal is the zero set") {
  for (int i = 0; i <= 200; ++i) {
    const double x = -1.0 + i / 100.0;
    CHECK(std::abs(flc(x, -x)) < 1e-12);
  }
}

TEST_CASE("monotone in each input on a 101 x 101 grid") {
  std::vector<double> g(101);
  for (int i = 0; i <= 100; ++i) g[static_cast<std::size_t>(i)] = -1.0 + i / 50.0;
  int violations = 0;
  for (double de : g) {
    double prev = -2.0;
    for (double e : g) {
      const double v = flc(e, de);
      if (v < prev - 1e-12) ++violations;
      prev = v;
    }
  }
  for (double e : g) {
    double prev = -2.0;
    for (double de : g) {
      const double v = flc(e, de);
      if (v < prev - 1e-12) ++violations;
      prev = v;
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("degenerate aggregate is rejected") {
  Degrees zero{};
  CHECK_THROWS_AS(centroid(MembershipFamily{}, zero), Error);
}

TEST_CASE("membership validation") {
  MembershipFamily fam;
  fam.centers[2] = fam.centers[3];
  CHECK_THROWS_AS(fam.validate(), Error);
}
