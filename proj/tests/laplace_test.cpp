#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "riskexit/exit.hpp"
#include "riskexit/laplace.hpp"
#include "testutil.hpp"

using namespace riskexit;

TEST_CASE("inversion spec validation") {
  CHECK_THROWS_AS(validate(InversionSpec{13}), std::invalid_argument);
  CHECK_THROWS_AS(validate(InversionSpec{6}), std::invalid_argument);
  CHECK_THROWS_AS(validate(InversionSpec{22}), std::invalid_argument);
  CHECK_THROWS_AS(invert([](double s) { return 1 / s; }, InversionSpec{14}, 0.0),
                  std::domain_error);
}

TEST_CASE("known transform pairs") {
  const InversionSpec spec{14};
  for (double t : {0.5, 1.0, 2.0}) {
    CHECK(std::fabs(invert([](double s) { return 1 / s; }, spec, t) - 1.0) <= 1e-8);
  }
  CHECK(invert([](double s) { return 1 / (s + 1); }, spec, 1.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
  CHECK(invert([](double s) { return 1 / (s * s); }, spec, 3.0) ==
        doctest::Approx(3.0).epsilon(1e-6));
  // CDF pair: tau ~ Exp(1) has E e^{-s tau} = 1/(1+s).
  CHECK(invert_cdf([](double s) { return 1 / (1 + s); }, spec, 2.0) ==
        doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-4));
}

TEST_CASE("stability diagnostic") {
  const InversionSpec spec{14};
  const auto smooth = invert_checked([](double s) { return 1 / (s + 1); }, spec, 1.0);
  CHECK(smooth.stable);
  // Oscillatory time functions are beyond Gaver-Stehfest at large t.
  const auto rough =
      invert_checked([](double s) { return 1 / (s * s + 1); }, spec, 20.0);
  CHECK_FALSE(rough.stable);
}

TEST_CASE("inverted exit-time CDF is a CDF") {
  const auto sym = testutil::sym_model();
  const InversionSpec spec{14};
  const auto transform = [&](double s) {
    return exit_transforms(sym, {1, 3, s}).q_total;
  };
  double prev = -1e-6;
  for (double t = 0.25; t <= 16; t *= 2) {
    const double v = invert_cdf(transform, spec, t);
    CHECK(v >= -1e-6);
    CHECK(v <= 1.0 + 1e-6);
    CHECK(v >= prev - 1e-5);
    prev = v;
  }
  CHECK(invert_cdf(transform, spec, 50.0) > 0.99);
}
