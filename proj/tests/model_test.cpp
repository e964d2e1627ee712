#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "riskexit/model.hpp"
#include "riskexit/model_json.hpp"
#include "riskexit/rng.hpp"
#include "testutil.hpp"

using namespace riskexit;

TEST_CASE("parameter invariants are enforced") {
  const auto exp1 = ClaimDistribution::exponential(1);
  CHECK_THROWS_AS(make_model(0, 0.5, 1, exp1), std::invalid_argument);
  CHECK_THROWS_AS(make_model(1, 0.0, 1, exp1), std::invalid_argument);
  CHECK_THROWS_AS(make_model(1, 1.0, 1, exp1), std::invalid_argument);
  CHECK_THROWS_AS(make_model(1, 0.5, -1, exp1), std::invalid_argument);
  CHECK_THROWS_AS(ClaimDistribution::exponential(0), std::invalid_argument);

  CHECK_THROWS_AS(ClaimDistribution::table({0, 1}, {-1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(ClaimDistribution::table({0.1, 1}, {1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(ClaimDistribution::table({0, 0.5}, {1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(ClaimDistribution::table({0, 0.5, 0.5, 1}, {1, 2, 3, 4}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ClaimDistribution::table({0, 1}, {2, 1}), std::invalid_argument);
}

TEST_CASE("cumulant at stated points") {
  const auto sym = testutil::sym_model();
  CHECK(cumulant_real(sym, 0) == 0.0);
  // psi(-ir) = r^2 / (1 - r^2) for the symmetric model.
  CHECK(cumulant_real(sym, 0.5) == doctest::Approx(1.0 / 3).epsilon(1e-15));

  // (qc - pb) is the nonzero root of psi(-ir) = 0.
  const auto mm = testutil::m_minus_model();
  CHECK(std::fabs(cumulant_real(mm, 0.8)) < 1e-15);

  CHECK_THROWS_AS(cumulant_real(sym, 1.0), std::domain_error);
  CHECK_THROWS_AS(cumulant_real(sym, -1.0), std::domain_error);
}

TEST_CASE("cumulant is zero at zero and convex") {
  for (const auto& m : {testutil::sym_model(), testutil::m_plus_model(),
                        testutil::m_zero_model(), testutil::m_minus_model()}) {
    CHECK(cumulant_real(m, 0) == 0.0);
    const double h = 0.02;
    for (double r = -0.4; r < 0.8; r += h) {
      const double dd =
          cumulant_real(m, r + h) - 2 * cumulant_real(m, r) + cumulant_real(m, r - h);
      CHECK(dd > 0);
    }
  }
}

TEST_CASE("drift and variance") {
  const auto sym = testutil::sym_model();
  CHECK(drift(sym) == 0.0);
  CHECK(variance(sym) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(regime(sym) == Regime::zero);

  CHECK(drift(testutil::m_plus_model()) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(drift(testutil::m_minus_model()) == doctest::Approx(-0.4).epsilon(1e-15));
  CHECK(regime(testutil::m_plus_model()) == Regime::positive);
  CHECK(regime(testutil::m_minus_model()) == Regime::negative);
  CHECK(regime(testutil::m_zero_model()) == Regime::zero);
}

TEST_CASE("cumulant Taylor expansion matches drift and variance") {
  const double h = 1e-4;
  for (const auto& m : {testutil::sym_model(), testutil::m_plus_model(),
                        testutil::m_zero_model(), testutil::m_minus_model()}) {
    const Moments mom = moments(m);
    const double taylor = h * mom.m + h * h * mom.sigma1_sq / 2;
    CHECK(std::fabs(cumulant_real(m, h) - taylor) <= 1e-10);
  }
}

TEST_CASE("killed characteristic function") {
  const auto sym = testutil::sym_model();
  CHECK(charfn_killed(sym, 1.0, 0.0) == std::complex<double>(1, 0));
  for (double alpha = -20; alpha <= 20; alpha += 0.7) {
    const auto v = charfn_killed(sym, 1.0, alpha);
    CHECK(std::abs(v) <= 1.0 + 1e-12);
    const auto conj = charfn_killed(sym, 1.0, -alpha);
    CHECK(std::abs(std::conj(v) - conj) < 1e-14);
  }
  CHECK_THROWS_AS(charfn_killed(sym, 0.0, 1.0), std::domain_error);
}

TEST_CASE("table claims: moments, mgf, sampling bounds") {
  // Uniform claims on [0.5, 1.5] as a two-node inverse-CDF table.
  const auto unif = ClaimDistribution::table({0, 1}, {0.5, 1.5});
  CHECK(unif.mean() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(unif.second_moment() == doctest::Approx(13.0 / 12).epsilon(1e-15));
  CHECK_FALSE(unif.is_exponential());
  CHECK_THROWS_AS(unif.exp_rate(), UnsupportedClaimLawError);

  // E e^{-r U} = (e^{-r/2} - e^{-3r/2}) / r for U ~ Uniform(0.5, 1.5).
  for (double r : {0.3, 1.0, 2.5}) {
    const double expected = (std::exp(-0.5 * r) - std::exp(-1.5 * r)) / r;
    CHECK(unif.mgf_neg(r) == doctest::Approx(expected).epsilon(1e-6));
  }
  CHECK_THROWS_AS(unif.mgf_neg(-0.1), std::domain_error);

  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const double v = unif.sample(rng);
    CHECK(v >= 0.5);
    CHECK(v <= 1.5);
  }

  const auto model = make_model(1, 0.5, 1, unif);
  CHECK(drift(model) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(cumulant_real(model, 0.5) ==
        doctest::Approx(0.5 * 0.5 / 0.5 + 0.5 * (unif.mgf_neg(0.5) - 1)).epsilon(1e-12));
}

TEST_CASE("claims from samples") {
  const auto law = ClaimDistribution::from_samples({2.0, 1.0, 3.0});
  CHECK(law.mean() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(law.second_moment() >= law.mean() * law.mean());
}

TEST_CASE("model json round trip") {
  const auto m = model_from_json_text(
      R"({"lambda": 1.5, "p": 0.4, "c": 2.0, "claims": {"type": "exp", "b": 3.0}})");
  CHECK(m.lambda == 1.5);
  CHECK(m.p == 0.4);
  CHECK(m.q == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(m.c == 2.0);
  CHECK(m.claims.exp_rate() == 3.0);

  const auto t = model_from_json_text(
      R"({"lambda": 1, "p": 0.5, "c": 1,
          "claims": {"type": "table", "q": [0, 0.5, 1], "x": [0.5, 1.0, 1.5]}})");
  CHECK_FALSE(t.claims.is_exponential());
  CHECK(t.claims.mean() == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(model_from_json_text("{"), std::invalid_argument);
  CHECK_THROWS_AS(model_from_json_text(R"({"lambda": 1})"), std::invalid_argument);
  CHECK_THROWS_AS(
      model_from_json_text(
          R"({"lambda": 1, "p": 0.5, "c": 1, "claims": {"type": "gamma"}})"),
      std::invalid_argument);
}
