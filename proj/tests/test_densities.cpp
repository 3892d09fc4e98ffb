#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pdmp/densities.hpp"
#include "pdmp/error.hpp"
#include "pdmp/regimes.hpp"

using namespace pdmp;

namespace {

const SwitchingSpec kPitch{NormalFormKind::SupPitchfork, -1, 1, 2, 1};
const SwitchingSpec kTrans{NormalFormKind::Transcritical, -1, 1, 2, 1};

// Composite Simpson rule on a smooth integrand.
template <class F>
double simpson(F f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("pitchfork example against hand-derived closed forms") {
  const DensityModel m(kPitch);
  CHECK(m.support_end() == 1.0);
  CHECK(m.exponents().x_exp == doctest::Approx(1.0));
  CHECK(m.exponents().left_exp == doctest::Approx(-1.0));
  CHECK(m.exponents().right_exp == doctest::Approx(0.5));

  // With x = sin(theta) both unnormalized mode masses are smooth integrals;
  // rho_-1 ~ (1+x^2)^-2 (1-x^2)^(1/2), rho_1 ~ (1+x^2)^-1 (1-x^2)^(-1/2).
  const double half_pi = std::numbers::pi / 2;
  const double im = simpson(
      [](double th) {
        const double s = std::sin(th), c = std::cos(th);
        return c * c / ((1 + s * s) * (1 + s * s));
      },
      0.0, half_pi);
  const double ip = simpson([](double th) { return 1.0 / (1 + std::sin(th) * std::sin(th)); },
                            0.0, half_pi);
  CHECK(ip == doctest::Approx(std::numbers::pi / (2 * std::numbers::sqrt2)).epsilon(1e-12));
  const double c_oracle = 1.0 / (im + ip);
  CHECK(m.normalization() == doctest::Approx(c_oracle).epsilon(1e-9));
  CHECK(m.mode_mass(Mode::Minus) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(m.mode_mass(Mode::Plus) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));

  for (double x : {0.05, 0.3, 0.5, 0.9, 0.999}) {
    const double rm = c_oracle * std::pow(1 + x * x, -2.0) * std::sqrt(1 - x * x);
    const double rp = c_oracle / ((1 + x * x) * std::sqrt(1 - x * x));
    CHECK(m.density(Mode::Minus, x) == doctest::Approx(rm).epsilon(1e-9));
    CHECK(m.density(Mode::Plus, x) == doctest::Approx(rp).epsilon(1e-9));
  }
  const auto f = m.flux(0.5);
  CHECK(f.phi_minus ==
        doctest::Approx(-m.normalization() * 0.5 * 0.8 * std::sqrt(3.0) / 2).epsilon(1e-12));
  CHECK(f.phi_plus == -f.phi_minus);
}

TEST_CASE("transcritical example against hand-derived closed forms") {
  const DensityModel m(kTrans);
  CHECK(m.support_end() == 1.0);
  // rho_-1 = (4/3)(1-x)/(1+x)^3, rho_1 = (4/3)/(1+x)^2.
  CHECK(m.normalization() == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
  CHECK(m.mode_mass(Mode::Minus) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(m.mode_mass(Mode::Plus) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  for (double x : {0.01, 0.2, 0.77, 0.99}) {
    CHECK(m.density(Mode::Minus, x) == doctest::Approx(4.0 / 3.0 * (1 - x) / std::pow(1 + x, 3)));
    CHECK(m.density(Mode::Plus, x) == doctest::Approx(4.0 / 3.0 / ((1 + x) * (1 + x))));
  }
  CHECK_THROWS_AS(m.mirror_density(Mode::Minus, -0.5), DomainError);
}

TEST_CASE("support and errors") {
  const DensityModel m(kPitch);
  for (double x : {-0.5, 0.0, 1.0, 1.5}) {
    CHECK(m.density(Mode::Minus, x) == 0.0);
    CHECK(m.density(Mode::Plus, x) == 0.0);
  }
  CHECK_THROWS_AS(m.flux(0.0), DomainError);
  CHECK_THROWS_AS(m.flux(1.0), DomainError);
  CHECK_THROWS_AS(m.fokker_planck_residual(1e-4), DomainError);
  CHECK_THROWS_AS(DensityModel({NormalFormKind::SupPitchfork, -1, 1, 1, 1}), RegimeError);
  CHECK_THROWS_AS(DensityModel({NormalFormKind::SupPitchfork, -1, 1, 1, 2}), RegimeError);
  CHECK_THROWS_AS(DensityModel({NormalFormKind::Fold, -1, 1, 2, 1}), RegimeError);
  CHECK_THROWS_AS(DensityModel({NormalFormKind::SubPitchfork, -1, 1, 2, 1}), RegimeError);
  // flux vanishes at the right end
  CHECK(std::fabs(m.flux(1 - 1e-10).phi_minus) < 1e-4);
}

TEST_CASE("flux antisymmetry and Fokker-Planck residuals") {
  std::mt19937_64 gen(5);
  for (const auto& spec : {kPitch, kTrans}) {
    const DensityModel m(spec);
    const double b = m.support_end();
    std::uniform_real_distribution<double> u(1e-3 * b, b - 1e-3 * b);
    double max_r = 0.0, max_d = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double x = u(gen);
      const auto f = m.flux(x);
      CHECK(f.phi_minus + f.phi_plus == 0.0);
      const auto [r1, r2] = m.fokker_planck_residual(x);
      max_r = std::max({max_r, std::fabs(r1), std::fabs(r2)});
      max_d = std::max(max_d, std::fabs(m.flux_derivative(x)));
      CHECK(std::fabs(r1 + r2) <= 1e-9 * std::fabs(m.flux_derivative(x)) + 1e-12);
    }
    CHECK(max_r < 1e-6 * max_d);
  }
}

TEST_CASE("mirror law for the pitchfork family") {
  const DensityModel m(kPitch);
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double x = u(gen);
    CHECK(m.mirror_density(Mode::Minus, -x) == m.density(Mode::Minus, x));
    CHECK(m.mirror_density(Mode::Plus, -x) == m.density(Mode::Plus, x));
  }
}

TEST_CASE("normalization over random super specs") {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(0.2, 4.0);
  int tested = 0;
  while (tested < 20) {
    const auto kind = tested % 2 ? NormalFormKind::Transcritical : NormalFormKind::SupPitchfork;
    const SwitchingSpec s{kind, -u(gen), u(gen), u(gen), u(gen)};
    if (compare_rates(s) != Comparison::Super) continue;
    const double tol = 1e-10;
    const DensityModel m(s, tol);
    CAPTURE(s.p_minus);
    CAPTURE(s.p_plus);
    CAPTURE(s.lambda_minus);
    CAPTURE(s.lambda_plus);
    CHECK(std::fabs(m.mode_mass(Mode::Minus) + m.mode_mass(Mode::Plus) - 1.0) < 1e-12);
    const double total = s.lambda_minus + s.lambda_plus;
    CHECK(std::fabs(m.mode_mass(Mode::Minus) - s.lambda_plus / total) < 10 * tol);
    CHECK(std::fabs(m.mode_mass(Mode::Plus) - s.lambda_minus / total) < 10 * tol);
    ++tested;
  }
}

TEST_CASE("doubling the rates changes C but keeps unit mass") {
  const DensityModel a(kPitch);
  const DensityModel b({NormalFormKind::SupPitchfork, -1, 1, 4, 2});
  CHECK(a.normalization() != doctest::Approx(b.normalization()));
  CHECK(b.mode_mass(Mode::Minus) + b.mode_mass(Mode::Plus) == doctest::Approx(1.0));
}

TEST_CASE("near-critical specs stay finite, critical is rejected") {
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const DensityModel m({NormalFormKind::SupPitchfork, -1, 1, 1 + eps, 1});
    CHECK(m.exponents().x_exp == doctest::Approx(eps).epsilon(1e-12));
    CHECK(std::isfinite(m.normalization()));
  }
  CHECK_THROWS_AS(DensityModel({NormalFormKind::Transcritical, -2, 1, 2, 1}), RegimeError);
}

TEST_CASE("l1 distance against inverse-CDF samples") {
  const DensityModel m(kTrans);
  // Marginal CDF F(x) = (4/3)(1 - (1+x)^-2).
  Histogram h(100, 0.0, 1.0);
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000000; ++i) {
    const double x = 1.0 / std::sqrt(1.0 - 0.75 * u(gen)) - 1.0;
    const double pm = m.density(Mode::Minus, x) / m.marginal(x);
    h.add(x, u(gen) < pm ? Mode::Minus : Mode::Plus);
  }
  CHECK(l1_distance(h, m, ModeSelector::Marginal) < 0.02);
  CHECK(l1_distance(h, m, ModeSelector::Minus) < 0.02);
  CHECK(l1_distance(h, m, ModeSelector::Plus) < 0.02);

  const Histogram empty(100, 0.0, 1.0);
  CHECK_THROWS_AS(l1_distance(empty, m, ModeSelector::Marginal), ValidationError);
  Histogram narrow(10, 0.0, 0.5);
  narrow.add(0.1, Mode::Minus);
  CHECK_THROWS_AS(l1_distance(narrow, m, ModeSelector::Marginal), ValidationError);
}
