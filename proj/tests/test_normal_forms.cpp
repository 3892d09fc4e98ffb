#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "pdmp/error.hpp"
#include "pdmp/normal_forms.hpp"

using namespace pdmp;

namespace {

constexpr NormalFormKind kAllKinds[] = {
    NormalFormKind::SupPitchfork,  NormalFormKind::SubPitchfork,  NormalFormKind::Transcritical,
    NormalFormKind::Fold,          NormalFormKind::SupHopfRadial, NormalFormKind::SubHopfRadial};

double direct_field(NormalFormKind k, double p, double x) {
  switch (k) {
    case NormalFormKind::SupPitchfork:
    case NormalFormKind::SupHopfRadial: return p * x - x * x * x;
    case NormalFormKind::SubPitchfork:
    case NormalFormKind::SubHopfRadial: return p * x + x * x * x;
    case NormalFormKind::Transcritical: return p * x - x * x;
    case NormalFormKind::Fold: return p - x * x;
  }
  return 0.0;
}

}  // namespace

TEST_CASE("eval_field examples") {
  CHECK(eval_field({NormalFormKind::SupPitchfork, 1.0}, 1.0) == 0.0);
  CHECK(eval_field({NormalFormKind::Transcritical, -1.0}, -1.0) == 0.0);
  CHECK(eval_field({NormalFormKind::Fold, -1.0}, 0.0) == -1.0);
  CHECK_THROWS_AS(eval_field({NormalFormKind::SupHopfRadial, 1.0}, -0.1), DomainError);
  CHECK_THROWS_AS(eval_field({NormalFormKind::SubHopfRadial, 1.0}, -0.1), DomainError);
}

TEST_CASE("kind names round-trip") {
  for (auto k : kAllKinds) CHECK(parse_kind(to_string(k)) == k);
  CHECK_FALSE(parse_kind("saddle").has_value());
}

TEST_CASE("flow examples") {
  SUBCASE("sup pitchfork at p=0") {
    const auto r = flow({NormalFormKind::SupPitchfork, 0.0}, 1.0, 1.5);
    REQUIRE(r.is_value());
    CHECK(r.x == doctest::Approx(0.5).epsilon(1e-15));
    const auto rk = oracle::rk4([](double x) { return -x * x * x; }, 1.0, 1.5, 1e-5);
    REQUIRE(rk);
    CHECK(std::fabs(*rk - r.x) < 1e-9);
  }
  SUBCASE("sub pitchfork blows up upwards") {
    const auto r = flow({NormalFormKind::SubPitchfork, 1.0}, 1.0, 1.0);
    REQUIRE(r.is_blow_up());
    CHECK(r.t_star == doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-14));
    CHECK(r.direction == Direction::Up);
    const auto esc = oracle::rk4_escape_time([](double x) { return x + x * x * x; }, 1.0, 1.0,
                                             1e-5);
    REQUIRE(esc);
    CHECK(*esc <= r.t_star + 1e-4);
    CHECK(*esc >= r.t_star - 1e-4);
  }
  SUBCASE("fold p<0 blows up downwards at pi/2") {
    const auto r = flow({NormalFormKind::Fold, -1.0}, 0.0, 2.0);
    REQUIRE(r.is_blow_up());
    CHECK(r.t_star == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
    CHECK(r.direction == Direction::Down);
    const auto esc =
        oracle::rk4_escape_time([](double x) { return -1.0 - x * x; }, 0.0, 2.0, 1e-5);
    REQUIRE(esc);
    CHECK(std::fabs(*esc - std::numbers::pi / 2) < 1e-4);
  }
  SUBCASE("transcritical equilibrium stays put") {
    const auto r = flow({NormalFormKind::Transcritical, 1.0}, 1.0, 7.0);
    REQUIRE(r.is_value());
    CHECK(r.x == 1.0);
  }
  CHECK_THROWS_AS(flow({NormalFormKind::Fold, 1.0}, 0.0, -1.0), DomainError);
}

TEST_CASE("blow_up_time examples") {
  const auto tc = blow_up_time({NormalFormKind::Transcritical, -1.0}, -2.0);
  REQUIRE(tc);
  CHECK(*tc > 0.0);
  CHECK(*tc == doctest::Approx(std::log(2.0)).epsilon(1e-14));  // log1p(-1/2)/(-1)
  const auto esc =
      oracle::rk4_escape_time([](double x) { return -x - x * x; }, -2.0, 5.0, 1e-5);
  REQUIRE(esc);
  CHECK(std::fabs(*esc - *tc) < 1e-4);

  CHECK_FALSE(blow_up_time({NormalFormKind::SupPitchfork, 5.0}, 100.0).has_value());
  const auto fold = blow_up_time({NormalFormKind::Fold, -1.0}, 0.0);
  REQUIRE(fold);
  CHECK(*fold == doctest::Approx(std::numbers::pi / 2));
  // Left of p_- in the transcritical form: no escape from inside (p,0).
  CHECK_FALSE(blow_up_time({NormalFormKind::Transcritical, -1.0}, -0.5).has_value());
}

TEST_CASE("equilibria examples") {
  const auto sp = equilibria({NormalFormKind::SupPitchfork, 1.0});
  REQUIRE(sp.size() == 3);
  CHECK(sp[0].x == -1.0);
  CHECK(sp[0].stability == Stability::Stable);
  CHECK(sp[1].x == 0.0);
  CHECK(sp[1].stability == Stability::Unstable);
  CHECK(sp[2].x == 1.0);
  CHECK(sp[2].stability == Stability::Stable);

  CHECK(equilibria({NormalFormKind::Fold, -1.0}).empty());

  const auto tc = equilibria({NormalFormKind::Transcritical, -2.0});
  REQUIRE(tc.size() == 2);
  CHECK(tc[0].x == -2.0);
  CHECK(tc[0].stability == Stability::Unstable);
  CHECK(tc[1].x == 0.0);
  CHECK(tc[1].stability == Stability::Stable);

  for (auto k : kAllKinds) {
    for (const auto& e : equilibria({k, 0.0})) CHECK(e.degenerate);
  }
  for (const auto& e : equilibria({NormalFormKind::SubPitchfork, -4.0})) {
    CHECK_FALSE(e.degenerate);
    CHECK(direct_field(NormalFormKind::SubPitchfork, -4.0, e.x) == 0.0);
  }
}

TEST_CASE("linearize_at_zero") {
  CHECK(linearize_at_zero({NormalFormKind::SupPitchfork, -3.0}) == -3.0);
  CHECK(linearize_at_zero({NormalFormKind::Transcritical, 0.5}) == 0.5);
  CHECK_THROWS_AS(linearize_at_zero({NormalFormKind::Fold, 1.0}), DomainError);
}

TEST_CASE("equilibria are exact fixed points of the flow") {
  for (auto k : kAllKinds)
    for (double p : {-2.0, -0.5, 0.0, 0.7, 3.0})
      for (const auto& e : equilibria({k, p}))
        for (double t : {0.1, 1.0, 10.0, 1e3}) {
          const auto r = flow({k, p}, e.x, t);
          REQUIRE(r.is_value());
          CHECK(r.x == e.x);
        }
}

TEST_CASE("Hopf radial kinds share the pitchfork flow on r >= 0") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> up(-2.0, 2.0), ur(0.0, 2.0), ut(0.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const double p = up(gen), r = ur(gen), t = ut(gen);
    const auto a = flow({NormalFormKind::SupHopfRadial, p}, r, t);
    const auto b = flow({NormalFormKind::SupPitchfork, p}, r, t);
    CHECK(a.is_value() == b.is_value());
    if (a.is_value()) CHECK(a.x == b.x);
    const auto c = flow({NormalFormKind::SubHopfRadial, p}, r, t);
    const auto d = flow({NormalFormKind::SubPitchfork, p}, r, t);
    CHECK(c.is_value() == d.is_value());
    if (c.is_value()) CHECK(c.x == d.x);
    if (c.is_blow_up()) CHECK(c.t_star == d.t_star);
  }
}

TEST_CASE("semigroup property on random inputs") {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<int> uk(0, 5);
  std::uniform_real_distribution<double> up(-2.0, 2.0), ux(-2.0, 2.0), ut(0.0, 2.0);
  int checked = 0;
  while (checked < 1000) {
    const auto k = kAllKinds[uk(gen)];
    const double p = up(gen), s = ut(gen), t = ut(gen);
    double x0 = ux(gen);
    if (is_hopf_radial(k)) x0 = std::fabs(x0);
    const auto whole = flow({k, p}, x0, s + t);
    const auto first = flow({k, p}, x0, s);
    if (!whole.is_value() || !first.is_value()) continue;
    const auto second = flow({k, p}, first.x, t);
    REQUIRE(second.is_value());
    CHECK(std::fabs(whole.x - second.x) <= 1e-9 * (1.0 + std::fabs(whole.x)));
    ++checked;
  }
}

TEST_CASE("closed form agrees with an RK4 oracle on bounded orbits") {
  std::mt19937_64 gen(13);
  std::uniform_int_distribution<int> uk(0, 5);
  std::uniform_real_distribution<double> up(-2.0, 2.0), ux(-2.0, 2.0), ut(0.0, 10.0);
  int checked = 0;
  while (checked < 100) {
    const auto k = kAllKinds[uk(gen)];
    const double p = up(gen), t = ut(gen);
    double x0 = ux(gen);
    if (is_hopf_radial(k)) x0 = std::fabs(x0);
    const auto r = flow({k, p}, x0, t);
    if (!r.is_value() || std::fabs(r.x) > 10.0) continue;
    if (blow_up_time({k, p}, x0).has_value()) continue;
    const auto rk = oracle::rk4([&](double x) { return direct_field(k, p, x); }, x0, t, 1e-5);
    REQUIRE(rk);
    CHECK(std::fabs(*rk - r.x) < 1e-6);
    ++checked;
  }
}

TEST_CASE("flow and blow_up_time agree") {
  std::mt19937_64 gen(17);
  std::uniform_int_distribution<int> uk(0, 5);
  std::uniform_real_distribution<double> up(-2.0, 2.0), ux(-3.0, 3.0), ut(0.0, 3.0);
  for (int i = 0; i < 2000; ++i) {
    const auto k = kAllKinds[uk(gen)];
    const double p = up(gen), t = ut(gen);
    double x0 = ux(gen);
    if (is_hopf_radial(k)) x0 = std::fabs(x0);
    const auto r = flow({k, p}, x0, t);
    const auto ts = blow_up_time({k, p}, x0);
    if (r.is_blow_up()) {
      REQUIRE(ts);
      CHECK(r.t_star == *ts);
      CHECK(*ts <= t);
    } else {
      CHECK((!ts || *ts > t));
    }
  }
}

TEST_CASE("monotone comparison for sup pitchfork and transcritical") {
  std::mt19937_64 gen(19);
  std::uniform_real_distribution<double> up(-2.0, 2.0), ux(0.0, 2.0), ut(0.0, 3.0);
  for (auto k : {NormalFormKind::SupPitchfork, NormalFormKind::Transcritical}) {
    for (int i = 0; i < 500; ++i) {
      double pa = up(gen), pb = up(gen);
      if (pa > pb) std::swap(pa, pb);
      const double x = ux(gen), t = ut(gen);
      CHECK(eval_field({k, pb}, x) >= eval_field({k, pa}, x));
      const auto fa = flow({k, pa}, x, t), fb = flow({k, pb}, x, t);
      REQUIRE(fa.is_value());
      REQUIRE(fb.is_value());
      CHECK(fb.x >= fa.x - 1e-15);
    }
  }
}

TEST_CASE("underflow clamp produces exact zero") {
  const auto r = flow({NormalFormKind::SupPitchfork, -10.0}, 1e-5, 100.0);
  REQUIRE(r.is_value());
  CHECK(r.x == 0.0);
}
