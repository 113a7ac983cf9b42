#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ctrwlim/errors.hpp"
#include "ctrwlim/integrals.hpp"
#include "ctrwlim/skorokhod.hpp"
#include "oracles.hpp"

using namespace ctrwlim;

namespace {
CtrwLaws laws_for(double alpha, double beta) {
  return CtrwLaws{StableLaw{alpha, 1.0, Skew::symmetric}, MittagLefflerLaw{beta, 1.0}};
}

// Green function by the textbook formulas, regime by regime.
double green_reference(double g, double k, double t) {
  if (t < 0) return 0.0;
  const double w2 = k - g * g / 4;
  if (w2 > 0) return std::exp(-g * t / 2) * std::sin(std::sqrt(w2) * t) / std::sqrt(w2);
  if (w2 < 0) return std::exp(-g * t / 2) * std::sinh(std::sqrt(-w2) * t) / std::sqrt(-w2);
  return t * std::exp(-g * t / 2);
}
}  // namespace

TEST_CASE("oscillator parameters and regimes") {
  CHECK(OscillatorParams{2.0, 1.0}.regime() == OscillatorParams::Regime::critical);
  CHECK(OscillatorParams{0.2, 1.0}.regime() == OscillatorParams::Regime::under);
  CHECK(OscillatorParams{5.0, 1.0}.regime() == OscillatorParams::Regime::over);
  CHECK(std::string(to_string(OscillatorParams::Regime::over)) == "over");
  CHECK_THROWS_AS((OscillatorParams{-1.0, 1.0}.validate()), ParameterError);
  CHECK_THROWS_AS((OscillatorParams{1.0, 0.0}.validate()), ParameterError);
}

TEST_CASE("green_position") {
  CHECK(green_position({2.0, 1.0}, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  for (auto p : {OscillatorParams{0.2, 1.0}, OscillatorParams{2.0, 1.0}, OscillatorParams{5.0, 1.0}}) {
    CHECK(green_position(p, 0.0) == 0.0);
    CHECK(green_position(p, -0.5) == 0.0);
    for (int i = 0; i <= 100; ++i) {
      const double t = 0.1 * i;
      CHECK(green_position(p, t) == doctest::Approx(green_reference(p.gamma, p.k, t)).epsilon(1e-12));
    }
  }
  const double w1 = std::sqrt(1.0 - 0.01);
  CHECK(std::abs(green_position({0.2, 1.0}, std::numbers::pi / w1)) < 1e-12);
}

TEST_CASE("green_velocity") {
  for (auto p : {OscillatorParams{0.2, 1.0}, OscillatorParams{2.0, 1.0}, OscillatorParams{5.0, 1.0},
                 OscillatorParams{1.0, 7.0}}) {
    CHECK(green_velocity(p, 0.0) == 1.0);
    CHECK(green_velocity(p, -1.0) == 0.0);
    const double h = 1e-5;
    for (int i = 1; i <= 1000; ++i) {
      const double t = 0.01 * i;
      const double fd = (green_position(p, t + h) - green_position(p, t - h)) / (2 * h);
      CHECK(std::abs(green_velocity(p, t) - fd) < 1e-6);
    }
  }
  CHECK(std::abs(green_velocity({2.0, 1.0}, 1.0)) < 1e-15);
  for (double t : {0.3, 2.0, 5.0}) CHECK(green_velocity({2.0, 1.0}, t) == doctest::Approx((1 - t) * std::exp(-t)).epsilon(1e-13));
}

TEST_CASE("green regimes join continuously at the critical damping") {
  // Leading order: sin(w t)/w = t - w^2 t^3/6 with w^2 = 2 eps, so
  // |G_eps - G_crit| ~ eps t^3 e^{-t}/3 for gamma = 2, omega = 1 + eps.
  const double eps = 1e-4;
  for (double w : {1.0 - eps, 1.0 + eps}) {
    for (int i = 0; i <= 1000; ++i) {
      const double t = 0.01 * i;
      const double diff = std::abs(green_position({2.0, w * w}, t) - green_position({2.0, 1.0}, t));
      CHECK(diff <= 1.01 * eps * t * t * t * std::exp(-t) / 3.0 + 1e-14);
    }
  }
}

TEST_CASE("the 1e-6 regime-continuity tolerance is not met at eps = 1e-4" * doctest::should_fail()) {
  // Documents that max_t eps t^3 e^{-t}/3 = 4.5e-5 exceeds 1e-6.
  double worst = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = 0.01 * i;
    worst = std::max(worst, std::abs(green_position({2.0, 1.0001 * 1.0001}, t) - green_position({2.0, 1.0}, t)));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("integrand parsing and bounds") {
  CHECK(parse_integrand("const:c=2.5")(0.3) == 2.5);
  CHECK(parse_integrand("-1.5")(0.3) == -1.5);
  double c = 0.0;
  CHECK(parse_integrand("constant:c=3").is_constant(&c));
  CHECK(c == 3.0);
  CHECK(!parse_integrand("cos").is_constant());
  CHECK(parse_integrand("cos:freq=2,phase=0.5")(0.3) == doctest::Approx(std::cos(0.6 + 0.5)));
  CHECK(parse_integrand("G:gamma=2,k=1")(1.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(parse_integrand("green_velocity:gamma=2,k=1")(0.0) == 1.0);
  CHECK_THROWS_AS(parse_integrand("bogus"), ParameterError);
  CHECK_THROWS_AS(parse_integrand("cos:nope=1"), ParameterError);
  CHECK_THROWS_AS(parse_integrand("cos:freq=x"), ParameterError);
  for (const char* s : {"const:c=-2", "cos:freq=3,phase=1", "green_position:gamma=0.2,k=1",
                        "green_position:gamma=2,k=1", "green_position:gamma=5,k=1",
                        "green_velocity:gamma=0.5,k=2", "green_velocity:gamma=6,k=1"}) {
    const Integrand f = parse_integrand(s);
    CHECK(parse_integrand(f.name()).name() == f.name());
    for (double H : {0.3, 1.0, 10.0}) {
      double brute = 0.0;
      for (int i = 0; i <= 20000; ++i) brute = std::max(brute, std::abs(f(H * i / 20000.0)));
      CHECK(f.bound(H) >= brute - 1e-12);
      CHECK(f.bound(H) <= brute + 1e-6);
    }
  }
  const Integrand t = Integrand::tabulated(StepPath::polyline({0.0, 1.0}, {1.0, -3.0}));
  CHECK(t(0.5) == -1.0);
  CHECK(t.bound(1.0) == 3.0);
}

TEST_CASE("integral_process") {
  const std::uint64_t n = 256;
  const ScalingScheme scheme{n, 1.5, 0.8};
  const RenewalSkeleton sk = generate_skeleton(laws_for(1.5, 0.8), {30, 0}, n * 1.0);
  SUBCASE("f = 1 recovers the CTRW") {
    const StepPath I = integral_process(Integrand::constant(1.0), sk, scheme, 1.0);
    const StepPath X = ctrw_path(sk, scheme, 1.0);
    CHECK(oracle::sup_diff(I, X) == 0.0);
  }
  SUBCASE("f = 0 is identically zero") {
    const StepPath I = integral_process(Integrand::constant(0.0), sk, scheme, 1.0);
    for (double v : I.values()) CHECK(v == 0.0);
  }
  SUBCASE("single jump") {
    const double t0 = 0.3;
    const std::vector<double> e{n * t0, 2.0 * n};
    const std::vector<double> y{1.0, 1.0};
    const Integrand f = Integrand::cosine();
    const StepPath I = integral_process(f, make_skeleton(e, y), scheme, 1.0);
    CHECK(I(0.29) == 0.0);
    CHECK(I(0.7) == doctest::Approx(std::cos(t0) * std::pow(double(n), -0.8 / 1.5)).epsilon(1e-14));
  }
  SUBCASE("linearity") {
    const Integrand f = Integrand::cosine(2.0);
    const Integrand g = Integrand::green_position({1.0, 3.0});
    const Integrand h = Integrand::custom([&](double s) { return 2.0 * f(s) - 0.5 * g(s); }, 3.0, "mix");
    const StepPath a = integral_process(f, sk, scheme, 1.0);
    const StepPath b = integral_process(g, sk, scheme, 1.0);
    const StepPath c = integral_process(h, sk, scheme, 1.0);
    for (double t : c.times()) CHECK(std::abs(c(t) - (2.0 * a(t) - 0.5 * b(t))) <= 1e-12);
  }
  SUBCASE("coverage is enforced") {
    const RenewalSkeleton shortsk = generate_skeleton(laws_for(1.5, 0.8), {30, 1}, 10.0);
    CHECK_THROWS_AS(integral_process(Integrand::cosine(), shortsk, scheme, 1.0),
                    CoverageError);
  }
}

TEST_CASE("increments of I_n are bounded by C_f times the variation of X_n") {
  for (const char* spec : {"cos:freq=3", "green_position:gamma=0.2,k=1", "const:c=-2"}) {
    const Integrand f = parse_integrand(spec);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const std::uint64_t n = 512;
      const ScalingScheme scheme{n, 1.7, 0.9};
      const RenewalSkeleton sk = generate_skeleton(laws_for(1.7, 0.9), {31, seed}, n * 2.0);
      const StepPath I = integral_process(f, sk, scheme, 2.0);
      const StepPath X = ctrw_path(sk, scheme, 2.0);
      const double C = f.bound(2.0);
      for (int a = 0; a < 20; ++a) {
        for (int b = a + 1; b <= 20; b += 3) {
          const double t1 = 0.1 * a, t2 = 0.1 * b;
          const double tv = total_variation(X, t2) - total_variation(X, t1);
          CHECK(std::abs(I(t2) - I(t1)) <= C * tv + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("M1 modulus domination for a non-negative integrand") {
  const Integrand f = Integrand::green_position({2.0, 1.0});
  const double C = f.bound(1.0);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::uint64_t n = 256;
    const ScalingScheme scheme{n, 1.5, 0.8};
    const RenewalSkeleton sk = generate_skeleton(laws_for(1.5, 0.8), {32, seed}, n * 1.0);
    const StepPath I = integral_process(f, sk, scheme, 1.0);
    const StepPath X = ctrw_path(sk, scheme, 1.0);
    const auto probes = default_probes(X);
    for (double d : {0.2, 0.1, 0.05, 0.02}) CHECK(m1_modulus(I, d, probes) <= C * m1_modulus(X, d, probes) + 1e-12);
  }
}

TEST_CASE("limit integral") {
  const TimeChangedDriver dr = make_driver(1.5, 0.8, 1.0 / 512, 1.0, {33, 0});
  CHECK(oracle::sup_diff(limit_integral(Integrand::constant(1.0), dr), time_changed_levy(dr)) <= 1e-12);
  const StepPath zero = limit_integral(Integrand::constant(0.0), dr);
  for (double v : zero.values()) CHECK(v == 0.0);

  SUBCASE("Gaussian case, f = cos: variance 2 int_0^1 cos^2") {
    const int paths = 20000;
    std::vector<double> x(paths);
    for (int i = 0; i < paths; ++i) {
      x[i] = limit_integral(Integrand::cosine(), 2.0, 1.0, 1.0 / 1024, 1.0, {34, std::uint64_t(i)})(1.0);
    }
    const double var = 1.0 + std::sin(2.0) / 2.0;
    CHECK(oracle::ks(x, [&](double t) { return oracle::normal_cdf(t, var); }) < 0.02);
  }
}

TEST_CASE("change of variables") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    CHECK(change_of_variables_check(Integrand::constant(1.0), 1.5, 0.8, 1.0 / 256, 1.0, {35, seed}) <= 1e-12);
    CHECK(change_of_variables_check(Integrand::constant(0.0), 1.5, 0.8, 1.0 / 256, 1.0, {35, seed}) == 0.0);
  }
  // Refinement: the discrepancy shrinks on average and is small.
  double coarse = 0.0, fine = 0.0;
  int improved = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const RefinementPair r = change_of_variables_refinement(Integrand::cosine(), 1.5, 0.8, 1.0 / 256, 1.0, {36, seed});
    coarse += r.coarse;
    fine += r.fine;
    improved += r.fine < r.coarse;
  }
  CHECK(fine < coarse);
  CHECK(improved >= 60);
}

TEST_CASE("oscillator response") {
  const std::uint64_t n = 64;
  const ScalingScheme scheme{n, 1.5, 0.8};
  const double t0 = 0.75;
  const std::vector<double> e{n * t0, n * 100.0};
  const std::vector<double> y{1.0, 1.0};
  const RenewalSkeleton sk = make_skeleton(e, y);
  const double h = std::pow(double(n), -0.8 / 1.5);
  for (auto p : {OscillatorParams{0.2, 1.0}, OscillatorParams{2.0, 1.0}, OscillatorParams{5.0, 1.0}}) {
    for (int i = 0; i <= 100; ++i) {
      const double t = 0.1 * i;
      CHECK(std::abs(oscillator_value(p, sk, scheme, t, Response::position) - h * green_reference(p.gamma, p.k, t - t0)) <= 1e-12);
    }
    CHECK(oscillator_value(p, sk, scheme, t0, Response::velocity) == doctest::Approx(h).epsilon(1e-14));
    CHECK(oscillator_value(p, sk, scheme, t0 - 1e-9, Response::velocity) == 0.0);
  }
  const std::vector<double> e0{1000.0};
  const std::vector<double> y0{1.0};
  const StepPath zero = oscillator_response({1.0, 1.0}, make_skeleton(e0, y0), scheme, 10.0, Response::position, 64);
  for (double v : zero.values()) CHECK(v == 0.0);
}
