#include <doctest.h>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "support.hpp"

using namespace mesocat;
using testing::cd;
using testing::pi;

namespace {

using big = boost::multiprecision::cpp_bin_float_50;

struct BigComplex {
  big re, im;
  BigComplex operator+(const BigComplex& o) const { return {re + o.re, im + o.im}; }
  BigComplex operator*(const BigComplex& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
};

BigComplex expi(const big& angle) { return {cos(angle), sin(angle)}; }

/// alpha_j = (alpha_{j-1} + i l1) e^{-i l2 pi} + i l1, in 50-digit arithmetic.
std::vector<BigComplex> walk_recursion(double l1_d, double l2_d, int steps) {
  const big l1(l1_d), l2(l2_d);
  const big p = boost::math::constants::pi<big>();
  const BigComplex kick{big(0), l1};
  const BigComplex turn = expi(-l2 * p);
  std::vector<BigComplex> out{{big(0), big(0)}};
  for (int j = 1; j <= steps; ++j) out.push_back((out.back() + kick) * turn + kick);
  return out;
}

/// beta_j = (beta_{j-1} + i l1) e^{-2 i l2 pi} + i l1 e^{-i l2 pi} and
/// theta_j = theta_{j-1} + l1 Re[beta_{j-1} + (beta_{j-1} + i l1) e^{-i l2 pi}].
std::pair<BigComplex, big> cat_recursion(double l1_d, double l2_d, int steps) {
  const big l1(l1_d), l2(l2_d);
  const big p = boost::math::constants::pi<big>();
  const BigComplex kick{big(0), l1};
  const BigComplex half = expi(-l2 * p);
  const BigComplex full = expi(-2 * l2 * p);
  BigComplex beta{big(0), big(0)};
  big theta(0);
  for (int j = 1; j <= steps; ++j) {
    theta += l1 * (beta.re + ((beta + kick) * half).re);
    beta = (beta + kick) * full + kick * half;
  }
  return {beta, theta};
}

double to_d(const big& x) { return static_cast<double>(x); }

}  // namespace

TEST_CASE("ladder amplitudes against the printed values and a 50-digit recursion") {
  const auto ref = walk_recursion(0.1, 0.01, 20);
  const LabelLadder<double> ladder(0.1, 0.01, cd(0, 0), 20);
  for (int j = 0; j <= 20; ++j) {
    CHECK(std::abs(ladder.at(j).amplitude.real() - to_d(ref[j].re)) < 1e-13);
    CHECK(std::abs(ladder.at(j).amplitude.imag() - to_d(ref[j].im)) < 1e-13);
  }
  CHECK(std::abs(ladder.at(1).amplitude - cd(0.00314107591, 0.199950656)) < 1e-8);
  CHECK(std::abs(ladder.at(5).amplitude - cd(0.0783720116, 0.995810825)) < 1e-8);
  CHECK(std::abs(ladder.at(10).amplitude - cd(0.311558267, 1.96710148)) < 1e-8);
}

TEST_CASE("conjugate symmetry of the ladder for real alpha0") {
  for (double a0 : {0.0, 0.7, -1.3}) {
    const LabelLadder<double> ladder(0.1, 0.01, cd(a0, 0), 15);
    for (int j = 1; j <= 15; ++j) {
      CHECK(ladder.at(-j).amplitude == std::conj(ladder.at(j).amplitude));
      CHECK(ladder.at(-j).phase == doctest::Approx(-ladder.at(j).phase));
    }
  }
  const LabelLadder<double> ladder(0.1, 0.01, cd(0, 0), 3);
  CHECK_THROWS_AS(ladder.at(4), std::out_of_range);
}

TEST_CASE("walk_state: component count, n = 0, binomial weights") {
  auto pp = testing::fig2(0);
  const auto s0 = walk_state(pp);
  REQUIRE(s0.size() == 1);
  CHECK(std::abs(s0.components[0].coefficient - cd(1, 0)) < 1e-15);
  CHECK(s0.components[0].label.amplitude == cd(0, 0));

  for (int n : {1, 4, 9, 20}) {
    pp.n = n;
    const auto raw = walk_components(pp);
    REQUIRE(raw.size() == std::size_t(n + 1));
    for (int m = 0; m <= n; ++m) {
      const double ratio = std::abs(raw.components[m].coefficient) / std::abs(raw.components[0].coefficient);
      CHECK(ratio == doctest::Approx(binomial<double>(n, m)).epsilon(1e-13));
    }
    CHECK(norm_squared(walk_state(pp)) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("n = 1 walk state: mirrored labels with equal weight") {
  const auto s = walk_state(testing::fig2(1));
  REQUIRE(s.size() == 2);
  const auto a1 = s.components[0].label.amplitude;
  const auto am1 = s.components[1].label.amplitude;
  CHECK(std::abs(a1 - cd(0.00314107591, 0.199950656)) < 1e-8);
  CHECK(am1 == std::conj(a1));
  CHECK(std::abs(s.components[0].coefficient) == doctest::Approx(std::abs(s.components[1].coefficient)));

  // e^{i phi} O(l1,l2)|0> + e^{-i phi} O(-l1,-l2)|0>, up to normalization.
  const auto pp = testing::fig2(1);
  SuperposedState<double> direct;
  direct.components.push_back({std::polar(1.0, pp.phi), apply_pulse_operator(pp.forward(), CoherentLabel<double>{})});
  direct.components.push_back({std::polar(1.0, -pp.phi), apply_pulse_operator(pp.backward(), CoherentLabel<double>{})});
  CHECK(fidelity(direct, s) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("tenth ladder rung sits at <x> = sqrt2 Re(alpha_10)") {
  const LabelLadder<double> ladder(0.1, 0.01, cd(0, 0), 10);
  SuperposedState<double> s;
  s.components.push_back({cd(1, 0), ladder.at(10)});
  CHECK(moments(s).mean_x == doctest::Approx(0.4406).epsilon(1e-4));
}

TEST_CASE("single_cycle with no kicks only phases the branches") {
  ProtocolParams<double> pp;
  pp.phi = 1.1;
  SuperposedState<double> vac;
  vac.components.push_back({cd(1, 0), {}});
  const auto joint = single_cycle(pp, prepare_ground(vac));
  const cd ratio = joint.plus.components[0].coefficient / joint.minus.components[0].coefficient;
  CHECK(std::abs(ratio - (-std::polar(1.0, -2 * pp.phi))) < 1e-15);
  CHECK(joint.plus.components[0].label.amplitude == cd(0, 0));
  CHECK(joint.minus.components[0].label.amplitude == cd(0, 0));
}

TEST_CASE("projection: completeness and symmetric branches") {
  auto gen = testing::rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    auto pp = testing::fig2(1);
    pp.phi = std::uniform_real_distribution<double>(0, 2 * pi)(gen);
    pp.alpha0 = testing::random_amplitude(gen, 1.0);
    SuperposedState<double> start;
    start.components.push_back({cd(1, 0), {pp.alpha0, 0}});
    const auto joint = single_cycle(pp, prepare_ground(start));
    const double pg = project_qubit(joint, QubitOutcome::ground).probability;
    const double pe = project_qubit(joint, QubitOutcome::excited).probability;
    CHECK(pg + pe == doctest::Approx(1.0).epsilon(1e-12));
  }

  JointState<double> sym;
  sym.plus.components.push_back({cd(1, 0), {cd(1, 0), 0}});
  sym.minus.components.push_back({cd(-1, 0), {cd(-1, 0), 0}});
  const auto out = project_qubit(sym, QubitOutcome::ground);
  REQUIRE(out.projected.size() == 2);
  CHECK(std::abs(out.projected.components[0].coefficient) ==
        doctest::Approx(std::abs(out.projected.components[1].coefficient)));
  CHECK(norm_squared(out.projected) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cycle-by-cycle conditioning equals the closed form") {
  auto gen = testing::rng(23);
  for (int n = 0; n <= 6; ++n) {
    for (double phi : {4.5 * pi, 4 * pi, 0.37}) {
      auto pp = testing::fig2(n, 0.0, phi);
      const auto run = conditioned_walk(pp);
      CHECK(fidelity(run.state, walk_state(pp)) >= 1 - 1e-10);
      CHECK(run.state.size() == std::size_t(n + 1));
      double product = 1;
      for (double p : run.step_probabilities) product *= p;
      CHECK(product == doctest::Approx(run.record_probability));
    }
    auto pp = testing::fig2(n);
    pp.alpha0 = testing::random_amplitude(gen, 1.0);
    CHECK(fidelity(conditioned_walk(pp).state, walk_state(pp)) >= 1 - 1e-10);
  }
  // One cycle and one projection is the n = 1 state.
  CHECK(fidelity(conditioned_walk(testing::fig2(1)).state, walk_state(testing::fig2(1))) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("derive_protocol maps physical rates") {
  const double omega = 2 * pi * 1e9;
  const double eta = 1e-3;
  PhysicalParams<double> p;
  p.omega = omega;
  p.g = eta * omega;
  p.Omega2 = 0.1 * omega / eta;
  p.Omega1 = 0.01 * omega / (eta * eta);
  auto pp = derive_protocol(p, 3);
  CHECK(pp.l1 == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(pp.l2 == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(pp.xi == 0.0);
  CHECK(pp.n == 3);
  CHECK(pp.phi == doctest::Approx(reduce_angle(p.Omega1 * (1 - eta * eta / 2) * pi / omega)));
  CHECK(pp.phi >= 0.0);
  CHECK(pp.phi < 2 * pi);

  p.Gamma = 1e6;
  CHECK(derive_protocol(p, 1).xi == doctest::Approx(3 * p.Gamma * (2 * pi / omega) / 8));

  PhysicalParams<double> free;
  free.omega = 1;
  free.Omega1 = 20.25;
  free.Omega2 = 1;
  const auto fp = derive_protocol(free, 1);
  CHECK(fp.l1 == 0.0);
  CHECK(fp.l2 == 0.0);
  CHECK(fp.phi == doctest::Approx(reduce_angle(20.25 * pi)));

  CHECK(reduce_angle(4.5 * pi) == doctest::Approx(pi / 2));
}

TEST_CASE("regime gates and warnings") {
  const auto ok = physical_for(0.1, 0.01, 1e-2);
  CHECK_NOTHROW(check_regime(ok));
  CHECK(regime_warnings(ok).size() == 1);
  CHECK(regime_warnings(physical_for(0.01, 0.01, 1e-3)).empty());

  auto wide = physical_for(0.1, 0.01, 0.06);
  CHECK_THROWS_AS(derive_protocol(wide, 1), RegimeViolation);
  auto weak = ok;
  weak.Omega1 = 5 * weak.Omega2;
  CHECK_THROWS_AS(derive_protocol(weak, 1), RegimeViolation);
  auto neg = ok;
  neg.omega = 0;
  CHECK_THROWS_AS(check_regime(neg), RegimeViolation);
}

TEST_CASE("cat state labels and phases against a 50-digit recursion") {
  auto pp = testing::fig2(10);
  const auto cat = cat_state(pp);
  REQUIRE(cat.size() == 2);
  CHECK(norm_squared(cat) == doctest::Approx(1.0).epsilon(1e-12));

  const auto [beta, theta] = cat_recursion(0.1, 0.01, 10);
  const auto& fwd = cat.components[1].label;
  CHECK(std::abs(fwd.amplitude.real() - to_d(beta.re)) < 1e-13);
  CHECK(std::abs(fwd.amplitude.imag() - to_d(beta.im)) < 1e-13);
  CHECK(std::abs(wrap_phase(fwd.phase - to_d(theta))) < 1e-13);

  // The (-l1, -l2) branch mirrors it for beta0 = 0.
  const auto& back = cat.components[0].label;
  CHECK(std::abs(back.amplitude - std::conj(fwd.amplitude)) < 1e-14);
  CHECK(std::abs(wrap_phase(back.phase + fwd.phase)) < 1e-14);
}

TEST_CASE("cat state in the zero-kick limit") {
  ProtocolParams<double> pp;
  pp.n = 1;
  // phi' = 2 n phi
  pp.phi = pi / 4;  // phi' = pi/2
  CHECK_NOTHROW(cat_state(pp, QubitOutcome::excited));
  CHECK_THROWS_AS(cat_state(pp, QubitOutcome::ground), DegenerateState);
  pp.phi = 0;  // phi' = 0
  CHECK_THROWS_AS(cat_state(pp, QubitOutcome::excited), DegenerateState);
  CHECK_NOTHROW(cat_state(pp, QubitOutcome::ground));

  pp.n = 0;
  CHECK_THROWS_AS(cat_state(pp), std::invalid_argument);
}

TEST_CASE("cat outcome probabilities are complementary") {
  for (int n : {1, 3, 10}) {
    const auto pp = testing::fig2(n);
    const double pg = cat_measurement(pp, QubitOutcome::ground).probability;
    const double pe = cat_measurement(pp, QubitOutcome::excited).probability;
    CHECK(pg + pe == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("mean displacement is small for even multiples of pi/2") {
  const double even = moments(walk_state(testing::fig2(10, 0.0, 4 * pi))).mean_x;
  const double odd = moments(walk_state(testing::fig2(10, 0.0, 4.5 * pi))).mean_x;
  CHECK(std::abs(even) < 0.05);
  CHECK(std::abs(even) < std::abs(odd));
}

TEST_CASE("ProtocolParams validation") {
  auto pp = testing::fig2(2);
  pp.xi = -1;
  CHECK_THROWS_AS(walk_state(pp), std::invalid_argument);
  pp = testing::fig2(-1);
  CHECK_THROWS_AS(walk_state(pp), std::invalid_argument);
}
