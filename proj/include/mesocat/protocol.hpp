#ifndef MESOCAT_PROTOCOL_HPP
#define MESOCAT_PROTOCOL_HPP

// Measurement-conditioned protocols: the pulse-pair random walk on a circle
// and the two-component cat state.
//
// Branch convention (fixed against the Fock oracle): the qubit dressed state
// |+> picks up e^{-i phi} and the kick O(-l1, -l2); |-> picks up e^{+i phi}
// and O(l1, l2). The qubit starts in |g> = (|+> - |->)/sqrt(2).

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "mesocat/coherent.hpp"
#include "mesocat/errors.hpp"

namespace mesocat {

/// Reduces an angle to [0, 2 pi).
template <typename Real>
Real reduce_angle(Real angle) {
  constexpr Real two_pi = Real(2) * std::numbers::pi_v<Real>;
  Real r = std::fmod(angle, two_pi);
  if (r < 0) r += two_pi;
  if (r >= two_pi) r -= two_pi;
  return r;
}

/// Frequencies in rad/s (any consistent unit works; only ratios enter).
template <typename Real = double>
struct PhysicalParams {
  Real omega{1};   // resonator frequency
  Real g{0};       // qubit-resonator coupling
  Real Omega1{0};  // strong drive
  Real Omega2{0};  // weak drive
  Real Gamma{0};   // qubit spontaneous decay

  Real eta() const { return g / omega; }
  Real Omega1_dressed() const { return Omega1 * (Real(1) - eta() * eta() / Real(2)); }
  Real period() const { return Real(2) * std::numbers::pi_v<Real> / omega; }
};

template <typename Real = double>
struct ProtocolParams {
  Real l1{0};
  Real l2{0};
  Real phi{0};  // stored in [0, 2 pi)
  int n{0};
  Real xi{0};
  Complex<Real> alpha0{};

  void validate() const {
    if (!(l1 >= 0) || !(l2 >= 0)) throw std::invalid_argument("ProtocolParams: l1, l2 must be >= 0");
    if (!(xi >= 0)) throw std::invalid_argument("ProtocolParams: xi must be >= 0");
    if (n < 0) throw std::invalid_argument("ProtocolParams: n must be >= 0");
  }

  PulseOperatorSpec<Real> forward() const { return {l1, l2, +1}; }
  PulseOperatorSpec<Real> backward() const { return {l1, l2, -1}; }
};

/// Non-fatal regime remarks (drive hierarchy below 100x).
template <typename Real>
std::vector<std::string> regime_warnings(const PhysicalParams<Real>& p) {
  std::vector<std::string> out;
  const Real weak = std::max(p.Omega2, p.g);
  if (p.Omega1 < Real(100) * weak) {
    out.push_back("Omega1 / max(Omega2, g) = " + std::to_string(double(p.Omega1 / weak)) +
                  " is below 100; strong-drive approximation is marginal");
  }
  return out;
}

template <typename Real>
void check_regime(const PhysicalParams<Real>& p) {
  if (!(p.omega > 0)) throw RegimeViolation("omega must be positive");
  if (p.g < 0 || p.Omega1 < 0 || p.Omega2 < 0 || p.Gamma < 0) {
    throw RegimeViolation("g, Omega1, Omega2, Gamma must be non-negative");
  }
  if (p.eta() > Real(0.05)) {
    throw RegimeViolation("eta = g/omega = " + std::to_string(double(p.eta())) +
                          " exceeds 0.05; second-order expansion invalid");
  }
  if (p.Omega1 < Real(10) * std::max(p.Omega2, p.g)) {
    throw RegimeViolation("Omega1 must be >= 10 max(Omega2, g)");
  }
}

/// l1 = Omega2 eta / omega, l2 = Omega1 eta^2 / omega, phi = Omega1' pi / omega,
/// xi = 3 Gamma T / 8 with T = 2 pi / omega.
template <typename Real>
ProtocolParams<Real> derive_protocol(const PhysicalParams<Real>& p, int n,
                                     Complex<Real> alpha0 = {}) {
  check_regime(p);
  const Real eta = p.eta();
  ProtocolParams<Real> pp;
  pp.l1 = p.Omega2 * eta / p.omega;
  pp.l2 = p.Omega1 * eta * eta / p.omega;
  pp.phi = reduce_angle(p.Omega1_dressed() * std::numbers::pi_v<Real> / p.omega);
  pp.n = n;
  pp.xi = Real(3) * p.Gamma * p.period() / Real(8);
  pp.alpha0 = alpha0;
  pp.validate();
  return pp;
}

/// Physical values that realize (l1, l2) at a given eta (used by oracle runs).
template <typename Real>
PhysicalParams<Real> physical_for(Real l1, Real l2, Real eta, Real omega = Real(1),
                                  Real Gamma = Real(0)) {
  PhysicalParams<Real> p;
  p.omega = omega;
  p.g = eta * omega;
  p.Omega1 = l2 * omega / (eta * eta);
  p.Omega2 = l1 * omega / eta;
  p.Gamma = Gamma;
  return p;
}

/// Coherent labels alpha_j (with phases theta_j) for j in [-reach, reach]:
/// alpha_j = O(l1, l2)^j |alpha0> for j > 0 and O(-l1, -l2)^|j| for j < 0.
template <typename Real = double>
class LabelLadder {
 public:
  LabelLadder(Real l1, Real l2, Complex<Real> alpha0, int reach) : reach_(reach) {
    if (reach < 0) throw std::invalid_argument("LabelLadder: reach must be >= 0");
    labels_.resize(static_cast<std::size_t>(2 * reach + 1));
    const PulseOperatorSpec<Real> up(l1, l2, +1);
    const PulseOperatorSpec<Real> down(l1, l2, -1);
    slot(0) = CoherentLabel<Real>{alpha0, Real(0)};
    for (int j = 1; j <= reach; ++j) {
      slot(j) = apply_pulse_operator(up, slot(j - 1));
      slot(-j) = apply_pulse_operator(down, slot(-j + 1));
    }
  }

  int reach() const { return reach_; }

  const CoherentLabel<Real>& at(int j) const {
    if (j < -reach_ || j > reach_) throw std::out_of_range("LabelLadder: index out of reach");
    return labels_[static_cast<std::size_t>(j + reach_)];
  }

 private:
  CoherentLabel<Real>& slot(int j) { return labels_[static_cast<std::size_t>(j + reach_)]; }

  int reach_;
  std::vector<CoherentLabel<Real>> labels_;
};

template <typename Real>
Real binomial(int n, int m) {
  if (m < 0 || m > n) return Real(0);
  m = std::min(m, n - m);
  Real out(1);
  for (int i = 1; i <= m; ++i) out = out * Real(n - m + i) / Real(i);
  return out;
}

/// Unnormalized walk superposition: component m carries
/// binomial(n, m) e^{i(n-2m) phi} and the ladder label alpha_{n-2m}.
template <typename Real>
SuperposedState<Real> walk_components(const ProtocolParams<Real>& pp) {
  pp.validate();
  const LabelLadder<Real> ladder(pp.l1, pp.l2, pp.alpha0, pp.n);
  SuperposedState<Real> out;
  out.components.reserve(static_cast<std::size_t>(pp.n + 1));
  for (int m = 0; m <= pp.n; ++m) {
    const int j = pp.n - 2 * m;
    out.components.push_back(
        {binomial<Real>(pp.n, m) * std::polar(Real(1), Real(j) * pp.phi), ladder.at(j)});
  }
  return out;
}

template <typename Real>
SuperposedState<Real> walk_state(const ProtocolParams<Real>& pp) {
  return normalize(walk_components(pp));
}

enum class QubitOutcome { ground, excited };

inline const char* to_string(QubitOutcome o) {
  return o == QubitOutcome::ground ? "ground" : "excited";
}

/// Qubit-resonator state |+> (x) plus + |-> (x) minus.
template <typename Real = double>
struct JointState {
  SuperposedState<Real> plus;
  SuperposedState<Real> minus;
};

template <typename Real = double>
struct MeasurementOutcome {
  QubitOutcome qubit_state = QubitOutcome::ground;
  SuperposedState<Real> projected;
  Real probability{};
};

/// |g> (x) oscillator.
template <typename Real>
JointState<Real> prepare_ground(const SuperposedState<Real>& oscillator) {
  const Real h = Real(1) / std::sqrt(Real(2));
  return {scaled(oscillator, Complex<Real>(h)), scaled(oscillator, Complex<Real>(-h))};
}

/// One pulse pair: drives on for half a mechanical period, off for the other half.
template <typename Real>
JointState<Real> single_cycle(const ProtocolParams<Real>& pp, const JointState<Real>& input) {
  const auto plus = apply_pulse_operator(pp.backward(), input.plus);
  const auto minus = apply_pulse_operator(pp.forward(), input.minus);
  return {scaled(plus, std::polar(Real(1), -pp.phi)), scaled(minus, std::polar(Real(1), pp.phi))};
}

/// Projects on |g> = (|+> - |->)/sqrt(2) or |e> = (|+> + |->)/sqrt(2).
template <typename Real>
MeasurementOutcome<Real> project_qubit(const JointState<Real>& joint, QubitOutcome outcome) {
  const Real h = Real(1) / std::sqrt(Real(2));
  const Real minus_sign = outcome == QubitOutcome::ground ? Real(-1) : Real(1);
  const auto raw = superpose(scaled(joint.plus, Complex<Real>(h)),
                             scaled(joint.minus, Complex<Real>(minus_sign * h)));
  MeasurementOutcome<Real> out;
  out.qubit_state = outcome;
  out.probability = norm_squared(raw);
  if (!(out.probability > Real(1e-14))) {
    throw DegenerateState(std::string("project_qubit: outcome '") + to_string(outcome) +
                          "' has vanishing amplitude");
  }
  out.projected = normalize(raw);
  return out;
}

template <typename Real = double>
struct ConditionedRun {
  SuperposedState<Real> state;
  std::vector<Real> step_probabilities;
  Real record_probability{1};
};

/// Cycle-by-cycle evolution with a |g> detection after every pulse pair.
template <typename Real>
ConditionedRun<Real> conditioned_walk(const ProtocolParams<Real>& pp) {
  pp.validate();
  ConditionedRun<Real> run;
  run.state.components.push_back({Complex<Real>(1), {pp.alpha0, Real(0)}});
  run.state.normalized = true;
  for (int step = 0; step < pp.n; ++step) {
    const auto measured =
        project_qubit(single_cycle(pp, prepare_ground(run.state)), QubitOutcome::ground);
    run.state = coalesce(measured.projected);
    run.step_probabilities.push_back(measured.probability);
    run.record_probability *= measured.probability;
  }
  return run;
}

/// One mechanical period with the strong drive left on and the weak drive
/// pulsed for the first half: R(s l2 pi) D(i s l1) R(s l2 pi) D(i s l1).
template <typename Real>
CoherentLabel<Real> cat_cycle(const ProtocolParams<Real>& pp, int sign,
                              const CoherentLabel<Real>& label) {
  const Real s = static_cast<Real>(sign);
  const Complex<Real> kick(0, s * pp.l1);
  const Real turn = s * pp.l2 * std::numbers::pi_v<Real>;
  return rotate(displace(rotate(displace(label, kick), turn), kick), turn);
}

/// Two-component state after n cycles and a single final qubit detection.
/// Component 0 carries beta_{-n} (the |+> branch), component 1 beta_n.
template <typename Real>
MeasurementOutcome<Real> cat_measurement(const ProtocolParams<Real>& pp,
                                         QubitOutcome outcome = QubitOutcome::ground) {
  pp.validate();
  if (pp.n < 1) throw std::invalid_argument("cat_state: n must be >= 1");
  CoherentLabel<Real> back{pp.alpha0, Real(0)};
  CoherentLabel<Real> fwd{pp.alpha0, Real(0)};
  for (int c = 0; c < pp.n; ++c) {
    back = cat_cycle(pp, -1, back);
    fwd = cat_cycle(pp, +1, fwd);
  }
  const Real phi_total = Real(2) * Real(pp.n) * pp.phi;
  const Real h = Real(1) / std::sqrt(Real(2));
  JointState<Real> joint;
  joint.plus.components.push_back({std::polar(h, -phi_total), back});
  joint.minus.components.push_back({-std::polar(h, phi_total), fwd});
  return project_qubit(joint, outcome);
}

template <typename Real>
SuperposedState<Real> cat_state(const ProtocolParams<Real>& pp,
                                QubitOutcome outcome = QubitOutcome::ground) {
  return cat_measurement(pp, outcome).projected;
}

}  // namespace mesocat

#endif  // MESOCAT_PROTOCOL_HPP
