#ifndef MESOCAT_FOCK_ORACLE_HPP
#define MESOCAT_FOCK_ORACLE_HPP

// Truncated Fock-space simulator of the driven qubit + resonator.
//
// Basis ordering is qubit-major: index q * N + k with q = 0 for |g> and
// q = 1 for |e>, k the phonon number. Segment propagators are exact matrix
// exponentials of the piecewise-constant Hamiltonian (eigendecomposition).

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "mesocat/coherent.hpp"
#include "mesocat/errors.hpp"
#include "mesocat/protocol.hpp"

namespace mesocat {

/// Which Hamiltonian the oracle evolves while the drives are on.
enum class OracleHamiltonian {
  /// Omega1' sx + (omega - Omega1 eta^2 sx) A^dag A, A = a + i Omega2 eta sx / omega.
  block_diagonal,
  /// omega a^dag a + Omega1' sx + i Omega2 eta sx (a^dag - a) - Omega1 eta^2 sx a^dag a.
  effective,
  /// omega a^dag a + Omega1 sx + i Omega2 (s+ - s-) + g |e><e| (a + a^dag).
  full,
};

/// Sign of the relative phase between the two drives (+pi/2 or -pi/2). It
/// flips the sign of every Omega2 term; minus_half_pi makes |+> carry
/// O(-l1, -l2), matching the closed-form protocol.
enum class DrivePhase { minus_half_pi, plus_half_pi };

enum class QubitBasis { bare, dressed };

template <typename Real = double>
struct OracleSettings {
  int cutoff = 80;
  OracleHamiltonian hamiltonian = OracleHamiltonian::block_diagonal;
  DrivePhase drive = DrivePhase::minus_half_pi;
  Real leakage_tolerance = Real(1e-8);
  int leakage_levels = 5;
};

template <typename Real = double>
struct FockStateVector {
  int cutoff = 0;
  CVector<Real> amplitudes;  // size 2 * cutoff
};

struct DriveFlags {
  bool omega1_on = false;
  bool omega2_on = false;
  friend auto operator<=>(const DriveFlags&, const DriveFlags&) = default;
};

template <typename Real = double>
struct PulseSegment {
  Real duration{};  // in units of 1/omega
  DriveFlags drives{};
};

template <typename Real = double>
struct PulseSchedule {
  std::vector<PulseSegment<Real>> segments;

  /// Drives on for pi/omega, then both off for pi/omega.
  static PulseSchedule walk_cycle() {
    constexpr Real half = std::numbers::pi_v<Real>;
    return {{{half, {true, true}}, {half, {false, false}}}};
  }

  /// Strong drive on for the whole period, weak drive on for the first half.
  static PulseSchedule cat_cycle() {
    constexpr Real half = std::numbers::pi_v<Real>;
    return {{{half, {true, true}}, {half, {true, false}}}};
  }

  PulseSchedule repeated(int times) const {
    PulseSchedule out;
    for (int i = 0; i < times; ++i) {
      out.segments.insert(out.segments.end(), segments.begin(), segments.end());
    }
    return out;
  }
};

template <typename Real>
CMatrix<Real> annihilation(int cutoff) {
  CMatrix<Real> a = CMatrix<Real>::Zero(cutoff, cutoff);
  for (int k = 1; k < cutoff; ++k) a(k - 1, k) = std::sqrt(Real(k));
  return a;
}

/// Smallest cutoff the oracle accepts for states reaching |alpha| <= max_alpha.
template <typename Real>
int minimum_cutoff(Real max_alpha) {
  return static_cast<int>(std::ceil(Real(4) * max_alpha * max_alpha + Real(20)));
}

/// Effective Hamiltonian with the given drives switched on, hbar = 1.
template <typename Real>
CMatrix<Real> build_heff(const PhysicalParams<Real>& p, const OracleSettings<Real>& settings,
                         DriveFlags drives = {true, true}, QubitBasis basis = QubitBasis::bare) {
  const int n = settings.cutoff;
  if (n < 4) throw CutoffTooSmall("build_heff: cutoff must be at least 4");
  using M = CMatrix<Real>;
  const Complex<Real> i_unit(0, 1);
  const M a = annihilation<Real>(n);
  const M ad = a.adjoint();
  const M num = ad * a;
  const M id_n = M::Identity(n, n);
  const M id_q = M::Identity(2, 2);
  M sx(2, 2), sp(2, 2), pe(2, 2);
  sx << 0, 1, 1, 0;
  sp << 0, 0, 1, 0;  // |e><g|
  pe << 0, 0, 0, 1;  // |e><e|

  const Real eta = p.eta();
  const Real omega1 = drives.omega1_on ? p.Omega1 : Real(0);
  const Real drive_sign = settings.drive == DrivePhase::minus_half_pi ? Real(-1) : Real(1);
  const Real omega2 = drives.omega2_on ? drive_sign * p.Omega2 : Real(0);
  const Real omega1_dressed = omega1 * (Real(1) - eta * eta / Real(2));

  M h;
  switch (settings.hamiltonian) {
    case OracleHamiltonian::block_diagonal: {
      const M sx_full = Eigen::kroneckerProduct(sx, id_n).eval();
      const M a_shift =
          (Eigen::kroneckerProduct(id_q, a) + i_unit * (omega2 * eta / p.omega) * sx_full).eval();
      const M freq = (p.omega * M::Identity(2 * n, 2 * n) - omega1 * eta * eta * sx_full).eval();
      h = omega1_dressed * sx_full + freq * (a_shift.adjoint() * a_shift);
      break;
    }
    case OracleHamiltonian::effective:
      h = p.omega * Eigen::kroneckerProduct(id_q, num) +
          omega1_dressed * Eigen::kroneckerProduct(sx, id_n) +
          i_unit * omega2 * eta * Eigen::kroneckerProduct(sx, (ad - a).eval()) -
          omega1 * eta * eta * Eigen::kroneckerProduct(sx, num);
      break;
    case OracleHamiltonian::full: {
      const M sm = sp.adjoint();
      h = p.omega * Eigen::kroneckerProduct(id_q, num) + omega1 * Eigen::kroneckerProduct(sx, id_n) +
          i_unit * omega2 * Eigen::kroneckerProduct((sp - sm).eval(), id_n) +
          p.g * Eigen::kroneckerProduct(pe, (a + ad).eval());
      break;
    }
  }

  if (basis == QubitBasis::dressed) {
    // Columns |+> = (|e> + |g>)/sqrt2 and |-> = (|e> - |g>)/sqrt2 in (g, e) order.
    const Real r = Real(1) / std::sqrt(Real(2));
    M v(2, 2);
    v << r, -r, r, r;
    const M big = Eigen::kroneckerProduct(v, id_n);
    h = big.adjoint() * h * big;
  }
  return h;
}

/// exp(-i H t) for Hermitian H.
template <typename Real>
CMatrix<Real> hermitian_propagator(const CMatrix<Real>& h, Real t) {
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> eig(h);
  CVector<Real> phases(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k) {
    phases(k) = std::polar(Real(1), -eig.eigenvalues()(k) * t);
  }
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

/// Probability carried by the top `levels` Fock states (both qubit states).
template <typename Real>
Real leakage(const FockStateVector<Real>& state, int levels) {
  const int n = state.cutoff;
  Real total(0);
  for (int q = 0; q < 2; ++q)
    for (int k = std::max(0, n - levels); k < n; ++k) total += std::norm(state.amplitudes(q * n + k));
  return total;
}

template <typename Real>
void check_leakage(const FockStateVector<Real>& state, const OracleSettings<Real>& settings,
                   const char* where) {
  const Real leak = leakage(state, settings.leakage_levels);
  if (leak >= settings.leakage_tolerance) {
    throw CutoffTooSmall(std::string(where) + ": probability " + std::to_string(double(leak)) +
                         " in the top Fock levels; increase the cutoff");
  }
}

template <typename Real>
FockStateVector<Real> evolve(const FockStateVector<Real>& state, const PulseSchedule<Real>& schedule,
                             const PhysicalParams<Real>& p, const OracleSettings<Real>& settings) {
  if (state.cutoff != settings.cutoff) throw std::invalid_argument("evolve: cutoff mismatch");
  std::map<std::tuple<DriveFlags, Real>, CMatrix<Real>> cache;
  FockStateVector<Real> out = state;
  for (const auto& seg : schedule.segments) {
    if (seg.duration < 0) throw std::invalid_argument("evolve: negative segment duration");
    if (seg.duration == 0) continue;
    const auto key = std::make_tuple(seg.drives, seg.duration);
    auto it = cache.find(key);
    if (it == cache.end()) {
      const auto h = build_heff(p, settings, seg.drives);
      it = cache.emplace(key, hermitian_propagator<Real>(h, seg.duration / p.omega)).first;
    }
    out.amplitudes = it->second * out.amplitudes;
    check_leakage(out, settings, "evolve");
  }
  return out;
}

/// e^{-|alpha|^2/2} alpha^k / sqrt(k!) for k < cutoff.
template <typename Real>
CVector<Real> coherent_fock(Complex<Real> alpha, int cutoff) {
  CVector<Real> v(cutoff);
  v(0) = std::exp(-std::norm(alpha) / Real(2));
  for (int k = 1; k < cutoff; ++k) v(k) = v(k - 1) * alpha / std::sqrt(Real(k));
  return v;
}

/// Fock expansion of a closed-form superposition.
template <typename Real>
CVector<Real> to_fock(const SuperposedState<Real>& state, int cutoff,
                      Real leakage_tolerance = Real(1e-8)) {
  CVector<Real> v = CVector<Real>::Zero(cutoff);
  for (const auto& c : state.components) {
    const CVector<Real> ket = coherent_fock(c.label.amplitude, cutoff);
    const Real lost = Real(1) - ket.squaredNorm();
    if (lost > leakage_tolerance) {
      throw CutoffTooSmall("to_fock: coherent component leaks " + std::to_string(double(lost)) +
                           " past the cutoff");
    }
    v += c.coefficient * std::polar(Real(1), c.label.phase) * ket;
  }
  return v;
}

template <typename Real>
FockStateVector<Real> product_state(QubitOutcome qubit, const CVector<Real>& oscillator) {
  const int n = static_cast<int>(oscillator.size());
  FockStateVector<Real> s;
  s.cutoff = n;
  s.amplitudes = CVector<Real>::Zero(2 * n);
  s.amplitudes.segment(qubit == QubitOutcome::ground ? 0 : n, n) = oscillator;
  return s;
}

template <typename Real = double>
struct ExtractedOscillator {
  Real probability{};
  CVector<Real> oscillator;
};

template <typename Real>
ExtractedOscillator<Real> project_and_extract(const FockStateVector<Real>& state,
                                              QubitOutcome outcome) {
  const int n = state.cutoff;
  const CVector<Real> part = state.amplitudes.segment(outcome == QubitOutcome::ground ? 0 : n, n);
  ExtractedOscillator<Real> out;
  out.probability = part.squaredNorm();
  if (out.probability < Real(1e-14)) {
    throw ZeroProbabilityOutcome(std::string("project_and_extract: '") + to_string(outcome) +
                                 "' has probability " + std::to_string(double(out.probability)));
  }
  out.oscillator = part / std::sqrt(out.probability);
  return out;
}

/// |<closed|fock>|^2 with both sides normalized.
template <typename Real>
Real fidelity(const CVector<Real>& fock, const SuperposedState<Real>& closed,
              Real leakage_tolerance = Real(1e-8)) {
  const CVector<Real> c = to_fock(closed, static_cast<int>(fock.size()), leakage_tolerance);
  return std::norm(c.dot(fock)) / (c.squaredNorm() * fock.squaredNorm());
}

template <typename Real = double>
struct OracleRun {
  CVector<Real> oscillator;
  std::vector<Real> step_probabilities;
  Real record_probability{1};
};

namespace detail {

template <typename Real>
void require_cutoff(const OracleSettings<Real>& settings, Real max_alpha) {
  if (settings.cutoff < minimum_cutoff(max_alpha)) {
    throw CutoffTooSmall("cutoff " + std::to_string(settings.cutoff) + " below the required " +
                         std::to_string(minimum_cutoff(max_alpha)));
  }
}

}  // namespace detail

/// n pulse pairs from |g>|alpha0>, detecting |g> after every pair.
template <typename Real>
OracleRun<Real> run_walk_oracle(const PhysicalParams<Real>& p, int n, Complex<Real> alpha0,
                                const OracleSettings<Real>& settings = {}) {
  if (n < 0) throw std::invalid_argument("run_walk_oracle: n must be >= 0");
  const Real l1 = p.Omega2 * p.eta() / p.omega;
  detail::require_cutoff(settings, std::abs(alpha0) + Real(2) * Real(n) * l1);
  const auto schedule = PulseSchedule<Real>::walk_cycle();
  OracleRun<Real> run;
  run.oscillator = coherent_fock(alpha0, settings.cutoff);
  for (int step = 0; step < n; ++step) {
    const auto evolved =
        evolve(product_state(QubitOutcome::ground, run.oscillator), schedule, p, settings);
    const auto got = project_and_extract(evolved, QubitOutcome::ground);
    run.oscillator = got.oscillator;
    run.step_probabilities.push_back(got.probability);
    run.record_probability *= got.probability;
  }
  return run;
}

/// n mechanical periods with the strong drive held on, one final detection.
template <typename Real>
OracleRun<Real> run_cat_oracle(const PhysicalParams<Real>& p, int n, Complex<Real> beta0,
                               QubitOutcome outcome = QubitOutcome::ground,
                               const OracleSettings<Real>& settings = {}) {
  if (n < 1) throw std::invalid_argument("run_cat_oracle: n must be >= 1");
  const Real l1 = p.Omega2 * p.eta() / p.omega;
  detail::require_cutoff(settings, std::abs(beta0) + Real(2) * Real(n) * l1);
  const auto schedule = PulseSchedule<Real>::cat_cycle().repeated(n);
  const auto evolved = evolve(
      product_state(QubitOutcome::ground, coherent_fock(beta0, settings.cutoff)), schedule, p,
      settings);
  const auto got = project_and_extract(evolved, outcome);
  OracleRun<Real> run;
  run.oscillator = got.oscillator;
  run.step_probabilities = {got.probability};
  run.record_probability = got.probability;
  return run;
}

/// Truncated D(beta) = exp(beta a^dag - conj(beta) a).
template <typename Real>
CMatrix<Real> displacement_matrix(Complex<Real> beta, int cutoff) {
  const CMatrix<Real> a = annihilation<Real>(cutoff);
  const Complex<Real> i_unit(0, 1);
  // exp(K) with K anti-Hermitian equals exp(-i H) for H = i K.
  const CMatrix<Real> h = i_unit * (beta * a.adjoint() - std::conj(beta) * a);
  return hermitian_propagator<Real>(h, Real(1));
}

/// Truncated O(sign l1, sign l2) = D(i s l1) e^{-i s l2 pi a^dag a} D(i s l1).
template <typename Real>
CMatrix<Real> pulse_operator_matrix(const PulseOperatorSpec<Real>& spec, int cutoff) {
  const Real s = static_cast<Real>(spec.sign());
  const CMatrix<Real> d = displacement_matrix(Complex<Real>(0, s * spec.l1()), cutoff);
  CVector<Real> turn(cutoff);
  for (int k = 0; k < cutoff; ++k) {
    turn(k) = std::polar(Real(1), -s * spec.l2() * std::numbers::pi_v<Real> * Real(k));
  }
  return d * turn.asDiagonal() * d;
}

}  // namespace mesocat

#endif  // MESOCAT_FOCK_ORACLE_HPP
