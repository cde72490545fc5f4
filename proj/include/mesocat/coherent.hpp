#ifndef MESOCAT_COHERENT_HPP
#define MESOCAT_COHERENT_HPP

// Closed-form algebra of coherent states.
//
// Conventions: hbar = 1, x = (a + a^dag)/sqrt(2), p = (a - a^dag)/(i sqrt(2)).
// A CoherentLabel {alpha, phase} stands for the ket e^{i phase} |alpha>, where
// |alpha> = e^{-|alpha|^2/2} sum_n alpha^n / sqrt(n!) |n>.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "mesocat/errors.hpp"

namespace mesocat {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using CMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using CVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Reduces an angle to (-pi, pi].
template <typename Real>
Real wrap_phase(Real angle) {
  constexpr Real pi = std::numbers::pi_v<Real>;
  Real r = std::remainder(angle, Real(2) * pi);
  if (r <= -pi) r += Real(2) * pi;
  return r;
}

template <typename Real = double>
struct CoherentLabel {
  Complex<Real> amplitude{};
  Real phase{};

  friend bool operator==(const CoherentLabel&, const CoherentLabel&) = default;
};

/// D(beta) e^{i phase}|alpha> = e^{i(phase + Im(beta conj(alpha)))} |alpha + beta>.
template <typename Real>
CoherentLabel<Real> displace(const CoherentLabel<Real>& state, Complex<Real> beta) {
  const Real extra = std::imag(beta * std::conj(state.amplitude));
  return {state.amplitude + beta, wrap_phase(state.phase + extra)};
}

/// Free rotation e^{-i theta a^dag a}.
template <typename Real>
CoherentLabel<Real> rotate(const CoherentLabel<Real>& state, Real theta) {
  return {state.amplitude * std::polar(Real(1), -theta), state.phase};
}

/// <a|b> including the carried phases.
template <typename Real>
Complex<Real> overlap(const CoherentLabel<Real>& a, const CoherentLabel<Real>& b) {
  const Complex<Real> alpha = a.amplitude;
  const Complex<Real> beta = b.amplitude;
  const Complex<Real> exponent = -std::norm(alpha) / Real(2) - std::norm(beta) / Real(2) +
                                 std::conj(alpha) * beta +
                                 Complex<Real>(0, b.phase - a.phase);
  return std::exp(exponent);
}

/// Selects O(l1, l2) (sign = +1) or O(-l1, -l2) (sign = -1), where
/// O(l1, l2) = D(i l1) e^{-i l2 pi a^dag a} D(i l1).
template <typename Real = double>
class PulseOperatorSpec {
 public:
  PulseOperatorSpec(Real l1, Real l2, int sign) : l1_(l1), l2_(l2), sign_(sign) {
    if (!(l1 >= 0) || !(l2 >= 0)) {
      throw std::invalid_argument("PulseOperatorSpec: l1 and l2 must be non-negative");
    }
    if (sign != 1 && sign != -1) {
      throw std::invalid_argument("PulseOperatorSpec: sign must be +1 or -1");
    }
  }

  Real l1() const { return l1_; }
  Real l2() const { return l2_; }
  int sign() const { return sign_; }

  PulseOperatorSpec inverse() const { return {l1_, l2_, -sign_}; }

 private:
  Real l1_;
  Real l2_;
  int sign_;
};

template <typename Real>
CoherentLabel<Real> apply_pulse_operator(const PulseOperatorSpec<Real>& spec,
                                         const CoherentLabel<Real>& state) {
  const Real s = static_cast<Real>(spec.sign());
  const Complex<Real> kick(0, s * spec.l1());
  const auto kicked = displace(state, kick);
  const auto turned = rotate(kicked, s * spec.l2() * std::numbers::pi_v<Real>);
  return displace(turned, kick);
}

/// Finite superposition sum_m c_m e^{i phase_m}|alpha_m>.
template <typename Real = double>
struct SuperposedState {
  struct Component {
    Complex<Real> coefficient{1};
    CoherentLabel<Real> label{};
  };

  std::vector<Component> components;
  bool normalized = false;

  std::size_t size() const { return components.size(); }

  std::vector<CoherentLabel<Real>> labels() const {
    std::vector<CoherentLabel<Real>> out;
    out.reserve(components.size());
    for (const auto& c : components) out.push_back(c.label);
    return out;
  }

  CVector<Real> coefficients() const {
    CVector<Real> out(static_cast<Eigen::Index>(components.size()));
    for (std::size_t i = 0; i < components.size(); ++i) {
      out(static_cast<Eigen::Index>(i)) = components[i].coefficient;
    }
    return out;
  }
};

/// G(j, k) = <label_j | label_k>. Hermitian positive semidefinite.
template <typename Real>
CMatrix<Real> gram_matrix(const std::vector<CoherentLabel<Real>>& labels) {
  const auto n = static_cast<Eigen::Index>(labels.size());
  CMatrix<Real> g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    g(j, j) = Complex<Real>(1);
    for (Eigen::Index k = j + 1; k < n; ++k) {
      g(j, k) = overlap(labels[j], labels[k]);
      g(k, j) = std::conj(g(j, k));
    }
  }
  return g;
}

template <typename Real>
CMatrix<Real> cross_gram(const std::vector<CoherentLabel<Real>>& bra,
                         const std::vector<CoherentLabel<Real>>& ket) {
  CMatrix<Real> g(static_cast<Eigen::Index>(bra.size()), static_cast<Eigen::Index>(ket.size()));
  for (Eigen::Index j = 0; j < g.rows(); ++j) {
    for (Eigen::Index k = 0; k < g.cols(); ++k) g(j, k) = overlap(bra[j], ket[k]);
  }
  return g;
}

namespace detail {

/// Walk superpositions carry coefficients far above one that cancel in
/// <psi|psi>; float and double contract them in long double.
template <typename Real>
using accumulate_t = std::conditional_t<(sizeof(Real) < sizeof(long double)), long double, Real>;

template <typename Wide, typename Real>
std::vector<CoherentLabel<Wide>> widen(const std::vector<CoherentLabel<Real>>& labels) {
  std::vector<CoherentLabel<Wide>> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back({Complex<Wide>(l.amplitude), Wide(l.phase)});
  return out;
}

}  // namespace detail

template <typename Real>
Complex<Real> inner_product(const SuperposedState<Real>& a, const SuperposedState<Real>& b) {
  using Wide = detail::accumulate_t<Real>;
  const CVector<Wide> ca = a.coefficients().template cast<Complex<Wide>>();
  const CVector<Wide> cb = b.coefficients().template cast<Complex<Wide>>();
  const CMatrix<Wide> g = cross_gram(detail::widen<Wide>(a.labels()), detail::widen<Wide>(b.labels()));
  return Complex<Real>(ca.dot(g * cb));
}

template <typename Real>
Real norm_squared(const SuperposedState<Real>& state) {
  return std::real(inner_product(state, state));
}

template <typename Real>
SuperposedState<Real> normalize(SuperposedState<Real> state) {
  if (state.components.empty()) {
    throw DegenerateState("normalize: superposition has no components");
  }
  const Real n2 = norm_squared(state);
  if (!(n2 > Real(1e-14))) {
    throw DegenerateState("normalize: components cancel (norm^2 = " + std::to_string(double(n2)) +
                          ")");
  }
  const Real scale = Real(1) / std::sqrt(n2);
  for (auto& c : state.components) c.coefficient *= scale;
  state.normalized = true;
  return state;
}

/// |<a|b>|^2 / (<a|a><b|b>).
template <typename Real>
Real fidelity(const SuperposedState<Real>& a, const SuperposedState<Real>& b) {
  return std::norm(inner_product(a, b)) / (norm_squared(a) * norm_squared(b));
}

template <typename Real>
SuperposedState<Real> apply_pulse_operator(const PulseOperatorSpec<Real>& spec,
                                           SuperposedState<Real> state) {
  for (auto& c : state.components) c.label = apply_pulse_operator(spec, c.label);
  return state;
}

template <typename Real>
SuperposedState<Real> scaled(SuperposedState<Real> state, Complex<Real> factor) {
  for (auto& c : state.components) c.coefficient *= factor;
  state.normalized = state.normalized && std::abs(std::abs(factor) - Real(1)) < Real(1e-15);
  return state;
}

/// a + b as a concatenated component list (not normalized).
template <typename Real>
SuperposedState<Real> superpose(const SuperposedState<Real>& a, const SuperposedState<Real>& b) {
  SuperposedState<Real> out;
  out.components.reserve(a.size() + b.size());
  out.components.insert(out.components.end(), a.components.begin(), a.components.end());
  out.components.insert(out.components.end(), b.components.begin(), b.components.end());
  return out;
}

/// Merges components whose amplitudes agree within `tol`; the later
/// component's label phase is folded into the surviving coefficient.
template <typename Real>
SuperposedState<Real> coalesce(const SuperposedState<Real>& state, Real tol = Real(1e-12)) {
  SuperposedState<Real> out;
  out.normalized = state.normalized;
  for (const auto& c : state.components) {
    bool merged = false;
    for (auto& kept : out.components) {
      if (std::abs(kept.label.amplitude - c.label.amplitude) <= tol) {
        kept.coefficient +=
            c.coefficient * std::polar(Real(1), c.label.phase - kept.label.phase);
        merged = true;
        break;
      }
    }
    if (!merged) out.components.push_back(c);
  }
  return out;
}

}  // namespace mesocat

#endif  // MESOCAT_COHERENT_HPP
