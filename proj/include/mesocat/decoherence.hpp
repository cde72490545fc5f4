#ifndef MESOCAT_DECOHERENCE_HPP
#define MESOCAT_DECOHERENCE_HPP

// Density matrices as finite sums of coherent dyads,
//   rho = sum_{jk} W(j, k) |l_j><l_k|,
// and the per-pulse dephasing recursion driven by the dressed-qubit decay.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "mesocat/coherent.hpp"
#include "mesocat/protocol.hpp"

namespace mesocat {

enum class LabelFamily { general, walk, cat };

template <typename Real = double>
struct DyadEnsemble {
  /// Walk-ladder index j of each label (row/column m holds j = steps - 2m for
  /// walk ensembles; informational otherwise).
  std::vector<int> index;
  std::vector<CoherentLabel<Real>> labels;
  CMatrix<Real> weights;
  LabelFamily family = LabelFamily::general;
  int steps = 0;

  Eigen::Index size() const { return weights.rows(); }

  /// Number of structurally present (non-zero) dyads.
  Eigen::Index entry_count() const {
    Eigen::Index count = 0;
    for (Eigen::Index j = 0; j < weights.rows(); ++j)
      for (Eigen::Index k = 0; k < weights.cols(); ++k)
        if (weights(j, k) != Complex<Real>(0)) ++count;
    return count;
  }
};

/// |psi><psi| for a superposition.
template <typename Real>
DyadEnsemble<Real> pure_ensemble(const SuperposedState<Real>& state) {
  DyadEnsemble<Real> rho;
  rho.labels = state.labels();
  const CVector<Real> c = state.coefficients();
  rho.weights = c * c.adjoint();
  rho.index.resize(rho.labels.size());
  for (std::size_t i = 0; i < rho.index.size(); ++i) rho.index[i] = static_cast<int>(i);
  return rho;
}

/// Tr(rho) = sum_{jk} W(j, k) <l_k|l_j>.
template <typename Real>
Complex<Real> trace(const DyadEnsemble<Real>& rho) {
  return (rho.weights * gram_matrix(rho.labels)).trace();
}

template <typename Real>
DyadEnsemble<Real> normalized(DyadEnsemble<Real> rho) {
  const Real tr = std::real(trace(rho));
  if (!(tr > Real(1e-14))) throw DegenerateState("DyadEnsemble has vanishing trace");
  rho.weights /= tr;
  return rho;
}

/// |alpha0><alpha0| as the zero-step walk ensemble.
template <typename Real>
DyadEnsemble<Real> walk_initial(const ProtocolParams<Real>& pp) {
  DyadEnsemble<Real> rho;
  rho.index = {0};
  rho.labels = {CoherentLabel<Real>{pp.alpha0, Real(0)}};
  rho.weights = CMatrix<Real>::Ones(1, 1);
  rho.family = LabelFamily::walk;
  rho.steps = 0;
  return rho;
}

namespace detail {

template <typename Real>
void assign_walk_labels(DyadEnsemble<Real>& rho, const ProtocolParams<Real>& pp) {
  const LabelLadder<Real> ladder(pp.l1, pp.l2, pp.alpha0, rho.steps);
  rho.index.resize(static_cast<std::size_t>(rho.steps + 1));
  rho.labels.resize(static_cast<std::size_t>(rho.steps + 1));
  for (int m = 0; m <= rho.steps; ++m) {
    rho.index[static_cast<std::size_t>(m)] = rho.steps - 2 * m;
    rho.labels[static_cast<std::size_t>(m)] = ladder.at(rho.steps - 2 * m);
  }
}

}  // namespace detail

/// One pulse pair of
///   rho' = C [ O+ rho O+^dag + O- rho O-^dag
///            + e^{2i phi} e^{-xi} O+ rho O-^dag + e^{-2i phi} e^{-xi} O- rho O+^dag ],
/// with O+ = O(l1, l2), O- = O(-l1, -l2) = O+^dag. O+ moves ladder index j to
/// j + 1 exactly, so dyads coalesce on the integer index: in row/column
/// numbering m = (steps - j)/2, O+ keeps m and O- shifts it by one.
template <typename Real>
DyadEnsemble<Real> evolve_dyads(const DyadEnsemble<Real>& rho, const ProtocolParams<Real>& pp) {
  pp.validate();
  if (rho.family != LabelFamily::walk || rho.size() != rho.steps + 1) {
    throw std::invalid_argument("evolve_dyads: ensemble is not on a walk ladder");
  }
  const Eigen::Index n = rho.size();
  const Complex<Real> cross = std::polar(std::exp(-pp.xi), Real(2) * pp.phi);

  DyadEnsemble<Real> out;
  out.family = LabelFamily::walk;
  out.steps = rho.steps + 1;
  out.weights = CMatrix<Real>::Zero(n + 1, n + 1);
  out.weights.topLeftCorner(n, n) += rho.weights;
  out.weights.bottomRightCorner(n, n) += rho.weights;
  out.weights.topRightCorner(n, n) += cross * rho.weights;
  out.weights.bottomLeftCorner(n, n) += std::conj(cross) * rho.weights;
  out.weights = (out.weights + out.weights.adjoint().eval()) / Real(2);
  detail::assign_walk_labels(out, pp);
  return normalized(out);
}

/// n steps of evolve_dyads from |alpha0><alpha0|. Weights grow like the
/// inverse record probability, so the recursion runs in the accumulation type
/// and rounds once.
template <typename Real>
DyadEnsemble<Real> decohered_walk(const ProtocolParams<Real>& pp) {
  using Wide = detail::accumulate_t<Real>;
  pp.validate();
  ProtocolParams<Wide> wide;
  wide.l1 = pp.l1;
  wide.l2 = pp.l2;
  wide.phi = pp.phi;
  wide.n = pp.n;
  wide.xi = pp.xi;
  wide.alpha0 = Complex<Wide>(pp.alpha0);
  auto rho = walk_initial(wide);
  for (int step = 0; step < pp.n; ++step) rho = evolve_dyads(rho, wide);

  DyadEnsemble<Real> out;
  out.family = LabelFamily::walk;
  out.steps = pp.n;
  out.weights = rho.weights.template cast<Complex<Real>>();
  detail::assign_walk_labels(out, pp);
  return out;
}

/// The pure walk state written on the same ladder labels as decohered_walk.
template <typename Real>
DyadEnsemble<Real> walk_projector(const ProtocolParams<Real>& pp) {
  auto rho = pure_ensemble(walk_state(pp));
  rho.family = LabelFamily::walk;
  rho.steps = pp.n;
  rho.index.resize(rho.labels.size());
  for (int m = 0; m <= pp.n; ++m) rho.index[static_cast<std::size_t>(m)] = pp.n - 2 * m;
  return rho;
}


namespace detail {

/// Number-basis columns e^{i phase}|alpha> truncated where the Poisson tail
/// of every label is negligible. Coherent labels that crowd together make
/// the Gram matrix nearly singular, so spectra are taken in this orthonormal
/// frame rather than through G^{1/2} W G^{1/2}.
template <typename Real>
CMatrix<Real> number_frame(const std::vector<CoherentLabel<Real>>& labels) {
  Real reach(0);
  for (const auto& l : labels) reach = std::max(reach, std::abs(l.amplitude));
  const auto cutoff = static_cast<Eigen::Index>(std::ceil(Real(4) * reach * reach + Real(10) * reach + Real(40)));
  CMatrix<Real> k(cutoff, static_cast<Eigen::Index>(labels.size()));
  for (Eigen::Index j = 0; j < k.cols(); ++j) {
    const auto& l = labels[static_cast<std::size_t>(j)];
    k(0, j) = std::polar(std::exp(-std::norm(l.amplitude) / Real(2)), l.phase);
    for (Eigen::Index m = 1; m < cutoff; ++m) k(m, j) = k(m - 1, j) * l.amplitude / std::sqrt(Real(m));
  }
  return k;
}

template <typename Real>
RVector<Real> hermitian_spectrum(const CMatrix<Real>& m) {
  const CMatrix<Real> herm = (m + m.adjoint()) / Real(2);
  return Eigen::SelfAdjointEigenSolver<CMatrix<Real>>(herm, Eigen::EigenvaluesOnly).eigenvalues();
}

}  // namespace detail

/// Tr(rho^2), i.e. Tr(W G W G), evaluated as the squared Frobenius norm of
/// rho in the number frame; the Gram form loses several digits for long walks.
template <typename Real>
Real purity(const DyadEnsemble<Real>& rho) {
  const CMatrix<Real> k = detail::number_frame(rho.labels);
  return (k * rho.weights * k.adjoint()).squaredNorm();
}

/// Eigenvalues of rho as an operator, including zeros from the truncated frame.
template <typename Real>
RVector<Real> operator_spectrum(const DyadEnsemble<Real>& rho) {
  const CMatrix<Real> k = detail::number_frame(rho.labels);
  return detail::hermitian_spectrum<Real>(k * rho.weights * k.adjoint());
}

template <typename Real>
Real trace_distance(const DyadEnsemble<Real>& a, const DyadEnsemble<Real>& b) {
  std::vector<CoherentLabel<Real>> all = a.labels;
  all.insert(all.end(), b.labels.begin(), b.labels.end());
  const CMatrix<Real> k = detail::number_frame(all);
  const Eigen::Index na = a.size();
  const CMatrix<Real> ka = k.leftCols(na);
  const CMatrix<Real> kb = k.rightCols(b.size());
  const CMatrix<Real> diff = ka * a.weights * ka.adjoint() - kb * b.weights * kb.adjoint();
  return detail::hermitian_spectrum(diff).cwiseAbs().sum() / Real(2);
}

template <typename Real>
Real hermiticity_error(const DyadEnsemble<Real>& rho) {
  return (rho.weights - rho.weights.adjoint()).cwiseAbs().maxCoeff();
}

/// sum_{j != k} |W(j, k) <l_k|l_j>|.
template <typename Real>
Real cross_weight(const DyadEnsemble<Real>& rho) {
  const CMatrix<Real> g = gram_matrix(rho.labels);
  Real total(0);
  for (Eigen::Index j = 0; j < rho.size(); ++j)
    for (Eigen::Index k = 0; k < rho.size(); ++k)
      if (j != k) total += std::abs(rho.weights(j, k) * g(k, j));
  return total;
}

/// |W(j, k)| / sqrt(W(j, j) W(k, k)).
template <typename Real>
Real coherence(const DyadEnsemble<Real>& rho, Eigen::Index j, Eigen::Index k) {
  return std::abs(rho.weights(j, k)) /
         std::sqrt(std::real(rho.weights(j, j)) * std::real(rho.weights(k, k)));
}

/// Dressed-state coherence factor after time t: exp(-3 Gamma t / 4).
template <typename Real>
Real qubit_coherence_decay(Real t, Real Gamma) {
  if (t < 0 || Gamma < 0) throw std::invalid_argument("qubit_coherence_decay: t, Gamma >= 0");
  return std::exp(-Real(3) * Gamma * t / Real(4));
}

/// Per-pulse exponent xi = 3 Gamma T / 8 (decay over the driven half period).
template <typename Real>
Real per_pulse_exponent(Real Gamma, Real period) {
  return -std::log(qubit_coherence_decay(period / Real(2), Gamma));
}

/// Cat state with its single cross dyad suppressed by e^{-suppression}.
template <typename Real>
DyadEnsemble<Real> cat_ensemble(const ProtocolParams<Real>& pp, Real suppression,
                                QubitOutcome outcome = QubitOutcome::ground) {
  if (suppression < 0) throw std::invalid_argument("cat_ensemble: suppression must be >= 0");
  auto rho = pure_ensemble(cat_state(pp, outcome));
  rho.family = LabelFamily::cat;
  rho.steps = pp.n;
  rho.index = {-pp.n, pp.n};
  const Real damp = std::exp(-suppression);
  rho.weights(0, 1) *= damp;
  rho.weights(1, 0) *= damp;
  return normalized(rho);
}

/// Cat ensemble with the total exponent 3 n Gamma T / 4 = 2 n xi.
template <typename Real>
DyadEnsemble<Real> cat_ensemble(const ProtocolParams<Real>& pp,
                                QubitOutcome outcome = QubitOutcome::ground) {
  return cat_ensemble(pp, Real(2) * Real(pp.n) * pp.xi, outcome);
}

}  // namespace mesocat

#endif  // MESOCAT_DECOHERENCE_HPP
