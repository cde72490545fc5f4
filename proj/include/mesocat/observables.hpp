#ifndef MESOCAT_OBSERVABLES_HPP
#define MESOCAT_OBSERVABLES_HPP

// Position densities, Wigner functions and moments of coherent superpositions.
//
// The Wigner kernel of a dyad |alpha><beta| factorizes over x and p:
//   W(x, p) = <beta|alpha>/pi * exp(-(x - u/sqrt2)^2) * exp(-(p - i v/sqrt2)^2),
//   u = alpha + conj(beta), v = conj(beta) - alpha,
// so a whole grid is X diag(c) P^T with one column per dyad.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "mesocat/coherent.hpp"
#include "mesocat/decoherence.hpp"

namespace mesocat {

template <typename Real = double>
struct PhaseSpaceGrid {
  Real x_min{-6};
  Real x_max{6};
  Real p_min{-6};
  Real p_max{6};
  int nx{201};
  int np{201};

  void validate() const {
    if (!(x_min < x_max) || !(p_min < p_max)) {
      throw std::invalid_argument("PhaseSpaceGrid: empty extent");
    }
    if (nx < 2 || np < 2) throw std::invalid_argument("PhaseSpaceGrid: need at least 2 points per axis");
  }

  Real dx() const { return (x_max - x_min) / Real(nx - 1); }
  Real dp() const { return (p_max - p_min) / Real(np - 1); }
  Real x(int i) const { return x_min + Real(i) * dx(); }
  Real p(int k) const { return p_min + Real(k) * dp(); }

  RVector<Real> xs() const { return RVector<Real>::LinSpaced(nx, x_min, x_max); }
  RVector<Real> ps() const { return RVector<Real>::LinSpaced(np, p_min, p_max); }

  /// Same extent, spacing halved.
  PhaseSpaceGrid refined() const {
    auto g = *this;
    g.nx = 2 * nx - 1;
    g.np = 2 * np - 1;
    return g;
  }
};

/// [-6, 6]^2 at 201 x 201, widened so every label sits >= 3 units inside.
template <typename Real>
PhaseSpaceGrid<Real> default_grid_for(const std::vector<CoherentLabel<Real>>& labels) {
  PhaseSpaceGrid<Real> grid;
  const Real root2 = std::numbers::sqrt2_v<Real>;
  Real reach(0);
  for (const auto& l : labels) {
    reach = std::max({reach, std::abs(root2 * l.amplitude.real()),
                      std::abs(root2 * l.amplitude.imag())});
  }
  const Real half = std::max(Real(6), std::ceil(reach + Real(3)));
  grid.x_min = grid.p_min = -half;
  grid.x_max = grid.p_max = half;
  return grid;
}

enum class FieldKind { probability_density, wigner };

template <typename Real = double>
struct GridField {
  PhaseSpaceGrid<Real> grid;
  RMatrix<Real> values;  // nx x np for wigner, nx x 1 for densities
  FieldKind kind = FieldKind::wigner;
  Real max_imag_residue{0};

  Real integral() const {
    const Real cell = kind == FieldKind::wigner ? grid.dx() * grid.dp() : grid.dx();
    return values.sum() * cell;
  }
};

/// <x|alpha> = pi^{-1/4} exp[-(x - sqrt2 Re a)^2/2 + i sqrt2 Im(a) x - i Re(a) Im(a)].
template <typename Real>
Complex<Real> coherent_wavefunction(Complex<Real> alpha, Real x) {
  const Real root2 = std::numbers::sqrt2_v<Real>;
  const Real re = alpha.real();
  const Real im = alpha.imag();
  const Real shift = x - root2 * re;
  return std::pow(std::numbers::pi_v<Real>, Real(-0.25)) *
         std::exp(Complex<Real>(-shift * shift / Real(2), root2 * im * x - re * im));
}

/// Column j holds <x_i|l_j>, label phase included.
template <typename Real>
CMatrix<Real> wavefunction_matrix(const std::vector<CoherentLabel<Real>>& labels,
                                  const RVector<Real>& xs) {
  CMatrix<Real> psi(xs.size(), static_cast<Eigen::Index>(labels.size()));
  for (Eigen::Index j = 0; j < psi.cols(); ++j) {
    const auto& l = labels[static_cast<std::size_t>(j)];
    const Complex<Real> phase = std::polar(Real(1), l.phase);
    for (Eigen::Index i = 0; i < xs.size(); ++i) {
      psi(i, j) = phase * coherent_wavefunction(l.amplitude, xs(i));
    }
  }
  return psi;
}

template <typename Real>
GridField<Real> position_density(const DyadEnsemble<Real>& rho, const PhaseSpaceGrid<Real>& grid) {
  grid.validate();
  const CMatrix<Real> psi = wavefunction_matrix(rho.labels, grid.xs());
  const CMatrix<Real> pw = psi * rho.weights;
  GridField<Real> out;
  out.grid = grid;
  out.kind = FieldKind::probability_density;
  out.values = pw.cwiseProduct(psi.conjugate()).rowwise().sum().real();
  return out;
}

template <typename Real>
GridField<Real> position_density(const SuperposedState<Real>& state,
                                 const PhaseSpaceGrid<Real>& grid) {
  grid.validate();
  const CVector<Real> amp = wavefunction_matrix(state.labels(), grid.xs()) * state.coefficients();
  GridField<Real> out;
  out.grid = grid;
  out.kind = FieldKind::probability_density;
  out.values = amp.cwiseAbs2();
  return out;
}

/// Wigner function of |alpha><beta| at a single point.
template <typename Real>
Complex<Real> dyad_wigner(Complex<Real> alpha, Complex<Real> beta, Real x, Real p) {
  const Real root2 = std::numbers::sqrt2_v<Real>;
  const Complex<Real> u = alpha + std::conj(beta);
  const Complex<Real> v = std::conj(beta) - alpha;
  const Complex<Real> ov = overlap(CoherentLabel<Real>{beta, 0}, CoherentLabel<Real>{alpha, 0});
  const Complex<Real> ex = Complex<Real>(x) - u / root2;
  const Complex<Real> ep = Complex<Real>(p) - Complex<Real>(0, 1) * v / root2;
  return ov / std::numbers::pi_v<Real> * std::exp(-ex * ex - ep * ep);
}

/// Complex Wigner grid of a dyad ensemble (its imaginary part is round-off).
template <typename Real>
CMatrix<Real> wigner_grid(const DyadEnsemble<Real>& rho, const PhaseSpaceGrid<Real>& grid) {
  grid.validate();
  const Real root2 = std::numbers::sqrt2_v<Real>;
  const Eigen::Index l = rho.size();
  const Eigen::Index d = l * l;
  const CMatrix<Real> gram = gram_matrix(rho.labels);
  const RVector<Real> xs = grid.xs();
  const RVector<Real> ps = grid.ps();

  CMatrix<Real> xf(xs.size(), d);
  CMatrix<Real> pf(ps.size(), d);
  CVector<Real> coef(d);
  const Complex<Real> i_unit(0, 1);
  for (Eigen::Index j = 0; j < l; ++j) {
    for (Eigen::Index k = 0; k < l; ++k) {
      const Eigen::Index col = j * l + k;
      const Complex<Real> a = rho.labels[static_cast<std::size_t>(j)].amplitude;
      const Complex<Real> b = rho.labels[static_cast<std::size_t>(k)].amplitude;
      const Complex<Real> xc = (a + std::conj(b)) / root2;
      const Complex<Real> pc = i_unit * (std::conj(b) - a) / root2;
      coef(col) = rho.weights(j, k) * gram(k, j) / std::numbers::pi_v<Real>;
      for (Eigen::Index i = 0; i < xs.size(); ++i) {
        const Complex<Real> e = Complex<Real>(xs(i)) - xc;
        xf(i, col) = std::exp(-e * e);
      }
      for (Eigen::Index i = 0; i < ps.size(); ++i) {
        const Complex<Real> e = Complex<Real>(ps(i)) - pc;
        pf(i, col) = std::exp(-e * e);
      }
    }
  }
  return (xf * coef.asDiagonal()) * pf.transpose();
}

template <typename Real>
GridField<Real> wigner_mixed(const DyadEnsemble<Real>& rho, const PhaseSpaceGrid<Real>& grid) {
  const CMatrix<Real> w = wigner_grid(rho, grid);
  GridField<Real> out;
  out.grid = grid;
  out.kind = FieldKind::wigner;
  out.values = w.real();
  out.max_imag_residue = w.imag().cwiseAbs().maxCoeff();
  return out;
}

template <typename Real>
GridField<Real> wigner_pure(const SuperposedState<Real>& state, const PhaseSpaceGrid<Real>& grid) {
  return wigner_mixed(pure_ensemble(state), grid);
}

/// Integral over p of a Wigner field, as a density on the x axis.
template <typename Real>
GridField<Real> marginal_x(const GridField<Real>& wigner) {
  GridField<Real> out;
  out.grid = wigner.grid;
  out.kind = FieldKind::probability_density;
  out.values = wigner.values.rowwise().sum() * wigner.grid.dp();
  return out;
}

/// Integral of max(0, -W) over the grid.
template <typename Real>
Real negativity_volume(const GridField<Real>& wigner) {
  return (-wigner.values).cwiseMax(Real(0)).sum() * wigner.grid.dx() * wigner.grid.dp();
}

template <typename Real = double>
struct Moments {
  Real mean_x{};
  Real mean_p{};
  Real var_x{};
  Real var_p{};
};

/// Quadrature moments from <l_k|X|l_j> in closed form.
template <typename Real>
Moments<Real> moments(const DyadEnsemble<Real>& rho) {
  const Real root2 = std::numbers::sqrt2_v<Real>;
  const CMatrix<Real> gram = gram_matrix(rho.labels);
  Complex<Real> tr(0), x1(0), x2(0), p1(0), p2(0);
  const Complex<Real> i_unit(0, 1);
  for (Eigen::Index j = 0; j < rho.size(); ++j) {
    for (Eigen::Index k = 0; k < rho.size(); ++k) {
      const Complex<Real> a = rho.labels[static_cast<std::size_t>(j)].amplitude;
      const Complex<Real> bc = std::conj(rho.labels[static_cast<std::size_t>(k)].amplitude);
      const Complex<Real> w = rho.weights(j, k) * gram(k, j);
      tr += w;
      x1 += w * (a + bc) / root2;
      p1 += w * (a - bc) / (i_unit * root2);
      x2 += w * (a * a + bc * bc + Real(2) * bc * a + Real(1)) / Real(2);
      p2 += w * (-a * a - bc * bc + Real(2) * bc * a + Real(1)) / Real(2);
    }
  }
  const Real t = std::real(tr);
  Moments<Real> m;
  m.mean_x = std::real(x1) / t;
  m.mean_p = std::real(p1) / t;
  m.var_x = std::real(x2) / t - m.mean_x * m.mean_x;
  m.var_p = std::real(p2) / t - m.mean_p * m.mean_p;
  return m;
}

template <typename Real>
Moments<Real> moments(const SuperposedState<Real>& state) {
  return moments(pure_ensemble(state));
}

template <typename Real = double>
struct Diagnostics {
  Real mean_x{};
  Real mean_p{};
  Real var_x{};
  Real var_p{};
  Real negativity_volume{};
  Real min_W{};
  std::vector<std::string> warnings;
};

template <typename Real>
Diagnostics<Real> diagnostics(const DyadEnsemble<Real>& rho, const PhaseSpaceGrid<Real>& grid) {
  const auto m = moments(rho);
  const auto w = wigner_mixed(rho, grid);
  Diagnostics<Real> d;
  d.mean_x = m.mean_x;
  d.mean_p = m.mean_p;
  d.var_x = m.var_x;
  d.var_p = m.var_p;
  d.negativity_volume = negativity_volume(w);
  d.min_W = w.values.minCoeff();

  const Real fine = negativity_volume(wigner_mixed(rho, grid.refined()));
  const Real scale = std::max(d.negativity_volume, fine);
  if (scale > Real(1e-12) && std::abs(fine - d.negativity_volume) > Real(0.05) * scale) {
    d.warnings.push_back("GridTooCoarse: negativity volume changes by more than 5% under 2x refinement");
  }
  return d;
}

template <typename Real>
Diagnostics<Real> diagnostics(const SuperposedState<Real>& state, const PhaseSpaceGrid<Real>& grid) {
  return diagnostics(pure_ensemble(state), grid);
}

}  // namespace mesocat

#endif  // MESOCAT_OBSERVABLES_HPP
