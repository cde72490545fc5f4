// Test-only helpers: parameter sets and a small truncated-Fock toolkit built
// directly from matrix exponentials, independent of the library's oracle.
#ifndef MESOCAT_TESTS_SUPPORT_HPP
#define MESOCAT_TESTS_SUPPORT_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "mesocat/mesocat.hpp"

namespace testing {

using cd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr double pi = std::numbers::pi;

/// l1 = 0.1, l2 = 0.01, phi = 9 pi / 2, alpha0 = 0.
inline mesocat::ProtocolParams<double> fig2(int n, double xi = 0.0, double phi = 4.5 * pi) {
  mesocat::ProtocolParams<double> pp;
  pp.l1 = 0.1;
  pp.l2 = 0.01;
  pp.phi = mesocat::reduce_angle(phi);
  pp.n = n;
  pp.xi = xi;
  return pp;
}

inline CMat lower(int n) {
  CMat a = CMat::Zero(n, n);
  for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(double(k));
  return a;
}

/// exp(beta a^dag - conj(beta) a) by Pade scaling-and-squaring.
inline CMat displacement(cd beta, int n) {
  const CMat a = lower(n);
  const CMat k = beta * a.adjoint() - std::conj(beta) * a;
  return k.exp();
}

inline CMat free_rotation(double theta, int n) {
  CVec d(n);
  for (int k = 0; k < n; ++k) d(k) = std::polar(1.0, -theta * k);
  return d.asDiagonal();
}

inline CMat pulse(double l1, double l2, int sign, int n) {
  const CMat d = displacement(cd(0, sign * l1), n);
  return d * free_rotation(sign * l2 * pi, n) * d;
}

inline CVec vacuum(int n) {
  CVec v = CVec::Zero(n);
  v(0) = 1;
  return v;
}

/// e^{i phase}|alpha> as D(alpha)|0>.
inline CVec ket(const mesocat::CoherentLabel<double>& l, int n) {
  return std::polar(1.0, l.phase) * (displacement(l.amplitude, n) * vacuum(n));
}

inline CVec ket(const mesocat::SuperposedState<double>& s, int n) {
  CVec v = CVec::Zero(n);
  for (const auto& c : s.components) v += c.coefficient * ket(c.label, n);
  return v;
}

/// Dense operator sum_jk W_jk |l_j><l_k|.
inline CMat density(const mesocat::DyadEnsemble<double>& rho, int n) {
  CMat kets(n, rho.size());
  for (Eigen::Index j = 0; j < rho.size(); ++j) kets.col(j) = ket(rho.labels[std::size_t(j)], n);
  return kets * rho.weights * kets.adjoint();
}

inline double trace_norm_half(const CMat& m) {
  const CMat h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMat> eig(h, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().sum() / 2.0;
}

inline std::mt19937_64 rng(std::uint64_t seed = 20240611) { return std::mt19937_64(seed); }

inline cd random_amplitude(std::mt19937_64& gen, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  return {u(gen), u(gen)};
}

}  // namespace testing

#endif  // MESOCAT_TESTS_SUPPORT_HPP
