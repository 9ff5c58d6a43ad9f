#pragma once

// Steady state of the coherently driven, dissipative dimer in a truncated
// Fock space, used as an independent cross-check of the scattering results.
//
// The weak drive makes the steady-state density matrix extremely graded
// (two-photon coherences ~ Omega^4), so the null-space solve runs in
// complex<long double>; plain doubles lose the two-photon sector entirely
// at the drive strengths of interest.

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "photon_dimer/model.hpp"

namespace photon_dimer {

struct FockBasis {
  int n_max = 4;                               // total-excitation cutoff
  int dim = 0;                                 // (n_max+1)(n_max+2)/2
  std::vector<std::pair<int, int>> occupations;  // flat index -> (n1, n2)

  int index(int n1, int n2) const {
    // states ordered by total excitation, then by n1
    int n = n1 + n2;
    return n * (n + 1) / 2 + n1;
  }
};

inline FockBasis make_fock_basis(int n_max = 4) {
  if (n_max < 2) throw std::domain_error("n_max must be at least 2");
  FockBasis b;
  b.n_max = n_max;
  for (int n = 0; n <= n_max; ++n)
    for (int n1 = 0; n1 <= n; ++n1) b.occupations.push_back({n1, n - n1});
  b.dim = static_cast<int>(b.occupations.size());
  return b;
}

using ldcomplex = std::complex<long double>;
using MatrixXld = Eigen::Matrix<ldcomplex, Eigen::Dynamic, Eigen::Dynamic>;
using VectorXld = Eigen::Matrix<ldcomplex, Eigen::Dynamic, 1>;

namespace lindblad_detail {

inline MatrixXld annihilator(const FockBasis& b, int which) {
  MatrixXld a = MatrixXld::Zero(b.dim, b.dim);
  for (int i = 0; i < b.dim; ++i) {
    auto [n1, n2] = b.occupations[i];
    if (which == 1 && n1 > 0) a(b.index(n1 - 1, n2), i) = std::sqrt((long double)n1);
    if (which == 2 && n2 > 0) a(b.index(n1, n2 - 1), i) = std::sqrt((long double)n2);
  }
  return a;
}

inline MatrixXld kron(const MatrixXld& a, const MatrixXld& b) {
  MatrixXld out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace lindblad_detail

// Liouvillian of H = sum_j [detuning_j n_j + U_j n_j(n_j-1)] + J(a1+ a2 + h.c.)
// + Omega (a1 + a1+), with equal photon loss gamma on both cavities, acting on
// column-stacked density matrices. Probing total detuning delta means each
// cavity detuning is real(omega_j) - delta/2 in the drive frame.
inline MatrixXld build_liouvillian(const DimerParams& p, double delta, double omega_drive,
                                   double gamma, const FockBasis& basis) {
  using namespace lindblad_detail;
  const int d = basis.dim;
  if (static_cast<long long>(d) * d > 1024)  // superoperator would exceed ~1e6 entries
    throw std::domain_error("build_liouvillian: basis too large");
  const MatrixXld a1 = annihilator(basis, 1), a2 = annihilator(basis, 2);
  const MatrixXld n1 = a1.adjoint() * a1, n2 = a2.adjoint() * a2;
  const MatrixXld id = MatrixXld::Identity(d, d);

  MatrixXld h = (ldcomplex)(p.omega1.real() - 0.5 * delta) * n1 +
                (ldcomplex)(p.omega2.real() - 0.5 * delta) * n2 +
                (ldcomplex)p.u1 * n1 * (n1 - id) + (ldcomplex)p.u2 * n2 * (n2 - id) +
                (ldcomplex)p.j_hop * (a1.adjoint() * a2 + a2.adjoint() * a1) +
                (ldcomplex)omega_drive * (a1 + a1.adjoint());

  const ldcomplex im(0, 1);
  MatrixXld L = -im * (kron(id, h) - kron(h.transpose(), id));
  for (const MatrixXld* a : {&a1, &a2}) {
    MatrixXld ad_a = a->adjoint() * (*a);
    L += (ldcomplex)gamma * (kron(a->conjugate(), *a) - (ldcomplex)0.5 * kron(id, ad_a) -
                             (ldcomplex)0.5 * kron(ad_a.transpose(), id));
  }
  return L;
}

struct SteadyState {
  Eigen::MatrixXcd rho;
  double residual = 0;  // ||L vec(rho)||
};

// Null vector of L normalized to unit trace: the redundant row for the
// vacuum-vacuum component is replaced by the trace condition.
inline SteadyState steady_state(const MatrixXld& L, const FockBasis& basis) {
  const int d = basis.dim;
  const int n = d * d;
  if (L.rows() != n || L.cols() != n) throw std::invalid_argument("steady_state: size mismatch");
  MatrixXld a = L;
  const int row0 = basis.index(0, 0) * d + basis.index(0, 0);
  a.row(row0).setZero();
  for (int i = 0; i < d; ++i) a(row0, i * d + i) = 1;
  VectorXld rhs = VectorXld::Zero(n);
  rhs(row0) = 1;
  Eigen::PartialPivLU<MatrixXld> lu(a);
  VectorXld v = lu.solve(rhs);
  // one step of iterative refinement
  v += lu.solve(rhs - a * v);

  VectorXld lres = L * v;
  lres(row0) = 0;  // replaced equation is implied by trace preservation
  SteadyState out;
  out.residual = static_cast<double>(lres.norm());
  out.rho.resize(d, d);
  ldcomplex tr = 0;
  for (int i = 0; i < d; ++i) tr += v(i * d + i);
  if (std::abs(tr) < 1e-300) throw std::domain_error("steady_state: non-unique steady state");
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i)
      out.rho(i, j) = static_cast<complex_t>(v(j * d + i) / tr);
  // hermiticity / positivity guard: small asymmetry means a solve problem
  double asym = (out.rho - out.rho.adjoint()).norm();
  if (asym > 1e-8) throw std::domain_error("steady_state: density matrix not hermitian");
  return out;
}

struct LindbladObservables {
  double n2_occupation = 0;
  double g2_ss = 0;
};

// g2 of the second cavity, <a2+ a2+ a2 a2> / <a2+ a2>^2
inline LindbladObservables g2_steady(const Eigen::MatrixXcd& rho, const FockBasis& basis) {
  const int d = basis.dim;
  double n2 = 0, nn = 0;
  for (int i = 0; i < d; ++i) {
    auto [o1, o2] = basis.occupations[i];
    n2 += o2 * rho(i, i).real();
    nn += o2 * (o2 - 1) * rho(i, i).real();
  }
  if (n2 <= 1e-20) throw std::domain_error("g2_steady: no signal in the second cavity");
  return {n2, nn / (n2 * n2)};
}

// convenience wrapper for one probe point
inline LindbladObservables lindblad_g2_point(const DimerParams& p, double delta,
                                             double omega_drive, double gamma, int n_max = 4) {
  auto basis = make_fock_basis(n_max);
  auto L = build_liouvillian(p, delta, omega_drive, gamma, basis);
  auto ss = steady_state(L, basis);
  return g2_steady(ss.rho, basis);
}

}  // namespace photon_dimer
