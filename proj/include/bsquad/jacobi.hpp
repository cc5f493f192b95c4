#ifndef BSQUAD_JACOBI_HPP
#define BSQUAD_JACOBI_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "bsquad/bs_functions.hpp"
#include "bsquad/composite_basis.hpp"
#include "bsquad/lowdeg_gram.hpp"
#include "bsquad/params.hpp"
#include "bsquad/quadrature.hpp"

namespace bsquad {

/// Tridiagonal (m+1) x (m+1) operator stored by bands.
template <typename Scalar = double>
struct JacobiOperator {
  VectorX<Scalar> sub;   ///< (l+1, l), size m
  VectorX<Scalar> diag;  ///< (l, l),   size m+1
  VectorX<Scalar> sup;   ///< (l, l+1), size m
  bool symmetric = false;

  int size() const { return static_cast<int>(diag.size()); }

  MatrixX<Scalar> dense() const {
    const int n = size();
    MatrixX<Scalar> a = MatrixX<Scalar>::Zero(n, n);
    a.diagonal() = diag;
    if (n > 1) {
      a.diagonal(-1) = sub;
      a.diagonal(1) = sup;
    }
    return a;
  }

  template <typename T>
  Eigen::Matrix<T, Eigen::Dynamic, 1> apply(const Eigen::Matrix<T, Eigen::Dynamic, 1>& f) const {
    const int n = size();
    Eigen::Matrix<T, Eigen::Dynamic, 1> out(n);
    for (int l = 0; l < n; ++l) {
      T v = diag(l) * f(l);
      if (l > 0) v += sub(l - 1) * f(l - 1);
      if (l + 1 < n) v += sup(l) * f(l + 1);
      out(l) = v;
    }
    return out;
  }
};

/// L^(m): rows l <= ceil(d_eps) carry (1, b_l, a_{l+1}^2), rows l >= m - ceil(d~_eps~)
/// carry (a~_{m-l+1}^2, b~_{m-l}, 1) and the middle rows the free stencil (1, 0, 1).
template <typename Scalar>
JacobiOperator<Scalar> build_L(const CompositeConfig<Scalar>& config, const PolynomialFamily<Scalar>& fp,
                               const PolynomialFamily<Scalar>& fp_t) {
  const int m = config.m();
  const int top = config.fam().d_eps().ceil();
  const int bottom = m - config.fam_t().d_eps().ceil();
  JacobiOperator<Scalar> op;
  op.diag = VectorX<Scalar>::Zero(m + 1);
  op.sub = VectorX<Scalar>::Ones(m);
  op.sup = VectorX<Scalar>::Ones(m);
  for (int l = 0; l <= m; ++l) {
    if (l <= top) {
      op.diag(l) = fp.b(l);
      if (l < m) op.sup(l) = fp.norm(l + 1) / fp.norm(l);
    } else if (l >= bottom) {
      op.diag(l) = fp_t.b(m - l);
      if (l > 0) op.sub(l - 1) = fp_t.norm(m - l + 1) / fp_t.norm(m - l);
    }
  }
  return op;
}

/// J^(m) from the closed-form band formulas; symmetric by construction.
template <typename Scalar>
JacobiOperator<Scalar> build_J(const CompositeConfig<Scalar>& config, const PolynomialFamily<Scalar>& fp,
                               const PolynomialFamily<Scalar>& fp_t) {
  const int m = config.m();
  const int top = config.fam().d_eps().ceil();
  const int bottom = m - config.fam_t().d_eps().ceil();
  JacobiOperator<Scalar> op;
  op.symmetric = true;
  op.diag.resize(m + 1);
  op.sub.resize(m);
  for (int l = 0; l <= m; ++l) {
    if (l <= top)
      op.diag(l) = fp.b(l);
    else if (l < bottom)
      op.diag(l) = 0;
    else
      op.diag(l) = fp_t.b(m - l);
  }
  for (int l = 0; l < m; ++l) {
    if (l < top)
      op.sub(l) = fp.a(l + 1);
    else if (l < bottom)
      op.sub(l) = 1 / std::sqrt(fp.norm(l) * fp_t.norm(m - l - 1));
    else
      op.sub(l) = fp_t.a(m - l);
  }
  op.sup = op.sub;
  return op;
}

/// max_{l,k} |J - D^{1/2} L D^{-1/2}| entrywise.
template <typename Scalar>
Scalar similarity_residual(const JacobiOperator<Scalar>& l_op, const JacobiOperator<Scalar>& j_op,
                           const VectorX<Scalar>& primal) {
  const VectorX<Scalar> s = primal.cwiseSqrt();
  const MatrixX<Scalar> sim = s.asDiagonal() * l_op.dense() * s.cwiseInverse().asDiagonal();
  return (sim - j_op.dense()).cwiseAbs().maxCoeff();
}

/// max_lhat ||L psi(xi_lhat) - 2cos(xi_lhat) psi(xi_lhat)||_inf / ||psi(xi_lhat)||_inf.
template <typename Scalar>
Scalar eig_check(const CompositeBasis<Scalar>& basis, const JacobiOperator<Scalar>& l_op) {
  Scalar worst = 0;
  for (int lh = 0; lh < basis.grid.size(); ++lh) {
    const VectorXc<Scalar> v = basis.psi_matrix.col(lh);
    const VectorXc<Scalar> r = l_op.apply(v) - Scalar(2) * std::cos(basis.grid.xi(lh)) * v;
    worst = std::max(worst, r.cwiseAbs().maxCoeff() / v.cwiseAbs().maxCoeff());
  }
  return worst;
}

/// e_0..e_d of the list: coefficients of prod_r (1 + alpha_r z).
template <typename Scalar>
VectorX<Scalar> elementary_symmetric(const std::vector<std::complex<Scalar>>& alpha) {
  const int d = static_cast<int>(alpha.size());
  std::vector<std::complex<Scalar>> e(d + 1, std::complex<Scalar>(0));
  e[0] = 1;
  for (int r = 0; r < d; ++r)
    for (int k = r + 1; k >= 1; --k) e[k] += alpha[r] * e[k - 1];
  VectorX<Scalar> out(d + 1);
  for (int k = 0; k <= d; ++k) out(k) = internal::real_after_pairing(e[k], "elementary_symmetric");
  return out;
}

/// e_k(alpha; x; y) = e_k + (x - y) e_{k-1} - x y e_{k-2}, k = 0..d+2:
/// coefficients of (1 + x z)(1 - y z) prod_r (1 + alpha_r z).
template <typename Scalar>
VectorX<Scalar> generalized_elementary_symmetric(const std::vector<std::complex<Scalar>>& alpha, int x, int y) {
  const VectorX<Scalar> e = elementary_symmetric(alpha);
  const int d = static_cast<int>(e.size()) - 1;
  auto at = [&](int k) { return (k >= 0 && k <= d) ? e(k) : Scalar(0); };
  VectorX<Scalar> out(d + 3);
  for (int k = 0; k <= d + 2; ++k) out(k) = at(k) + Scalar(x - y) * at(k - 1) - Scalar(x * y) * at(k - 2);
  return out;
}

/// Coefficients e_k(alpha~; 1 - eps~_+; 1 - eps~_-), k = 0..2(d~_eps~ + 1), of the node polynomial.
template <typename Scalar>
VectorX<Scalar> charpoly_weights(const CompositeConfig<Scalar>& config) {
  const auto& ft = config.fam_t();
  const int top = ft.d_eps().twice() + 2;
  return generalized_elementary_symmetric(ft.alpha(), 1 - ft.eps_plus(), 1 - ft.eps_minus()).head(top + 1);
}

/// Q_{m+1}(xi) = sum_{k=0}^{2(d~_eps~+1)} e_k(alpha~; 1-eps~_+; 1-eps~_-) q_{m+1-k}(xi).
/// Vanishes at every node; equals det(2cos(xi) I - J^(m)).
template <typename Scalar>
Scalar charpoly_eval(const CompositeConfig<Scalar>& config, Scalar xi) {
  const VectorX<Scalar> w = charpoly_weights(config);
  const int m = config.m();
  if (internal::is_pole(config.fam(), xi)) throw DomainError("charpoly_eval: xi is an eps-pole of c");
  // q_l = 2|c| cos(l xi + phi); the modulus and phase are shared by every term.
  const Scalar mod = 2 * c_modulus(config.fam(), xi);
  const Scalar phi = phase(config.fam(), xi).phi;
  Scalar s = 0;
  for (Eigen::Index k = 0; k < w.size(); ++k) s += w(k) * std::cos(Scalar(m + 1 - k) * xi + phi);
  return mod * s;
}

/// Chebyshev-T coefficients of Q_{m+1} as a polynomial in cos xi, from n_points >= m+2
/// samples at the Chebyshev-Gauss points (exact for degree < n_points).
template <typename Scalar>
VectorX<Scalar> charpoly_chebyshev_coeffs(const CompositeConfig<Scalar>& config, int n_points) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  if (n_points < config.m() + 2) throw ParameterError("charpoly_chebyshev_coeffs: need at least m+2 points");
  VectorX<Scalar> values(n_points);
  for (int j = 0; j < n_points; ++j) values(j) = charpoly_eval(config, pi * (Scalar(j) + Scalar(0.5)) / Scalar(n_points));
  VectorX<Scalar> coeffs(n_points);
  for (int k = 0; k < n_points; ++k) {
    Scalar s = 0;
    for (int j = 0; j < n_points; ++j) s += values(j) * std::cos(Scalar(k) * pi * (Scalar(j) + Scalar(0.5)) / Scalar(n_points));
    coeffs(k) = (k == 0 ? Scalar(1) : Scalar(2)) * s / Scalar(n_points);
  }
  return coeffs;
}

/// Leading coefficient of Q_{m+1} in powers of cos xi (expected 2^{m+1}).
template <typename Scalar>
Scalar charpoly_leading_coefficient(const CompositeConfig<Scalar>& config) {
  const VectorX<Scalar> c = charpoly_chebyshev_coeffs(config, config.m() + 2);
  return std::ldexp(c(config.m() + 1), config.m());
}

template <typename Scalar = double>
struct ExpansionCheck {
  bool applicable = false;
  VectorX<Scalar> recovered;  ///< c_{2m+1-k}, k = 0..2(d~_eps~+1); entry 0 is the p_{m+1} coefficient
  VectorX<Scalar> expected;   ///< e_k(alpha~; 1-eps~_+; 1-eps~_-)
  Scalar residual = 0;        ///< max |recovered - expected|
  Scalar orthogonality = 0;   ///< max |c| over the remaining k <= m+1 (should vanish)
};

/// Expansion of Q_{m+1} in the p_l basis, valid when 2 d~_eps~ <= m - 1 - d_eps.
///
/// Coefficients are projections <Q, p_j> Delta_j computed with a Gauss-kind
/// composite rule on the same pole family with m' = m + 1 (exact to degree 2m+3).
template <typename Scalar>
ExpansionCheck<Scalar> charpoly_expansion_check(const CompositeConfig<Scalar>& config,
                                                const PolynomialFamily<Scalar>& fp) {
  ExpansionCheck<Scalar> out;
  const int m = config.m();
  if (2 * config.fam_t().d_eps().twice() > 2 * (m - 1) - config.fam().d_eps().twice()) return out;
  out.applicable = true;

  const CompositeConfig<Scalar> wide(config.fam(), BSFamily<Scalar>(1, 1, {}), m + 1);
  const QuadratureRule<Scalar> rule = build_rule(wide);
  const VectorX<Scalar> q_at = [&] {
    VectorX<Scalar> v(rule.size());
    for (int j = 0; j < rule.size(); ++j) v(j) = charpoly_eval(config, rule.nodes(j));
    return v;
  }();

  // <Q, p_j>_w = (1/2pi) int Q p_j rho / prod(...) = sum R rho Delta^ with R = Q p_j / prod(...).
  auto project = [&](int j) {
    Scalar s = 0;
    for (int n = 0; n < rule.size(); ++n) {
      const Scalar xi = rule.nodes(n);
      std::complex<Scalar> inv(1);
      for (const auto& a : config.fam().alpha()) inv *= u_weight(a, xi) / ((Scalar(1) - a) * (Scalar(1) + a));
      s += q_at(n) * fp.eval(j, xi) * inv.real() * rule.rho_at_nodes(n) * rule.weights(n);
    }
    return s * fp.norm(j);
  };

  out.expected = charpoly_weights(config);
  const int top = static_cast<int>(out.expected.size()) - 1;
  out.recovered.resize(top + 1);
  for (int k = 0; k <= top; ++k) out.recovered(k) = project(m + 1 - k);
  out.residual = (out.recovered - out.expected).cwiseAbs().maxCoeff();
  for (int k = top + 1; k <= m + 1; ++k) out.orthogonality = std::max(out.orthogonality, std::abs(project(m + 1 - k)));
  return out;
}

}  // namespace bsquad

#endif  // BSQUAD_JACOBI_HPP
