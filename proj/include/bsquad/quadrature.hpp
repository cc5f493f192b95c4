#ifndef BSQUAD_QUADRATURE_HPP
#define BSQUAD_QUADRATURE_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <string_view>

#include "bsquad/bs_functions.hpp"
#include "bsquad/composite_basis.hpp"
#include "bsquad/node_solver.hpp"
#include "bsquad/params.hpp"

namespace bsquad {

enum class RuleKind { gauss, radau_left, radau_right, lobatto, interior };

inline std::string_view to_string(RuleKind kind) {
  switch (kind) {
    case RuleKind::gauss: return "gauss";
    case RuleKind::radau_left: return "radau_left";
    case RuleKind::radau_right: return "radau_right";
    case RuleKind::lobatto: return "lobatto";
    case RuleKind::interior: return "interior";
  }
  return "interior";
}

/// D = 2(m - d~_eps~) - 1: highest degree of f(cos xi) integrated exactly.
template <typename Scalar>
int exactness_degree(const CompositeConfig<Scalar>& config) {
  return 2 * config.m() - config.fam_t().d_eps().twice() - 1;
}

template <typename Scalar>
RuleKind classify(const CompositeConfig<Scalar>& config) {
  const bool left = config.has_left_endpoint();
  const bool right = config.has_right_endpoint();
  if (left && right) return RuleKind::lobatto;
  if (left) return RuleKind::radau_left;
  if (right) return RuleKind::radau_right;
  if (config.fam_t().d_eps() == -1) return RuleKind::gauss;
  return RuleKind::interior;
}

template <typename Scalar = double>
struct QuadratureRule {
  CompositeConfig<Scalar> config;
  VectorX<Scalar> nodes;
  VectorX<Scalar> weights;
  VectorX<Scalar> rho_at_nodes;
  int exactness_degree = 0;
  RuleKind kind = RuleKind::interior;

  int size() const { return static_cast<int>(nodes.size()); }
};

template <typename Scalar>
QuadratureRule<Scalar> build_rule(const NodeGrid<Scalar>& grid) {
  const auto& config = grid.config;
  VectorX<Scalar> rho(grid.size());
  for (int l = 0; l < grid.size(); ++l)
    rho(l) = chebyshev_rho(config.fam().eps_plus(), config.fam().eps_minus(), grid.xi(l));
  QuadratureRule<Scalar> rule{config, grid.xi, dual_weights(config, grid), std::move(rho),
                              exactness_degree(config), classify(config)};
  if (!(rule.weights.minCoeff() > 0)) throw std::logic_error("build_rule: non-positive weight");
  return rule;
}

template <typename Scalar>
QuadratureRule<Scalar> build_rule(const CompositeConfig<Scalar>& config, Scalar tol = Scalar(default_node_tol)) {
  return build_rule(solve_grid(config, tol));
}

/// Chebyshev series sum_k coeffs(k) T_k(x) by Clenshaw's recurrence.
template <typename Scalar, typename Derived>
Scalar chebyshev_eval(const Eigen::MatrixBase<Derived>& coeffs, Scalar x) {
  Scalar b1 = 0, b2 = 0;
  for (Eigen::Index k = coeffs.size() - 1; k >= 1; --k) {
    const Scalar b0 = coeffs(k) + 2 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return (coeffs.size() > 0 ? coeffs(0) : Scalar(0)) + x * b1 - b2;
}

/// Power-basis coefficients (in x = cos xi) to Chebyshev-T coefficients.
template <typename Scalar>
VectorX<Scalar> power_to_chebyshev(const VectorX<Scalar>& power) {
  const Eigen::Index n = power.size();
  VectorX<Scalar> cheb = VectorX<Scalar>::Zero(n);
  // Horner in the Chebyshev basis: c <- x*c + a_k, with x*T_0 = T_1, x*T_k = (T_{k+1} + T_{k-1})/2.
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    VectorX<Scalar> next = VectorX<Scalar>::Zero(n);
    for (Eigen::Index j = 0; j + 1 < n; ++j) {
      if (cheb(j) == Scalar(0)) continue;
      if (j == 0) {
        next(1) += cheb(0);
      } else {
        next(j + 1) += cheb(j) / 2;
        next(j - 1) += cheb(j) / 2;
      }
    }
    next(0) += power(k);
    cheb = std::move(next);
  }
  return cheb;
}

/// R(xi) = f(cos xi) / prod_r (1 + 2 alpha_r cos xi + alpha_r^2), f in Chebyshev-T form.
template <typename Scalar = double>
struct RationalIntegrand {
  VectorX<Scalar> f_coeffs;
  BSFamily<Scalar> pole_family;

  int degree() const {
    for (Eigen::Index k = f_coeffs.size() - 1; k >= 0; --k)
      if (f_coeffs(k) != Scalar(0)) return static_cast<int>(k);
    return 0;
  }

  static RationalIntegrand from_power_basis(const VectorX<Scalar>& power, BSFamily<Scalar> fam) {
    return RationalIntegrand{power_to_chebyshev(power), std::move(fam)};
  }

  /// The denominator is taken in the u-form prod_r u_{alpha_r}(xi) / (1 - alpha_r^2).
  Scalar operator()(Scalar xi) const {
    std::complex<Scalar> inv(1);
    for (const auto& a : pole_family.alpha()) inv *= u_weight(a, xi) / ((Scalar(1) - a) * (Scalar(1) + a));
    return chebyshev_eval(f_coeffs, std::cos(xi)) * internal::real_after_pairing(inv, "RationalIntegrand");
  }
};

template <typename Scalar = double>
struct IntegrationResult {
  Scalar value = 0;
  bool exact = false;  ///< deg f <= D, so the value is the exact integral up to rounding
  int degree = 0;
};

/// sum_lhat R(xi_lhat) rho(xi_lhat) Delta^_lhat  ==  (1/2pi) int_0^pi R rho dxi  for deg f <= D.
template <typename Scalar>
IntegrationResult<Scalar> integrate_rational(const QuadratureRule<Scalar>& rule,
                                             const RationalIntegrand<Scalar>& integrand) {
  if (!(integrand.pole_family == rule.config.fam()))
    throw ParameterError("integrate_rational: integrand poles do not match the rule's family");
  Scalar s = 0;
  for (int l = 0; l < rule.size(); ++l) s += integrand(rule.nodes(l)) * rule.rho_at_nodes(l) * rule.weights(l);
  const int deg = integrand.degree();
  return {s, deg <= rule.exactness_degree, deg};
}

/// (1/2pi) int_0^pi rho(xi) dxi: 1 when eps_+ + eps_- >= 1, else 1/2.
template <typename Scalar>
Scalar rho_mass(int eps_plus, int eps_minus) {
  return (eps_plus + eps_minus >= 1) ? Scalar(1) : Scalar(1) / 2;
}

}  // namespace bsquad

#endif  // BSQUAD_QUADRATURE_HPP
