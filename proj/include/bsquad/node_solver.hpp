#ifndef BSQUAD_NODE_SOLVER_HPP
#define BSQUAD_NODE_SOLVER_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "bsquad/bs_functions.hpp"
#include "bsquad/lowdeg_gram.hpp"
#include "bsquad/params.hpp"

namespace bsquad {

/// Phi(xi) = 2(m - d_eps - d~_eps~) xi + sum_r F_{alpha_r}(xi) + sum_r F_{alpha~_r}(xi).
///
/// Strictly increasing with Phi(0) = 0 and Phi(pi) = pi (2m + eps_+ + eps_- + eps~_+ + eps~_-).
template <typename Scalar>
Scalar lhs_phi(const CompositeConfig<Scalar>& config, Scalar xi) {
  return Scalar(config.slope()) * xi + antiderivative_sum(config.fam(), xi) +
         antiderivative_sum(config.fam_t(), xi);
}

/// Phi'(xi) = 2(m - d_eps - d~_eps~) + sum_r u_{alpha_r}(xi) + sum_r u_{alpha~_r}(xi).
template <typename Scalar>
Scalar lhs_phi_derivative(const CompositeConfig<Scalar>& config, Scalar xi) {
  return Scalar(config.slope()) + u_sum(config.fam(), xi) + u_sum(config.fam_t(), xi);
}

/// Right-hand side pi (2 l_hat + eps_- + eps~_-) of the node equation.
template <typename Scalar>
Scalar node_target(const CompositeConfig<Scalar>& config, int l_hat) {
  return std::numbers::pi_v<Scalar> * Scalar(2 * l_hat + config.eps_minus_sum());
}

/// Node position when every alpha vanishes; also the Newton starting point.
template <typename Scalar>
Scalar exact_node(const CompositeConfig<Scalar>& config, int l_hat) {
  return node_target(config, l_hat) /
         Scalar(2 * config.m() + config.eps_plus_sum() + config.eps_minus_sum());
}

template <typename Scalar = double>
struct NodeBounds {
  Scalar kappa_plus = 0;
  Scalar kappa_minus = 0;
  VectorX<Scalar> lo;
  VectorX<Scalar> hi;
};

namespace internal {

template <typename Scalar>
Scalar kappa(const BSFamily<Scalar>& fam, int sign) {
  Scalar k = 0;
  for (const auto& a : fam.alpha()) {
    const Scalar r = std::abs(a);
    const Scalar ratio = (1 - r) / (1 + r);
    k += sign > 0 ? ratio : 1 / ratio;
  }
  return k / 2;
}

}  // namespace internal

/// Mean-value-theorem brackets for every node.
template <typename Scalar>
NodeBounds<Scalar> node_bounds(const CompositeConfig<Scalar>& config) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  NodeBounds<Scalar> nb;
  nb.kappa_plus = internal::kappa(config.fam(), +1) + internal::kappa(config.fam_t(), +1);
  nb.kappa_minus = internal::kappa(config.fam(), -1) + internal::kappa(config.fam_t(), -1);
  const Scalar base = Scalar(config.slope()) / 2;
  const int n = config.m() + 1;
  nb.lo.resize(n);
  nb.hi.resize(n);
  for (int l = 0; l < n; ++l) {
    const Scalar num = pi * (Scalar(l) + Scalar(config.eps_minus_sum()) / 2);
    nb.lo(l) = num / (base + nb.kappa_minus);
    nb.hi(l) = num / (base + nb.kappa_plus);
  }
  return nb;
}

template <typename Scalar = double>
struct NodeGrid {
  CompositeConfig<Scalar> config;
  VectorX<Scalar> xi;        ///< xi_0 < ... < xi_m
  VectorX<Scalar> residual;  ///< |Phi(xi) - target|
  VectorX<Scalar> lo;        ///< bracket lower ends
  VectorX<Scalar> hi;        ///< bracket upper ends
  Scalar kappa_plus = 0;
  Scalar kappa_minus = 0;

  int size() const { return static_cast<int>(xi.size()); }
};

inline constexpr double default_node_tol = 1e-13;

/// Safeguarded Newton solve of Phi(xi) = pi (2 l_hat + eps_- + eps~_-).
///
/// Converged when the Newton correction |Phi - target| / Phi' is below tol.
/// Steps leaving the current bracket are replaced by bisection.
template <typename Scalar>
Scalar solve_node(const CompositeConfig<Scalar>& config, int l_hat, Scalar tol = Scalar(default_node_tol),
                  int max_iter = 100) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  if (!(tol > 0)) throw ParameterError("solve_node: tol must be positive");
  if (l_hat < 0 || l_hat > config.m()) throw ParameterError("solve_node: l_hat outside 0..m");

  if (l_hat == 0 && config.has_left_endpoint()) return Scalar(0);
  if (l_hat == config.m() && config.has_right_endpoint()) return pi;

  const Scalar target = node_target(config, l_hat);
  const NodeBounds<Scalar> nb = node_bounds(config);
  Scalar lo = std::max(Scalar(0), nb.lo(l_hat));
  Scalar hi = std::min(pi, nb.hi(l_hat));
  // The certificates are exact in real arithmetic; fall back to [0, pi] if rounding broke them.
  if (lhs_phi(config, lo) > target || lhs_phi(config, hi) < target) {
    lo = 0;
    hi = pi;
  }

  Scalar x = std::clamp(exact_node(config, l_hat), lo, hi);
  for (int it = 0; it < max_iter; ++it) {
    const Scalar f = lhs_phi(config, x) - target;
    const Scalar fp = lhs_phi_derivative(config, x);
    const Scalar step = f / fp;
    if (std::abs(step) < tol) {
      const Scalar polished = x - step;
      return (polished >= lo && polished <= hi) ? polished : x;
    }
    if (f < 0)
      lo = x;
    else
      hi = x;
    Scalar next = x - step;
    if (!(next > lo && next < hi)) next = lo + (hi - lo) / 2;
    if (next == x) return x;
    x = next;
  }
  std::ostringstream os;
  os.precision(17);
  os << "solve_node: no convergence for l_hat = " << l_hat << " after " << max_iter
     << " iterations; last bracket [" << lo << ", " << hi << "]";
  throw ConvergenceError(os.str());
}

template <typename Scalar>
NodeGrid<Scalar> solve_grid(const CompositeConfig<Scalar>& config, Scalar tol = Scalar(default_node_tol)) {
  const int n = config.m() + 1;
  const NodeBounds<Scalar> nb = node_bounds(config);
  NodeGrid<Scalar> grid{config, VectorX<Scalar>(n), VectorX<Scalar>(n), nb.lo, nb.hi, nb.kappa_plus,
                        nb.kappa_minus};
  for (int l = 0; l < n; ++l) {
    grid.xi(l) = solve_node(config, l, tol);
    grid.residual(l) = std::abs(lhs_phi(config, grid.xi(l)) - node_target(config, l));
  }
  for (int l = 1; l < n; ++l)
    if (!(grid.xi(l) > grid.xi(l - 1))) throw ConvergenceError("solve_grid: nodes are not strictly increasing");
  return grid;
}

/// |e^{2imxi} - (-1)^{eps_- + eps~_-} e^{2i(d_eps + d~_eps~)xi} prod (1 + a e^{ixi})/(e^{ixi} + a) prod (...)~|.
/// Vanishes exactly at solutions of the node equation.
template <typename Scalar>
Scalar verify_phase_condition(const CompositeConfig<Scalar>& config, Scalar xi) {
  using Complex = std::complex<Scalar>;
  const Complex e = std::polar(Scalar(1), xi);
  Complex rhs = std::polar(Scalar(1), Scalar(config.d_sum().twice()) * xi);
  if (config.eps_minus_sum() % 2 == 1) rhs = -rhs;
  for (const auto* fam : {&config.fam(), &config.fam_t()})
    for (const auto& a : fam->alpha()) rhs *= (Scalar(1) + a * e) / (e + a);
  const Complex lhs = std::polar(Scalar(1), Scalar(2 * config.m()) * xi);
  return std::abs(lhs - rhs);
}

template <typename Scalar = double>
struct BoundCheck {
  bool brackets_ok = true;
  bool gaps_ok = true;
  Scalar worst_violation = 0;  ///< largest amount by which any inequality fails (0 if none)

  bool ok() const { return brackets_ok && gaps_ok; }
};

/// Checks the bracket and node-gap inequalities on a solved grid.
///
/// Inequalities are compared with a slack of a few ulps of pi, which covers the
/// rounding in evaluating both sides; there is no other tolerance.
template <typename Scalar>
BoundCheck<Scalar> check_bounds(const NodeGrid<Scalar>& grid) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar slack = 8 * std::numeric_limits<Scalar>::epsilon() * pi;
  const auto& config = grid.config;
  const Scalar base = Scalar(config.slope()) / 2;
  const Scalar den_lo = base + grid.kappa_minus;
  const Scalar den_hi = base + grid.kappa_plus;

  BoundCheck<Scalar> bc;
  auto record = [&](Scalar violation, bool& flag) {
    if (violation > slack) flag = false;
    bc.worst_violation = std::max(bc.worst_violation, std::max(violation, Scalar(0)));
  };
  const int n = grid.size();
  for (int l = 0; l < n; ++l) {
    record(grid.lo(l) - grid.xi(l), bc.brackets_ok);
    record(grid.xi(l) - grid.hi(l), bc.brackets_ok);
  }
  for (int l = 0; l < n; ++l)
    for (int k = l + 1; k < n; ++k) {
      const Scalar gap = grid.xi(k) - grid.xi(l);
      record(pi * Scalar(k - l) / den_lo - gap, bc.gaps_ok);
      record(gap - pi * Scalar(k - l) / den_hi, bc.gaps_ok);
    }
  return bc;
}

}  // namespace bsquad

#endif  // BSQUAD_NODE_SOLVER_HPP
