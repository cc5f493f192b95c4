#ifndef BSQUAD_COMPOSITE_BASIS_HPP
#define BSQUAD_COMPOSITE_BASIS_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>

#include "bsquad/bs_functions.hpp"
#include "bsquad/lowdeg_gram.hpp"
#include "bsquad/node_solver.hpp"
#include "bsquad/params.hpp"

namespace bsquad {

template <typename Scalar>
using MatrixXc = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorXc = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

/// Residual below which xi is accepted as a grid node by psi().
inline constexpr double node_acceptance_tol = 1e-8;

/// Composite basis function psi_l(xi) at a node xi.
///
///   l < d_eps                  : e^{i m xi/2} p_l(xi) / c(-xi)
///   d_eps <= l <= m - d~_eps~  : 2 e^{i(m xi/2 + phi)} cos(l xi + phi)
///   l > m - d~_eps~            : e^{-i m xi/2} p~_{m-l}(xi) / c~(xi)
///
/// The middle branch uses the phase form, which never touches |c| and is
/// therefore pole-free at endpoint nodes.
template <typename Scalar>
std::complex<Scalar> psi(const CompositeConfig<Scalar>& config, const PolynomialFamily<Scalar>& fp,
                         const PolynomialFamily<Scalar>& fp_t, int l, Scalar xi) {
  const int m = config.m();
  if (l < 0 || l > m) throw ParameterError("psi: l outside 0..m");
  if (!(verify_phase_condition(config, xi) < Scalar(node_acceptance_tol)))
    throw DomainError("psi: xi is not a node of the grid; the gluing only holds on the nodes");

  const Scalar half_m = Scalar(m) * xi / 2;
  if (l < config.fam().d_eps()) {
    // 1/c(-xi) = e^{i phi}/|c(xi)|
    const Scalar phi = phase(config.fam(), xi).phi;
    return std::polar(fp.eval(l, xi) / c_modulus(config.fam(), xi), half_m + phi);
  }
  if (l > m - config.fam_t().d_eps()) {
    const Scalar phi_t = phase(config.fam_t(), xi).phi;
    return std::polar(fp_t.eval(m - l, xi) / c_modulus(config.fam_t(), xi), -(half_m + phi_t));
  }
  const Scalar phi = phase(config.fam(), xi).phi;
  return std::polar(Scalar(2) * std::cos(Scalar(l) * xi + phi), half_m + phi);
}

/// |e^{imxi/2} p_l/c(-xi) - e^{-imxi/2} p~_{m-l}/c~(xi)| for a middle-range l,
/// both sides evaluated directly from c and q_l (no phase shortcut).
template <typename Scalar>
Scalar gluing_residual(const CompositeConfig<Scalar>& config, int l, Scalar xi) {
  using Complex = std::complex<Scalar>;
  const int m = config.m();
  if (l < config.fam().d_eps() || l > m - config.fam_t().d_eps())
    throw ParameterError("gluing_residual: l outside the overlap range");
  const Complex c = c_function(config.fam(), xi);
  const Complex ct = c_function(config.fam_t(), xi);
  const Complex left = std::polar(Scalar(1), Scalar(m) * xi / 2) *
                       (c * std::polar(Scalar(1), Scalar(l) * xi) + std::conj(c) * std::polar(Scalar(1), -Scalar(l) * xi)) /
                       std::conj(c);
  const int lt = m - l;
  const Complex right = std::polar(Scalar(1), -Scalar(m) * xi / 2) *
                        (ct * std::polar(Scalar(1), Scalar(lt) * xi) + std::conj(ct) * std::polar(Scalar(1), -Scalar(lt) * xi)) /
                        ct;
  return std::abs(left - right);
}

/// Primal weights Delta^(m)_l: Delta_l for l <= d_eps, 1 in the middle, Delta~_{m-l} at the top.
template <typename Scalar>
VectorX<Scalar> primal_weights(const CompositeConfig<Scalar>& config, const PolynomialFamily<Scalar>& fp,
                               const PolynomialFamily<Scalar>& fp_t) {
  const int m = config.m();
  VectorX<Scalar> w(m + 1);
  for (int l = 0; l <= m; ++l) {
    if (l <= config.fam().d_eps())
      w(l) = fp.norm(l);
    else if (l < m - config.fam_t().d_eps())
      w(l) = 1;
    else
      w(l) = fp_t.norm(m - l);
  }
  return w;
}

namespace internal {

template <typename Scalar>
int boundary_halvings(const CompositeConfig<Scalar>& config, int l_hat) {
  int h = 0;
  if (l_hat == 0 && config.has_left_endpoint()) ++h;
  if (l_hat == config.m() && config.has_right_endpoint()) ++h;
  return h;
}

}  // namespace internal

/// Dual (Christoffel) weights
///   Delta^_l = (1/2)^{[left endpoint] + [right endpoint]} / (2(m - d_eps - d~_eps~) + sum u + sum u~).
template <typename Scalar>
VectorX<Scalar> dual_weights(const CompositeConfig<Scalar>& config, const NodeGrid<Scalar>& grid) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  const int m = config.m();
  VectorX<Scalar> w(m + 1);
  for (int l = 0; l <= m; ++l) {
    const int halvings = internal::boundary_halvings(config, l);
    // The index form of the halving coincides with xi in {0, pi}.
    const int by_value = (grid.xi(l) == Scalar(0) ? 1 : 0) + (grid.xi(l) == pi ? 1 : 0);
    if (halvings != by_value) throw std::logic_error("dual_weights: endpoint nodes disagree with eps flags");
    w(l) = std::ldexp(Scalar(1), -halvings) / lhs_phi_derivative(config, grid.xi(l));
  }
  return w;
}

/// Assembled composite basis on a solved grid.
template <typename Scalar = double>
struct CompositeBasis {
  CompositeConfig<Scalar> config;
  NodeGrid<Scalar> grid;
  PolynomialFamily<Scalar> fp;
  PolynomialFamily<Scalar> fp_t;
  VectorX<Scalar> primal;
  VectorX<Scalar> dual;
  MatrixXc<Scalar> psi_matrix;  ///< (l, l_hat) -> psi_l(xi_l_hat)

  /// U = [sqrt(Delta_l Delta^_l_hat) psi_l(xi_l_hat)], unitary by the orthogonality theorem.
  MatrixXc<Scalar> unitary() const {
    const VectorX<Scalar> sp = primal.cwiseSqrt();
    const VectorX<Scalar> sd = dual.cwiseSqrt();
    return sp.asDiagonal() * psi_matrix * sd.asDiagonal();
  }
};

template <typename Scalar>
CompositeBasis<Scalar> assemble_basis(const NodeGrid<Scalar>& grid) {
  const auto& config = grid.config;
  PolynomialFamily<Scalar> fp = gram_schmidt_low(config.fam());
  PolynomialFamily<Scalar> fp_t = gram_schmidt_low(config.fam_t());
  const int n = config.m() + 1;
  MatrixXc<Scalar> pm(n, n);
  for (int lh = 0; lh < n; ++lh)
    for (int l = 0; l < n; ++l) pm(l, lh) = psi(config, fp, fp_t, l, grid.xi(lh));
  VectorX<Scalar> primal = primal_weights(config, fp, fp_t);
  VectorX<Scalar> dual = dual_weights(config, grid);
  return CompositeBasis<Scalar>{config, grid, std::move(fp), std::move(fp_t), std::move(primal), std::move(dual),
                                std::move(pm)};
}

template <typename Scalar>
CompositeBasis<Scalar> assemble_basis(const CompositeConfig<Scalar>& config, Scalar tol = Scalar(default_node_tol)) {
  return assemble_basis(solve_grid(config, tol));
}

template <typename Scalar = double>
struct GramResiduals {
  Scalar row = 0;  ///< max deviation in sum_lhat psi_l conj(psi_k) Delta^_lhat = delta_lk / Delta_l
  Scalar col = 0;  ///< max deviation in sum_l psi_l(xi) conj(psi_l(xi')) Delta_l = delta / Delta^
};

/// Deviations are reported after scaling by sqrt(Delta_l Delta_k) (rows) and
/// sqrt(Delta^_l Delta^_k) (columns), i.e. as deviations of U U* and U* U from I.
template <typename Scalar>
GramResiduals<Scalar> gram_residuals(const CompositeBasis<Scalar>& basis) {
  const MatrixXc<Scalar> u = basis.unitary();
  const Eigen::Index n = u.rows();
  const MatrixXc<Scalar> eye = MatrixXc<Scalar>::Identity(n, n);
  GramResiduals<Scalar> r;
  r.row = (u * u.adjoint() - eye).cwiseAbs().maxCoeff();
  r.col = (u.adjoint() * u - eye).cwiseAbs().maxCoeff();
  return r;
}

/// Default split index for the Christoffel-Darboux sum: ceil(d~_eps~) + 1.
template <typename Scalar>
int default_split(const CompositeConfig<Scalar>& config) {
  return std::max(config.fam_t().d_eps().ceil() + 1, 0);
}

/// sum_l |psi_l(xi)|^2 Delta^(m)_l evaluated through the split form
///   |c|^{-2} sum_{l <= m - split} p_l^2 Delta_l + |c~|^{-2} sum_{l < split} p~_l^2 Delta~_l,
/// admissible for ceil(d~_eps~) < split <= m - ceil(d_eps).
template <typename Scalar>
Scalar cd_sum(const CompositeConfig<Scalar>& config, const PolynomialFamily<Scalar>& fp,
              const PolynomialFamily<Scalar>& fp_t, Scalar xi, std::optional<int> split = std::nullopt) {
  const int m = config.m();
  const int s = split.value_or(default_split(config));
  if (!(s > config.fam_t().d_eps().ceil() && s <= m - config.fam().d_eps().ceil() && s >= 0))
    throw ParameterError("cd_sum: split index " + std::to_string(s) + " not admissible");

  // p_l / |c| is evaluated in the pole-free form 2cos(l xi + phi) above the threshold.
  auto scaled = [](const BSFamily<Scalar>& fam, const PolynomialFamily<Scalar>& p, int l, Scalar x) {
    if (l >= fam.d_eps()) return Scalar(2) * std::cos(Scalar(l) * x + phase(fam, x).phi);
    return p.eval(l, x) / c_modulus(fam, x);
  };
  Scalar sum = 0;
  for (int l = 0; l <= m - s; ++l) {
    const Scalar v = scaled(config.fam(), fp, l, xi);
    sum += v * v * fp.norm(l);
  }
  for (int l = 0; l < s; ++l) {
    const Scalar v = scaled(config.fam_t(), fp_t, l, xi);
    sum += v * v * fp_t.norm(l);
  }
  return sum;
}

/// Closed form 2^{[xi = 0] + [xi = pi]} (2(m - d_eps - d~_eps~) + sum u + sum u~).
template <typename Scalar>
Scalar cd_closed_form(const CompositeConfig<Scalar>& config, Scalar xi) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  const int doublings = (xi == Scalar(0) ? 1 : 0) + (xi == pi ? 1 : 0);
  return std::ldexp(lhs_phi_derivative(config, xi), doublings);
}

}  // namespace bsquad

#endif  // BSQUAD_COMPOSITE_BASIS_HPP
