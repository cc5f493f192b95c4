#ifndef BSQUAD_ORACLE_HPP
#define BSQUAD_ORACLE_HPP

// Brute-force reference computations.  Tests and the `verify` command use these
// to check the library against routes that share none of its shortcuts.

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <queue>
#include <vector>

#include "bsquad/jacobi.hpp"
#include "bsquad/node_solver.hpp"
#include "bsquad/params.hpp"

namespace bsquad::oracle {

template <typename Scalar = double>
struct OracleReport {
  Scalar value = 0;
  Scalar error_estimate = 0;
  long evaluations = 0;
  bool converged = true;
};

namespace detail {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss weights.
inline constexpr std::array<double, 8> kronrod_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_w = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename F>
Panel gk15(const F& f, double a, double b) {
  const double c = (a + b) / 2, h = (b - a) / 2;
  const double fc = f(c);
  double k = fc * kronrod_w[7];
  double g = fc * gauss_w[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kronrod_x[j];
    const double s = f(c - dx) + f(c + dx);
    k += kronrod_w[j] * s;
    if (j % 2 == 1) g += gauss_w[j / 2] * s;
  }
  return {a, b, k * h, std::abs((k - g) * h)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
///
/// Nodes are interior to every panel, so integrable endpoint behaviour is
/// never sampled.  Stops when the summed error estimate drops below
/// max(abs_tol, rel_tol |I|) or the panel budget runs out.
inline OracleReport<double> reference_integral(const std::function<double(double)>& f, double a, double b,
                                               double abs_tol = 1e-14, double rel_tol = 1e-13,
                                               int max_panels = 4000) {
  std::priority_queue<detail::Panel> heap;
  OracleReport<double> rep;
  const detail::Panel first = detail::gk15(f, a, b);
  rep.evaluations = 15;
  heap.push(first);
  double value = first.value, error = first.error;
  int panels = 1;
  while (error > std::max(abs_tol, rel_tol * std::abs(value))) {
    if (panels >= max_panels) {
      rep.converged = false;
      break;
    }
    const detail::Panel worst = heap.top();
    heap.pop();
    const double mid = (worst.a + worst.b) / 2;
    const detail::Panel left = detail::gk15(f, worst.a, mid);
    const detail::Panel right = detail::gk15(f, mid, worst.b);
    rep.evaluations += 30;
    heap.push(left);
    heap.push(right);
    ++panels;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    // Periodic exact re-sum bounds the drift from repeated subtraction.
    if (panels % 64 == 0 || error <= std::max(abs_tol, rel_tol * std::abs(value))) {
      value = 0;
      error = 0;
      auto copy = heap;
      while (!copy.empty()) {
        value += copy.top().value;
        error += copy.top().error;
        copy.pop();
      }
    }
  }
  rep.value = value;
  rep.error_estimate = error;
  return rep;
}

/// Integral over (0, pi).
inline OracleReport<double> reference_integral(const std::function<double(double)>& f, double tol = 1e-13) {
  return reference_integral(f, 0.0, std::numbers::pi, tol * 1e-1, tol);
}

/// Plain bisection of Phi(xi) - pi (2 l_hat + eps_- + eps~_-) on [0, pi].
template <typename Scalar>
Scalar bisect_node(const CompositeConfig<Scalar>& config, int l_hat, Scalar tol) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar target = node_target(config, l_hat);
  Scalar lo = 0, hi = pi;
  if (lhs_phi(config, lo) >= target) return lo;
  if (lhs_phi(config, hi) <= target) return hi;
  while (hi - lo > tol) {
    const Scalar mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    if (lhs_phi(config, mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return lo + (hi - lo) / 2;
}

template <typename Scalar = double>
struct EigenDecomposition {
  VectorX<Scalar> values;   ///< ascending
  MatrixX<Scalar> vectors;  ///< orthonormal columns, first nonzero component positive
};

/// Dense symmetric eigen-decomposition of a symmetric tridiagonal operator.
template <typename Scalar>
EigenDecomposition<Scalar> tridiag_eig(const JacobiOperator<Scalar>& op) {
  if (!op.symmetric) throw ParameterError("tridiag_eig: operator is not symmetric");
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver;
  VectorX<Scalar> sub = op.sub;
  solver.computeFromTridiagonal(op.diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw ConvergenceError("tridiag_eig: eigensolver failed");
  EigenDecomposition<Scalar> out{solver.eigenvalues(), solver.eigenvectors()};
  const Scalar tiny = std::numeric_limits<Scalar>::epsilon();
  for (Eigen::Index c = 0; c < out.vectors.cols(); ++c) {
    for (Eigen::Index r = 0; r < out.vectors.rows(); ++r) {
      const Scalar v = out.vectors(r, c);
      if (std::abs(v) > tiny) {
        if (v < 0) out.vectors.col(c) *= -1;
        break;
      }
    }
  }
  return out;
}

/// det(x I - A) for a tridiagonal A via the three-term recurrence
/// f_{k+1} = (x - d_k) f_k - sub_{k-1} sup_{k-1} f_{k-1}.
template <typename Scalar>
Scalar tridiag_det(const JacobiOperator<Scalar>& op, Scalar x) {
  Scalar prev = 1;
  Scalar cur = x - op.diag(0);
  for (int k = 1; k < op.size(); ++k) {
    const Scalar next = (x - op.diag(k)) * cur - op.sub(k - 1) * op.sup(k - 1) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace bsquad::oracle

#endif  // BSQUAD_ORACLE_HPP
