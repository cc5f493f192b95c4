#ifndef BSQUAD_LOWDEG_GRAM_HPP
#define BSQUAD_LOWDEG_GRAM_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "bsquad/bs_functions.hpp"
#include "bsquad/params.hpp"

namespace bsquad {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Cosine moments mu_k = int_0^pi cos(k xi) w(xi) dxi, k = 0..k_max.
///
/// Each factor 1/(1 + 2 alpha cos xi + alpha^2) is expanded as the Laurent series
/// (1 - alpha^2)^{-1} sum_j (-alpha)^{|j|} e^{i j xi}, the truncated series are
/// convolved, multiplied by the rho numerator and the coefficients read off:
/// with w = (1/2pi) sum_n h_n e^{i n xi} one has mu_k = h_k / 2.
template <typename Scalar>
VectorX<Scalar> fourier_moments(const BSFamily<Scalar>& fam, int k_max) {
  using Complex = std::complex<Scalar>;
  if (k_max < 0) throw ParameterError("fourier_moments: k_max must be non-negative");

  Scalar amax = 0;
  for (const auto& a : fam.alpha()) amax = std::max(amax, std::abs(a));
  int n_trunc = k_max + fam.degree() + 2;
  if (amax > 0) n_trunc += static_cast<int>(std::ceil(std::log(Scalar(1e-16)) / std::log(amax)));

  // Symmetric Laurent coefficients stored at offset n_trunc.
  const int len = 2 * n_trunc + 1;
  std::vector<Complex> h(len, Complex(0));
  h[n_trunc] = Complex(1);

  std::vector<Complex> factor(len), next(len);
  for (const auto& a : fam.alpha()) {
    const Complex scale = Scalar(1) / ((Scalar(1) - a) * (Scalar(1) + a));
    Complex p(1);
    for (int j = 0; j <= n_trunc; ++j) {
      factor[n_trunc + j] = factor[n_trunc - j] = scale * p;
      p *= -a;
    }
    std::fill(next.begin(), next.end(), Complex(0));
    for (int i = 0; i < len; ++i) {
      if (h[i] == Complex(0)) continue;
      const int lo = std::max(0, n_trunc - i);
      const int hi = std::min(len - 1, len - 1 + n_trunc - i);
      for (int j = lo; j <= hi; ++j) next[i + j - n_trunc] += h[i] * factor[j];
    }
    h.swap(next);
  }

  // rho numerator as a Laurent polynomial: 2(1 + cos) = e^{-i} + 2 + e^{i}, 2(1 - cos) = -e^{-i} + 2 - e^{i}.
  auto multiply_three_term = [&](Scalar side, Scalar centre) {
    std::fill(next.begin(), next.end(), Complex(0));
    for (int i = 0; i < len; ++i) {
      next[i] += centre * h[i];
      if (i > 0) next[i] += side * h[i - 1];
      if (i + 1 < len) next[i] += side * h[i + 1];
    }
    h.swap(next);
  };
  if (fam.eps_plus() == 1) multiply_three_term(Scalar(1), Scalar(2));
  if (fam.eps_minus() == 1) multiply_three_term(Scalar(-1), Scalar(2));

  VectorX<Scalar> mu(k_max + 1);
  for (int k = 0; k <= k_max; ++k)
    mu(k) = internal::real_after_pairing(h[n_trunc + k], "fourier_moments") / 2;
  return mu;
}

/// Gram matrix of the cosine monomials 1, 2cos(xi), 2cos(2xi), ... in L^2(w), size n x n.
template <typename Scalar>
MatrixX<Scalar> cosine_gram(const VectorX<Scalar>& mu, int n) {
  MatrixX<Scalar> g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == 0 && j == 0)
        g(i, j) = mu(0);
      else if (i == 0 || j == 0)
        g(i, j) = 2 * mu(i + j);
      else
        g(i, j) = 2 * (mu(i + j) + mu(std::abs(i - j)));
    }
  return g;
}

/// Multiplication by 2cos(xi) on coefficient vectors in the cosine-monomial basis.
template <typename Scalar>
MatrixX<Scalar> cosine_shift(int n) {
  MatrixX<Scalar> s = MatrixX<Scalar>::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    if (j + 1 < n) s(j + 1, j) += 1;
    if (j == 1)
      s(0, j) += 2;
    else if (j >= 2)
      s(j - 1, j) += 1;
  }
  return s;
}

/// Evaluate sum_j coeffs(j) m_j(xi) with m_0 = 1, m_j = 2cos(j xi).
template <typename Scalar, typename Derived>
Scalar eval_cosine_expansion(const Eigen::MatrixBase<Derived>& coeffs, Scalar xi) {
  Scalar s = coeffs(0);
  for (Eigen::Index j = 1; j < coeffs.size(); ++j) s += coeffs(j) * 2 * std::cos(Scalar(j) * xi);
  return s;
}

/// Bernstein-Szego polynomials p_0..p_{l_max} obtained by Gram-Schmidt on the
/// cosine monomials, together with their norms and recurrence coefficients.
///
/// The raw Gram-Schmidt data is kept for all levels; the accessors norm(), a()
/// and b() return the exact stabilized values above the explicit threshold
/// d_eps and the Gram-Schmidt values below it.
template <typename Scalar = double>
class PolynomialFamily {
 public:
  using Family = BSFamily<Scalar>;

  PolynomialFamily() = default;
  PolynomialFamily(Family fam, MatrixX<Scalar> coeffs, VectorX<Scalar> delta, VectorX<Scalar> b)
      : fam_(std::move(fam)), coeffs_(std::move(coeffs)), delta_(std::move(delta)), b_(std::move(b)) {}

  const Family& family() const { return fam_; }
  int l_max() const { return static_cast<int>(delta_.size()) - 1; }

  /// Row l holds the unitriangular expansion of p_l on the cosine monomials.
  const MatrixX<Scalar>& cos_coeffs() const { return coeffs_; }
  const VectorX<Scalar>& gs_delta() const { return delta_; }
  const VectorX<Scalar>& gs_b() const { return b_; }

  Scalar norm(int l) const {
    if (l >= fam_.d_eps()) return explicit_norm_delta(fam_, l);
    check_level(l);
    return delta_(l);
  }

  /// a_l = (Delta_l / Delta_{l-1})^{1/2}, l >= 1.
  Scalar a(int l) const { return std::sqrt(norm(l) / norm(l - 1)); }

  Scalar b(int l) const {
    if (l > fam_.d_eps().ceil()) return Scalar(0);
    check_level(l);
    return b_(l);
  }

  /// Normalized polynomial p_l / Delta_l at xi.
  Scalar eval(int l, Scalar xi) const {
    if (l >= fam_.d_eps()) return q_poly(fam_, l, xi);
    return eval_gs(l, xi);
  }

  /// Normalized polynomial from the Gram-Schmidt expansion only.
  Scalar eval_gs(int l, Scalar xi) const {
    check_level(l);
    return eval_cosine_expansion(coeffs_.row(l).head(l + 1).transpose(), xi) / delta_(l);
  }

 private:
  void check_level(int l) const {
    if (l < 0 || l > l_max())
      throw ParameterError("polynomial level " + std::to_string(l) + " outside 0.." +
                           std::to_string(l_max()));
  }

  Family fam_;
  MatrixX<Scalar> coeffs_;
  VectorX<Scalar> delta_;
  VectorX<Scalar> b_;
};

/// Smallest l_max that carries every level the composite construction needs.
template <typename Scalar>
int required_levels(const BSFamily<Scalar>& fam) {
  return std::max(fam.d_eps().ceil() + 1, 1);
}

template <typename Scalar>
PolynomialFamily<Scalar> gram_schmidt_low(const BSFamily<Scalar>& fam, int l_max) {
  if (l_max < fam.d_eps().ceil() + 1 || l_max < 0)
    throw ParameterError("gram_schmidt_low: l_max = " + std::to_string(l_max) +
                         " must be at least ceil(d_eps) + 1 = " + std::to_string(fam.d_eps().ceil() + 1));
  const int n = l_max + 2;
  const VectorX<Scalar> mu = fourier_moments(fam, 2 * (n - 1));
  const MatrixX<Scalar> gram = cosine_gram(mu, n);
  const MatrixX<Scalar> shift = cosine_shift<Scalar>(n);

  MatrixX<Scalar> coeffs = MatrixX<Scalar>::Zero(l_max + 1, n);
  VectorX<Scalar> delta(l_max + 1);
  VectorX<Scalar> b(l_max + 1);

  for (int l = 0; l <= l_max; ++l) {
    VectorX<Scalar> v = VectorX<Scalar>::Unit(n, l);
    // Classical Gram-Schmidt followed by one reorthogonalization pass.
    for (int pass = 0; pass < 2; ++pass) {
      const VectorX<Scalar> gv = gram * v;
      VectorX<Scalar> correction = VectorX<Scalar>::Zero(n);
      for (int k = 0; k < l; ++k) correction += (coeffs.row(k).dot(gv) / delta(k)) * coeffs.row(k).transpose();
      v -= correction;
    }
    v(l) = 1;  // unitriangular by construction; pin the leading coefficient.
    const Scalar dl = v.dot(gram * v);
    if (!(dl > 0))
      throw ConvergenceError("gram_schmidt_low: non-positive norm at level " + std::to_string(l) +
                             " (moment truncation failure)");
    coeffs.row(l) = v.transpose();
    delta(l) = dl;
    b(l) = (shift * v).dot(gram * v) / dl;
  }
  return PolynomialFamily<Scalar>(fam, std::move(coeffs), std::move(delta), std::move(b));
}

template <typename Scalar>
PolynomialFamily<Scalar> gram_schmidt_low(const BSFamily<Scalar>& fam) {
  return gram_schmidt_low(fam, required_levels(fam));
}

template <typename Scalar = double>
struct RecurrenceCoefficients {
  VectorX<Scalar> a;  ///< a_1..a_{l_max}, stored at index l-1
  VectorX<Scalar> b;  ///< b_0..b_{l_max}
};

/// Raw Gram-Schmidt recurrence coefficients a_{l+1} = sqrt(Delta_{l+1}/Delta_l) and b_l.
template <typename Scalar>
RecurrenceCoefficients<Scalar> recurrence_coeffs(const PolynomialFamily<Scalar>& fp) {
  const int lm = fp.l_max();
  RecurrenceCoefficients<Scalar> rc;
  rc.a.resize(lm);
  for (int l = 0; l < lm; ++l) rc.a(l) = std::sqrt(fp.gs_delta()(l + 1) / fp.gs_delta()(l));
  rc.b = fp.gs_b();
  return rc;
}

}  // namespace bsquad

#endif  // BSQUAD_LOWDEG_GRAM_HPP
