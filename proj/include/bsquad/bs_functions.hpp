#ifndef BSQUAD_BS_FUNCTIONS_HPP
#define BSQUAD_BS_FUNCTIONS_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "bsquad/params.hpp"

namespace bsquad {

namespace internal {

// Imaginary residue left over after summing exact conjugate pairs.
template <typename Scalar>
Scalar real_after_pairing(const std::complex<Scalar>& z, const char* what) {
  using std::abs;
  const Scalar scale = std::max(Scalar(1), abs(z.real()));
  if (!(abs(z.imag()) < Scalar(1e-13) * scale))
    throw std::logic_error(std::string(what) + ": conjugate-pair sum is not real");
  return z.real();
}

template <typename Scalar>
bool is_pole(const BSFamily<Scalar>& fam, Scalar xi) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar two_pi = 2 * pi;
  if (fam.eps_minus() == 1 && std::remainder(xi, two_pi) == Scalar(0)) return true;
  if (fam.eps_plus() == 1 && std::remainder(xi - pi, two_pi) == Scalar(0)) return true;
  return false;
}

}  // namespace internal

/// Poisson kernel u_alpha(x) = (1 - alpha^2) / (1 + 2 alpha cos x + alpha^2).
template <typename Scalar>
std::complex<Scalar> u_weight(const std::complex<Scalar>& alpha, Scalar x) {
  using Complex = std::complex<Scalar>;
  const Complex e = std::polar(Scalar(1), x);
  // The factored denominator avoids cancellation for alpha close to -1 at x = 0
  // (and alpha close to 1 at x = pi).
  return (Scalar(1) - alpha) * (Scalar(1) + alpha) / ((Scalar(1) + alpha * e) * (Scalar(1) + alpha * std::conj(e)));
}

template <typename Scalar>
Scalar u_weight(Scalar alpha, Scalar x) {
  return u_weight(std::complex<Scalar>(alpha), x).real();
}

/// F_alpha(xi) = integral of u_alpha over [0, xi].
///
/// Evaluated as xi - i [Log(1 + alpha e^{-i xi}) - Log(1 + alpha e^{i xi})], which
/// is continuous in xi on the whole real line (Re(1 + alpha e^{ix}) > 0 for
/// |alpha| < 1), so no branch bookkeeping is needed for shifted arguments.
template <typename Scalar>
std::complex<Scalar> u_antiderivative(const std::complex<Scalar>& alpha, Scalar xi) {
  using Complex = std::complex<Scalar>;
  const Complex e = std::polar(Scalar(1), xi);
  const Complex lm = std::log(Scalar(1) + alpha * std::conj(e));
  const Complex lp = std::log(Scalar(1) + alpha * e);
  return Complex(xi) - Complex(0, 1) * (lm - lp);
}

template <typename Scalar>
Scalar u_antiderivative(Scalar alpha, Scalar xi) {
  // Real alpha: F = xi - 2 atan2(alpha sin xi, 1 + alpha cos xi).
  return xi - 2 * std::atan2(alpha * std::sin(xi), 1 + alpha * std::cos(xi));
}

/// Sum over the family of u_{alpha_r}(x); real because pairs are conjugate.
template <typename Scalar>
Scalar u_sum(const BSFamily<Scalar>& fam, Scalar x) {
  std::complex<Scalar> s(0);
  for (const auto& a : fam.alpha()) s += u_weight(a, x);
  return internal::real_after_pairing(s, "u_sum");
}

/// Sum over the family of F_{alpha_r}(xi).
template <typename Scalar>
Scalar antiderivative_sum(const BSFamily<Scalar>& fam, Scalar xi) {
  std::complex<Scalar> s(0);
  for (const auto& a : fam.alpha()) s += u_antiderivative(a, xi);
  return internal::real_after_pairing(s, "antiderivative_sum");
}

/// prod_r (1 + alpha_r e^{-i xi}).
template <typename Scalar>
std::complex<Scalar> alpha_product(const BSFamily<Scalar>& fam, Scalar xi) {
  const std::complex<Scalar> e = std::polar(Scalar(1), -xi);
  std::complex<Scalar> p(1);
  for (const auto& a : fam.alpha()) p *= Scalar(1) + a * e;
  return p;
}

/// c(xi) = (1 + eps_+ e^{-i xi})^{-1} (1 - eps_- e^{-i xi})^{-1} prod_r (1 + alpha_r e^{-i xi}).
template <typename Scalar>
std::complex<Scalar> c_function(const BSFamily<Scalar>& fam, Scalar xi) {
  if (internal::is_pole(fam, xi))
    throw DomainError("c(xi) has a pole at xi = " + std::to_string(double(xi)) +
                      "; evaluate through the phase form instead");
  const std::complex<Scalar> e = std::polar(Scalar(1), -xi);
  std::complex<Scalar> den(1);
  if (fam.eps_plus() == 1) den *= Scalar(1) + e;
  if (fam.eps_minus() == 1) den *= Scalar(1) - e;
  return alpha_product(fam, xi) / den;
}

/// |c(xi)| for xi in [0, pi]; +inf at an eps-pole.
template <typename Scalar>
Scalar c_modulus(const BSFamily<Scalar>& fam, Scalar xi) {
  Scalar den = 1;
  if (fam.eps_plus() == 1) den *= 2 * std::cos(xi / 2);
  if (fam.eps_minus() == 1) den *= 2 * std::sin(xi / 2);
  return std::abs(alpha_product(fam, xi)) / den;
}

template <typename Scalar = double>
struct PhaseValue {
  Scalar xi;
  Scalar phi;
};

/// Continuous argument of c on [0, pi]:
///   phi(xi) = -1/2 [ 2 d_eps xi + eps_- pi - sum_r F_{alpha_r}(xi) ],
/// so that exp(2 i phi) = c(xi) / c(-xi).  Defined at the eps-poles by continuity.
template <typename Scalar>
PhaseValue<Scalar> phase(const BSFamily<Scalar>& fam, Scalar xi) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar s = fam.d_eps().twice() * xi + fam.eps_minus() * pi - antiderivative_sum(fam, xi);
  return {xi, -s / 2};
}

/// Chebyshev weight rho(xi) = 2^{eps_+ + eps_-} (1 + eps_+ cos xi)(1 - eps_- cos xi).
template <typename Scalar>
Scalar chebyshev_rho(int eps_plus, int eps_minus, Scalar xi) {
  const Scalar c = std::cos(xi);
  Scalar r = 1;
  if (eps_plus == 1) r *= 2 * (1 + c);
  if (eps_minus == 1) r *= 2 * (1 - c);
  return r;
}

/// Bernstein-Szego weight w(xi) = 1 / (2 pi |c(xi)|^2) on the open interval.
template <typename Scalar>
Scalar weight_w(const BSFamily<Scalar>& fam, Scalar xi) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  if (!(xi > 0 && xi < pi)) throw DomainError("weight_w is defined on (0, pi) only");
  const Scalar mod = c_modulus(fam, xi);
  return 1 / (2 * pi * mod * mod);
}

/// q_l(xi) = c(xi) e^{i l xi} + c(-xi) e^{-i l xi} = 2 |c(xi)| cos(l xi + phi(xi)), any integer l.
/// Equals the normalized polynomial p_l for l >= d_eps.
template <typename Scalar>
Scalar q_poly(const BSFamily<Scalar>& fam, int l, Scalar xi) {
  if (internal::is_pole(fam, xi))
    throw DomainError("q_l requested at an eps-pole; endpoint values are only exposed at nodes");
  const Scalar phi = phase(fam, xi).phi;
  return 2 * c_modulus(fam, xi) * std::cos(Scalar(l) * xi + phi);
}

/// Delta_l for l >= d_eps: (1 + (-1)^{eps_-} prod alpha)^{-1} at l = d_eps, else 1.
template <typename Scalar>
Scalar explicit_norm_delta(const BSFamily<Scalar>& fam, int l) {
  if (l < fam.d_eps())
    throw ParameterError("explicit norm requested for l = " + std::to_string(l) +
                         " below d_eps = " + fam.d_eps().to_string() +
                         "; use the Gram-Schmidt levels");
  if (l > fam.d_eps()) return Scalar(1);
  std::complex<Scalar> prod(1);
  for (const auto& a : fam.alpha()) prod *= a;
  const Scalar p = internal::real_after_pairing(prod, "explicit_norm_delta");
  const Scalar sign = fam.eps_minus() == 1 ? Scalar(-1) : Scalar(1);
  return 1 / (1 + sign * p);
}

}  // namespace bsquad

#endif  // BSQUAD_BS_FUNCTIONS_HPP
