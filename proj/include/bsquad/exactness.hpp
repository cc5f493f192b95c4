#ifndef BSQUAD_EXACTNESS_HPP
#define BSQUAD_EXACTNESS_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "bsquad/jacobi.hpp"
#include "bsquad/oracle.hpp"
#include "bsquad/quadrature.hpp"

namespace bsquad {

struct ExactnessReport {
  int exactness_degree = 0;
  std::vector<double> max_rel_error;  ///< indexed by degree 0..D
  double worst_exact = 0;             ///< max over degrees 0..D
  double monomial_error = 0;          ///< cos^{D+1}: |rule - oracle| / max(1, |oracle|)
  double witness_error = 0;           ///< Q_{m+1}^2 (degree 2m+2, zero at the nodes), same metric
};

/// (1/2pi) int_0^pi R rho dxi by adaptive quadrature.
inline double oracle_integral(const QuadratureRule<double>& rule, const RationalIntegrand<double>& integrand) {
  const int ep = rule.config.fam().eps_plus(), em = rule.config.fam().eps_minus();
  const auto rep = oracle::reference_integral(
      [&](double xi) { return integrand(xi) * chebyshev_rho(ep, em, xi); }, 1e-14);
  return rep.value / (2 * std::numbers::pi);
}

inline double relative_error(double approx, double exact) {
  return std::abs(approx - exact) / std::max(1.0, std::abs(exact));
}

/// Random Chebyshev coefficients with the top one bounded away from zero.
inline VectorX<double> random_chebyshev(int degree, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> lead(0.5, 1.0);
  VectorX<double> c(degree + 1);
  for (int k = 0; k < degree; ++k) c(k) = coef(rng);
  c(degree) = (rng() & 1 ? 1.0 : -1.0) * lead(rng);
  return c;
}

/// Integrates `trials` random polynomials of every degree 0..D against the
/// adaptive oracle, plus two degree-above-D probes.
inline ExactnessReport exactness_sweep(const QuadratureRule<double>& rule, int trials, std::uint64_t seed = 7) {
  std::mt19937_64 rng(seed);
  ExactnessReport rep;
  rep.exactness_degree = rule.exactness_degree;
  rep.max_rel_error.assign(rule.exactness_degree + 1, 0.0);
  const auto& fam = rule.config.fam();
  for (int deg = 0; deg <= rule.exactness_degree; ++deg) {
    for (int t = 0; t < trials; ++t) {
      const RationalIntegrand<double> g{random_chebyshev(deg, rng), fam};
      const double err = relative_error(integrate_rational(rule, g).value, oracle_integral(rule, g));
      rep.max_rel_error[deg] = std::max(rep.max_rel_error[deg], err);
    }
    rep.worst_exact = std::max(rep.worst_exact, rep.max_rel_error[deg]);
  }

  const int above = rule.exactness_degree + 1;
  VectorX<double> power = VectorX<double>::Zero(above + 1);
  power(above) = 1;
  const auto mono = RationalIntegrand<double>::from_power_basis(power, fam);
  rep.monomial_error = relative_error(integrate_rational(rule, mono).value, oracle_integral(rule, mono));

  // Q_{m+1}^2 is a degree 2m+2 polynomial in cos xi vanishing at every node.
  const auto& config = rule.config;
  const VectorX<double> qc = charpoly_chebyshev_coeffs(config, config.m() + 2);
  auto witness = [&](double xi) {
    const double q = chebyshev_eval(qc, std::cos(xi));
    return q * q;
  };
  double rule_value = 0;
  RationalIntegrand<double> one{VectorX<double>::Ones(1), fam};
  for (int l = 0; l < rule.size(); ++l)
    rule_value += witness(rule.nodes(l)) * one(rule.nodes(l)) * rule.rho_at_nodes(l) * rule.weights(l);
  const auto wrep = oracle::reference_integral(
      [&](double xi) { return witness(xi) * one(xi) * chebyshev_rho(fam.eps_plus(), fam.eps_minus(), xi); }, 1e-14);
  rep.witness_error = relative_error(rule_value, wrep.value / (2 * std::numbers::pi));
  return rep;
}

}  // namespace bsquad

#endif  // BSQUAD_EXACTNESS_HPP
