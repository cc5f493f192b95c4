#ifndef BSQUAD_TESTS_RANDOM_CONFIGS_HPP
#define BSQUAD_TESTS_RANDOM_CONFIGS_HPP

#include <algorithm>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "bsquad/params.hpp"
#include "bsquad/quadrature.hpp"

namespace bsquad::testing {

struct SweepLimits {
  int max_degree = 4;
  int max_m = 32;
  double max_modulus = 0.8;
  double min_modulus = 0.05;
};

/// Random poles: up to degree/2 exact conjugate pairs, the rest real.
inline std::vector<std::complex<double>> random_alphas(int degree, std::mt19937_64& rng, const SweepLimits& lim) {
  std::uniform_real_distribution<double> mod(lim.min_modulus, lim.max_modulus);
  std::uniform_real_distribution<double> arg(0.1, std::numbers::pi - 0.1);
  std::vector<std::complex<double>> a;
  const int pairs = std::uniform_int_distribution<int>(0, degree / 2)(rng);
  for (int p = 0; p < pairs; ++p) {
    const auto z = std::polar(mod(rng), arg(rng));
    a.push_back(z);
    a.push_back(std::conj(z));
  }
  while (static_cast<int>(a.size()) < degree) a.emplace_back((rng() & 1 ? 1.0 : -1.0) * mod(rng));
  std::shuffle(a.begin(), a.end(), rng);
  return a;
}

inline BSFamily<double> random_family(std::mt19937_64& rng, const SweepLimits& lim,
                                      std::optional<int> eps_plus = std::nullopt,
                                      std::optional<int> eps_minus = std::nullopt,
                                      std::optional<int> degree = std::nullopt) {
  const int ep = eps_plus.value_or(static_cast<int>(rng() & 1));
  const int em = eps_minus.value_or(static_cast<int>(rng() & 1));
  const int d = degree.value_or(std::uniform_int_distribution<int>(0, lim.max_degree)(rng));
  return BSFamily<double>(ep, em, random_alphas(d, rng, lim));
}

inline CompositeConfig<double> random_config(std::mt19937_64& rng, const SweepLimits& lim = {}) {
  const BSFamily<double> fam = random_family(rng, lim);
  const BSFamily<double> fam_t = random_family(rng, lim);
  const int m_min = fam.d_eps().ceil() + fam_t.d_eps().ceil() + 1;
  const int m = std::uniform_int_distribution<int>(std::max(m_min, 1), lim.max_m)(rng);
  return CompositeConfig<double>(fam, fam_t, m);
}

/// A random config of the requested rule kind.
inline CompositeConfig<double> random_config_of_kind(RuleKind kind, std::mt19937_64& rng, const SweepLimits& lim = {}) {
  BSFamily<double> fam, fam_t;
  switch (kind) {
    case RuleKind::gauss:
      fam = random_family(rng, lim, 1, 1);
      fam_t = BSFamily<double>(1, 1, {});
      break;
    case RuleKind::lobatto:
      fam = random_family(rng, lim, 0, 0);
      fam_t = random_family(rng, lim, 0, 0);
      break;
    case RuleKind::radau_left:
      fam = random_family(rng, lim, 1, 0);
      fam_t = random_family(rng, lim, std::nullopt, 0);
      break;
    case RuleKind::radau_right:
      fam = random_family(rng, lim, 0, 1);
      fam_t = random_family(rng, lim, 0, std::nullopt);
      break;
    case RuleKind::interior:
      fam = random_family(rng, lim, 1, 1);
      fam_t = random_family(rng, lim, 1, 1, std::uniform_int_distribution<int>(1, lim.max_degree)(rng));
      break;
  }
  const int m_min = fam.d_eps().ceil() + fam_t.d_eps().ceil() + 1;
  const int m = std::uniform_int_distribution<int>(std::max(m_min, 1), lim.max_m)(rng);
  return CompositeConfig<double>(fam, fam_t, m);
}

/// Fixed-seed sweep: every kind twice, then uniformly random configs.
inline std::vector<CompositeConfig<double>> sweep_configs(int count, std::uint64_t seed, const SweepLimits& lim = {}) {
  std::mt19937_64 rng(seed);
  std::vector<CompositeConfig<double>> out;
  for (int rep = 0; rep < 2; ++rep)
    for (RuleKind k : {RuleKind::gauss, RuleKind::lobatto, RuleKind::radau_left, RuleKind::radau_right,
                       RuleKind::interior})
      out.push_back(random_config_of_kind(k, rng, lim));
  while (static_cast<int>(out.size()) < count) out.push_back(random_config(rng, lim));
  return out;
}

}  // namespace bsquad::testing

#endif  // BSQUAD_TESTS_RANDOM_CONFIGS_HPP
