// Acceptance suite: one PASS/FAIL line per criterion, tolerances fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "bsquad/exactness.hpp"
#include "bsquad/jacobi.hpp"
#include "bsquad/oracle.hpp"
#include "support/random_configs.hpp"

using namespace bsquad;
using Clock = std::chrono::steady_clock;
using C = std::complex<double>;

namespace {

constexpr double pi = std::numbers::pi;

constexpr double tol_closed_nodes = 1e-14;
constexpr double limit_closed_seconds = 0.1;
constexpr int closed_max_m = 64;

constexpr int sweep_size = 60;
constexpr std::uint64_t sweep_seed = 20241019;
constexpr double tol_orthogonality = 1e-10;
constexpr double limit_orthogonality_seconds = 30.0;
constexpr double tol_spectrum = 1e-10;
constexpr double tol_cd = 1e-10;
constexpr double tol_exact = 1e-9;
constexpr double sharpness_floor = 1e-6;
constexpr int exactness_trials = 2;
constexpr double tol_charpoly_nodes = 1e-8;  // times 2^{m+1}
constexpr double tol_charpoly_det = 1e-8;
constexpr double tol_leading = 1e-8;
constexpr int det_samples = 20;
constexpr double tol_askey_wilson = 1e-10;
constexpr double tol_expansion = 1e-8;
constexpr double limit_total_seconds = 120.0;

int failures = 0;

void report(int id, bool ok, const std::string& name, const std::string& detail) {
  std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct SweepEntry {
  CompositeConfig<double> config;
  CompositeBasis<double> basis;
};

void criterion_closed_form() {
  double worst = 0;
  const auto t0 = Clock::now();
  for (int ep = 0; ep <= 1; ++ep)
    for (int em = 0; em <= 1; ++em)
      for (int ept = 0; ept <= 1; ++ept)
        for (int emt = 0; emt <= 1; ++emt)
          for (int m = 1; m <= closed_max_m; ++m) {
            const CompositeConfig<double> c(BSFamily<double>(ep, em, {}), BSFamily<double>(ept, emt, {}), m);
            const auto grid = solve_grid(c);
            const double den = 2 * m + ep + em + ept + emt;
            for (int l = 0; l <= m; ++l)
              worst = std::max(worst, std::abs(grid.xi(l) - pi * (2 * l + em + emt) / den));
          }
  const double secs = seconds_since(t0);
  report(1, worst < tol_closed_nodes && secs < limit_closed_seconds, "closed-form nodes",
         fmt("16 eps combinations, m = 1..%d, max |dxi| = %.3g (tol %.0e), %.4f s (limit %.1f s)", closed_max_m, worst,
             tol_closed_nodes, secs, limit_closed_seconds));
}

std::vector<SweepEntry> criterion_orthogonality(const std::vector<CompositeConfig<double>>& configs) {
  std::vector<SweepEntry> out;
  double row = 0, col = 0;
  const auto t0 = Clock::now();
  for (const auto& c : configs) {
    out.push_back({c, assemble_basis(c)});
    const auto g = gram_residuals(out.back().basis);
    row = std::max(row, g.row);
    col = std::max(col, g.col);
  }
  const double secs = seconds_since(t0);
  report(2, row < tol_orthogonality && col < tol_orthogonality && secs < limit_orthogonality_seconds,
         "orthogonality",
         fmt("%zu configs, max row residual %.3g, max column residual %.3g (tol %.0e), %.2f s (limit %.0f s)",
             configs.size(), row, col, tol_orthogonality, secs, limit_orthogonality_seconds));
  return out;
}

void criterion_spectrum(const std::vector<SweepEntry>& sweep) {
  double worst = 0;
  for (const auto& s : sweep) {
    const auto J = build_J(s.config, s.basis.fp, s.basis.fp_t);
    const auto e = oracle::tridiag_eig(J);
    std::vector<double> nodes;
    for (int l = 0; l < s.basis.grid.size(); ++l) nodes.push_back(2 * std::cos(s.basis.grid.xi(l)));
    std::sort(nodes.begin(), nodes.end());
    for (int k = 0; k < e.values.size(); ++k) worst = std::max(worst, std::abs(e.values(k) - nodes[k]));
  }
  report(3, worst < tol_spectrum, "eigen-decomposition",
         fmt("dense eigenvalues of J vs {2cos xi}, max deviation %.3g (tol %.0e)", worst, tol_spectrum));
}

void criterion_cd(const std::vector<SweepEntry>& sweep) {
  double worst = 0;
  int endpoint_nodes = 0, nodes = 0;
  for (const auto& s : sweep) {
    for (int lh = 0; lh < s.basis.grid.size(); ++lh) {
      const double xi = s.basis.grid.xi(lh);
      double direct = 0;
      for (int l = 0; l <= s.config.m(); ++l) direct += std::norm(s.basis.psi_matrix(l, lh)) * s.basis.primal(l);
      const double closed = cd_closed_form(s.config, xi);
      worst = std::max(worst, std::abs(direct - closed) / closed);
      ++nodes;
      if (xi == 0.0 || xi == pi) ++endpoint_nodes;
    }
  }
  report(4, worst < tol_cd && endpoint_nodes > 0, "Christoffel-Darboux sum",
         fmt("%d nodes (%d endpoint nodes with the factor 2), max relative deviation %.3g (tol %.0e)", nodes,
             endpoint_nodes, worst, tol_cd));
}

void criterion_exactness(const std::vector<SweepEntry>& sweep) {
  double worst = 0;
  double min_witness = INFINITY;
  int gauss = 0, degree_mismatch = 0;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const auto& s = sweep[i];
    const auto rule = build_rule(s.basis.grid);
    if (rule.exactness_degree != 2 * s.config.m() - s.config.fam_t().d_eps().twice() - 1) ++degree_mismatch;
    const auto rep = exactness_sweep(rule, exactness_trials, 1000 + i);
    worst = std::max(worst, rep.worst_exact);
    if (rule.kind == RuleKind::gauss) {
      ++gauss;
      min_witness = std::min(min_witness, rep.witness_error);
    }
  }
  // Monomial sharpness on the free gauss rule with m = 3.
  const BSFamily<double> u(1, 1, {});
  const auto small = exactness_sweep(build_rule(CompositeConfig<double>(u, u, 3)), exactness_trials);
  const bool ok = worst < tol_exact && gauss > 0 && min_witness > sharpness_floor && small.monomial_error > sharpness_floor &&
                  degree_mismatch == 0;
  report(5, ok, "quadrature exactness",
         fmt("degrees 0..D on %zu configs, max relative error %.3g (tol %.0e); sharpness: cos^8 on the m = 3 gauss "
             "rule errs by %.3g, Q_{m+1}^2 on %d gauss configs errs by >= %.3g (floor %.0e)",
             sweep.size(), worst, tol_exact, small.monomial_error, gauss, min_witness, sharpness_floor));
}

void criterion_charpoly(const std::vector<SweepEntry>& sweep) {
  double nodes = 0, det = 0, lead = 0;
  std::mt19937_64 rng(sweep_seed + 6);
  std::uniform_real_distribution<double> pick(1e-3, pi - 1e-3);
  for (const auto& s : sweep) {
    const double scale = std::ldexp(1.0, s.config.m() + 1);
    for (int lh = 0; lh < s.basis.grid.size(); ++lh)
      nodes = std::max(nodes, std::abs(charpoly_eval(s.config, s.basis.grid.xi(lh))) / scale);
    const auto J = build_J(s.config, s.basis.fp, s.basis.fp_t);
    for (int k = 0; k < det_samples; ++k) {
      const double xi = pick(rng);
      const double d = oracle::tridiag_det(J, 2 * std::cos(xi));
      det = std::max(det, std::abs(charpoly_eval(s.config, xi) - d) / std::max(std::abs(d), 1.0));
    }
    lead = std::max(lead, std::abs(charpoly_leading_coefficient(s.config) / scale - 1));
  }
  report(6, nodes < tol_charpoly_nodes && det < tol_charpoly_det && lead < tol_leading, "characteristic polynomial",
         fmt("max |Q(xi)|/2^{m+1} at nodes %.3g (tol %.0e), det identity %.3g (tol %.0e), leading coefficient %.3g "
             "(tol %.0e)",
             nodes, tol_charpoly_nodes, det, tol_charpoly_det, lead, tol_leading));
}

void criterion_bounds(const std::vector<SweepEntry>& sweep) {
  int failed = 0;
  double worst = 0;
  for (const auto& s : sweep) {
    const auto bc = check_bounds(s.basis.grid);
    if (!bc.ok()) ++failed;
    worst = std::max(worst, bc.worst_violation);
  }
  report(7, failed == 0, "node bounds",
         fmt("%zu grids, %d with a violated bracket or gap inequality (largest raw violation %.3g)", sweep.size(),
             failed, worst));
}

void criterion_askey_wilson() {
  const std::vector<C> a(4, C(0.2));
  const BSFamily<double> f(1, 1, a);
  const CompositeConfig<double> c(f, f, 6);
  const auto basis = assemble_basis(c);
  double prod = 1, pairs = 1, sum = 0, sum_inv = 0;
  for (int r = 0; r < 4; ++r) {
    prod *= a[r].real();
    sum += a[r].real();
    sum_inv += 1 / a[r].real();
    for (int s = r + 1; s < 4; ++s) pairs *= 1 - a[r].real() * a[s].real();
  }
  const double d0 = (1 - prod) / pairs, d1 = 1 / (1 - prod);
  const double expect[] = {d0, d1, std::sqrt(d1 / d0), 1 / std::sqrt(d1), (d1 - 1) * sum_inv - d1 * sum,
                           (d1 - 1) * (sum - sum_inv)};
  const auto& p = basis.fp;
  const double got[] = {p.norm(0), p.norm(1), p.a(1), p.a(2), p.b(0), p.b(1)};
  double worst = 0;
  for (int k = 0; k < 6; ++k) worst = std::max(worst, std::abs(got[k] - expect[k]));
  const auto g = gram_residuals(basis);
  const double ort = std::max(g.row, g.col);
  report(8, worst < tol_askey_wilson && ort < tol_askey_wilson, "Askey-Wilson q=0 fixture",
         fmt("Delta_0, Delta_1, a_1, a_2, b_0, b_1 max deviation %.3g, orthogonality residual %.3g (tol %.0e)", worst,
             ort, tol_askey_wilson));
}

void criterion_expansion(const std::vector<SweepEntry>& sweep) {
  double worst = 0;
  int applicable = 0;
  auto check = [&](const CompositeConfig<double>& c, const PolynomialFamily<double>& fp) {
    const auto e = charpoly_expansion_check(c, fp);
    if (!e.applicable) return;
    ++applicable;
    worst = std::max(worst, e.residual);
  };
  for (const auto& s : sweep) check(s.config, s.basis.fp);
  // Configurations built to meet 2 d~_eps~ <= m - 1 - d_eps with nontrivial tilde poles.
  std::mt19937_64 rng(sweep_seed + 9);
  for (int t = 0; t < 10; ++t) {
    const auto fam = testing::random_family(rng, {}, std::nullopt, std::nullopt);
    const auto fam_t = testing::random_family(rng, {});
    const int need = 2 * fam_t.d_eps().twice() + fam.d_eps().twice() + 2;  // 2m >= need
    const int m = std::max({(need + 1) / 2, fam.d_eps().ceil() + fam_t.d_eps().ceil() + 1, 1}) +
                  static_cast<int>(rng() % 6);
    const CompositeConfig<double> c(fam, fam_t, m);
    check(c, gram_schmidt_low(fam));
  }
  report(9, applicable > 0 && worst < tol_expansion, "characteristic polynomial expansion",
         fmt("%d applicable configs, max |c_{2m+1-k} - e_k| = %.3g (tol %.0e)", applicable, worst, tol_expansion));
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  criterion_closed_form();
  const auto configs = testing::sweep_configs(sweep_size, sweep_seed);
  const auto sweep = criterion_orthogonality(configs);
  criterion_spectrum(sweep);
  criterion_cd(sweep);
  criterion_exactness(sweep);
  criterion_charpoly(sweep);
  criterion_bounds(sweep);
  criterion_askey_wilson();
  criterion_expansion(sweep);
  const double secs = seconds_since(t0);
  std::printf("total %.2f s (limit %.0f s); %d criteria failed\n", secs, limit_total_seconds, failures);
  return (failures == 0 && secs < limit_total_seconds) ? 0 : 1;
}
