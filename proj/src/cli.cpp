#include "bsquad/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include "bsquad/composite_basis.hpp"
#include "bsquad/jacobi.hpp"
#include "bsquad/node_solver.hpp"
#include "bsquad/oracle.hpp"
#include "bsquad/quadrature.hpp"

namespace bsquad::cli {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

/// Exit codes.
constexpr int exit_ok = 0;
constexpr int exit_check_failed = 1;
constexpr int exit_invalid = 2;
constexpr int exit_convergence = 3;

class ConfigError : public ParameterError {
 public:
  ConfigError(const std::string& path, const std::string& what) : ParameterError(path + ": " + what) {}
};

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path + "." + key, "missing");
  return *it;
}

int parse_flag(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected 0 or 1");
  return v.get<int>();
}

BSFamily<double> parse_family(const json& v, const std::string& path) {
  const int ep = parse_flag(require(v, "eps_plus", path), path + ".eps_plus");
  const int em = parse_flag(require(v, "eps_minus", path), path + ".eps_minus");
  std::vector<std::complex<double>> alpha;
  if (v.contains("alpha")) {
    const json& a = v.at("alpha");
    if (!a.is_array()) throw ConfigError(path + ".alpha", "expected an array");
    for (std::size_t r = 0; r < a.size(); ++r) {
      const std::string at = path + ".alpha[" + std::to_string(r) + "]";
      const json& e = a[r];
      if (e.is_number()) {
        alpha.emplace_back(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        alpha.emplace_back(e[0].get<double>(), e[1].get<double>());
      } else {
        throw ConfigError(at, "expected a number or an [re, im] pair");
      }
    }
  }
  try {
    return BSFamily<double>(ep, em, std::move(alpha));
  } catch (const ParameterError& e) {
    throw ConfigError(path, e.what());
  }
}

Format parse_format(const std::string& s, const std::string& path) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  throw ConfigError(path, "format must be \"json\" or \"csv\", got \"" + s + "\"");
}

void write_json_impl(std::ostream& os, const ojson& v) {
  switch (v.type()) {
    case ojson::value_t::number_float:
      os << format_number(v.get<double>());
      break;
    case ojson::value_t::array: {
      os << '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ',';
        write_json_impl(os, v[i]);
      }
      os << ']';
      break;
    }
    case ojson::value_t::object: {
      os << '{';
      bool first = true;
      for (const auto& [k, x] : v.items()) {
        if (!first) os << ',';
        first = false;
        os << ojson(k).dump() << ':';
        write_json_impl(os, x);
      }
      os << '}';
      break;
    }
    default:
      os << v.dump();
  }
}

ojson array_of(const VectorX<double>& v) {
  ojson a = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t[]");
    const auto e = item.find_last_not_of(" \t[]");
    if (b == std::string::npos) continue;
    const std::string tok = item.substr(b, e - b + 1);
    std::size_t used = 0;
    double x = 0;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw ConfigError("--f-coeffs", "cannot parse \"" + tok + "\" as a number");
    out.push_back(x);
  }
  if (out.empty()) throw ConfigError("--f-coeffs", "empty coefficient list");
  return out;
}

struct Options {
  std::string config_path;
  std::optional<std::string> format;
  std::optional<double> tol;
  std::string f_coeffs;
  int mesh = 0;
  std::string out_path;
  double check_tol = 1e-9;
};

// ---------------------------------------------------------------- commands

struct Emitted {
  ojson doc;
  std::vector<std::string> csv;  ///< used when the format is csv
  bool ok = true;
};

Emitted cmd_rule(const RunConfig& rc) {
  const auto rule = build_rule(rc.config, rc.tol);
  Emitted e;
  e.doc = {{"m", rule.config.m()},
           {"nodes", array_of(rule.nodes)},
           {"dual_weights", array_of(rule.weights)},
           {"rho_at_nodes", array_of(rule.rho_at_nodes)},
           {"exactness_degree", rule.exactness_degree},
           {"kind", std::string(to_string(rule.kind))}};
  e.csv.push_back("node,weight,rho");
  for (int l = 0; l < rule.size(); ++l)
    e.csv.push_back(format_number(rule.nodes(l)) + "," + format_number(rule.weights(l)) + "," +
                    format_number(rule.rho_at_nodes(l)));
  return e;
}

Emitted cmd_nodes(const RunConfig& rc) {
  const auto grid = solve_grid(rc.config, rc.tol);
  const auto bc = check_bounds(grid);
  Emitted e;
  e.doc = {{"m", rc.config.m()},
           {"nodes", array_of(grid.xi)},
           {"residuals", array_of(grid.residual)},
           {"bracket_lo", array_of(grid.lo)},
           {"bracket_hi", array_of(grid.hi)},
           {"kappa_plus", grid.kappa_plus},
           {"kappa_minus", grid.kappa_minus},
           {"brackets_ok", bc.brackets_ok},
           {"gaps_ok", bc.gaps_ok}};
  e.csv.push_back("l_hat,xi,residual,lo,hi");
  for (int l = 0; l < grid.size(); ++l)
    e.csv.push_back(std::to_string(l) + "," + format_number(grid.xi(l)) + "," + format_number(grid.residual(l)) +
                    "," + format_number(grid.lo(l)) + "," + format_number(grid.hi(l)));
  e.ok = bc.ok();
  return e;
}

Emitted cmd_verify(const RunConfig& rc, double check_tol) {
  constexpr double pi = std::numbers::pi;
  const auto& config = rc.config;
  const auto basis = assemble_basis(config, rc.tol);
  const auto gram = gram_residuals(basis);
  const auto L = build_L(config, basis.fp, basis.fp_t);
  const auto J = build_J(config, basis.fp, basis.fp_t);
  const double eig = eig_check(basis, L);
  const double sim = similarity_residual(L, J, basis.primal);

  // Dense spectrum against {2cos xi}, as sorted multisets.
  const auto dense = oracle::tridiag_eig(J);
  std::vector<double> nodes2;
  for (int l = 0; l < basis.grid.size(); ++l) nodes2.push_back(2 * std::cos(basis.grid.xi(l)));
  std::sort(nodes2.begin(), nodes2.end());
  double spectrum = 0;
  for (int k = 0; k < dense.values.size(); ++k) spectrum = std::max(spectrum, std::abs(dense.values(k) - nodes2[k]));

  double cd = 0, phase_res = 0, charpoly_nodes = 0;
  const double q_scale = std::ldexp(1.0, config.m() + 1);
  for (int l = 0; l < basis.grid.size(); ++l) {
    const double xi = basis.grid.xi(l);
    const double closed = cd_closed_form(config, xi);
    double direct = 0;
    for (int k = 0; k <= config.m(); ++k) direct += std::norm(basis.psi_matrix(k, l)) * basis.primal(k);
    cd = std::max(cd, std::abs(direct - closed) / closed);
    phase_res = std::max(phase_res, verify_phase_condition(config, xi));
    if (!internal::is_pole(config.fam(), xi))
      charpoly_nodes = std::max(charpoly_nodes, std::abs(charpoly_eval(config, xi)) / q_scale);
  }

  // det(2cos xi - J) at fixed interior sample points.
  double det_res = 0;
  for (int j = 0; j < 20; ++j) {
    const double xi = pi * (j + 0.37) / 20;
    const double det = oracle::tridiag_det(J, 2 * std::cos(xi));
    det_res = std::max(det_res, std::abs(charpoly_eval(config, xi) - det) / std::max(1.0, std::abs(det)));
  }
  const double lead = std::abs(charpoly_leading_coefficient(config) / q_scale - 1);
  const auto bc = check_bounds(basis.grid);

  Emitted e;
  e.doc = {{"m", config.m()},
           {"gram_row_residual", gram.row},
           {"gram_col_residual", gram.col},
           {"eigen_residual", eig},
           {"similarity_residual", sim},
           {"spectrum_residual", spectrum},
           {"cd_residual", cd},
           {"charpoly_node_residual", charpoly_nodes},
           {"charpoly_det_residual", det_res},
           {"charpoly_leading_residual", lead},
           {"phase_residual", phase_res},
           {"bounds_ok", bc.ok()},
           {"check_tol", check_tol}};
  const auto expansion = charpoly_expansion_check(config, basis.fp);
  if (expansion.applicable) e.doc["expansion_residual"] = expansion.residual;

  bool ok = bc.ok();
  for (const char* key : {"gram_row_residual", "gram_col_residual", "eigen_residual", "similarity_residual",
                          "spectrum_residual", "cd_residual", "charpoly_node_residual", "charpoly_det_residual",
                          "charpoly_leading_residual", "phase_residual", "expansion_residual"})
    if (e.doc.contains(key) && !(e.doc[key].get<double>() < check_tol)) ok = false;
  e.doc["status"] = ok ? "ok" : "fail";
  e.ok = ok;
  e.csv.push_back("check,value");
  for (const auto& [k, v] : e.doc.items()) {
    if (v.is_number_float())
      e.csv.push_back(k + "," + format_number(v.get<double>()));
    else if (v.is_string())
      e.csv.push_back(k + "," + v.get<std::string>());
    else
      e.csv.push_back(k + "," + v.dump());
  }
  return e;
}

Emitted cmd_integrate(const RunConfig& rc, const std::string& coeffs) {
  if (coeffs.empty()) throw ConfigError("--f-coeffs", "required for integrate");
  const std::vector<double> c = parse_list(coeffs);
  const auto rule = build_rule(rc.config, rc.tol);
  const RationalIntegrand<double> f{Eigen::Map<const VectorX<double>>(c.data(), static_cast<Eigen::Index>(c.size())),
                                    rc.config.fam()};
  const auto res = integrate_rational(rule, f);
  Emitted e;
  e.doc = {{"value", res.value},
           {"exact", res.exact},
           {"degree", res.degree},
           {"exactness_degree", rule.exactness_degree},
           {"kind", std::string(to_string(rule.kind))}};
  e.csv.push_back("value,exact,degree,exactness_degree");
  e.csv.push_back(format_number(res.value) + "," + (res.exact ? "true" : "false") + "," + std::to_string(res.degree) +
                  "," + std::to_string(rule.exactness_degree));
  return e;
}

Emitted cmd_charpoly(const RunConfig& rc, int mesh) {
  constexpr double pi = std::numbers::pi;
  Emitted e;
  if (mesh > 0) {
    VectorX<double> xi(mesh), q(mesh);
    for (int j = 0; j < mesh; ++j) {
      xi(j) = pi * (j + 0.5) / mesh;
      q(j) = charpoly_eval(rc.config, xi(j));
    }
    e.doc = {{"m", rc.config.m()}, {"xi", array_of(xi)}, {"q", array_of(q)}};
    e.csv.push_back("xi,q");
    for (int j = 0; j < mesh; ++j) e.csv.push_back(format_number(xi(j)) + "," + format_number(q(j)));
  } else {
    const auto c = charpoly_chebyshev_coeffs(rc.config, rc.config.m() + 2);
    e.doc = {{"m", rc.config.m()},
             {"cosine_coeffs", array_of(c)},
             {"leading_coefficient", charpoly_leading_coefficient(rc.config)}};
    e.csv.push_back("k,coeff");
    for (int k = 0; k < c.size(); ++k) e.csv.push_back(std::to_string(k) + "," + format_number(c(k)));
  }
  return e;
}

Emitted cmd_jacobi(const RunConfig& rc) {
  const auto fp = gram_schmidt_low(rc.config.fam());
  const auto fp_t = gram_schmidt_low(rc.config.fam_t());
  const auto J = build_J(rc.config, fp, fp_t);
  const auto L = build_L(rc.config, fp, fp_t);
  Emitted e;
  e.doc = {{"m", rc.config.m()},
           {"diag", array_of(J.diag)},
           {"offdiag", array_of(J.sub)},
           {"L", {{"sub", array_of(L.sub)}, {"diag", array_of(L.diag)}, {"sup", array_of(L.sup)}}}};
  e.csv.push_back("l,diag,offdiag");
  for (int l = 0; l < J.size(); ++l)
    e.csv.push_back(std::to_string(l) + "," + format_number(J.diag(l)) + "," +
                    (l < J.size() - 1 ? format_number(J.sub(l)) : std::string()));
  return e;
}

void emit_error(std::ostream& out, const std::string& kind, const std::string& message) {
  write_json(out, ojson{{"error", message}, {"kind", kind}});
  out << '\n';
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "\"nan\"";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_json(std::ostream& os, const ojson& value) { write_json_impl(os, value); }

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("$", "expected a JSON object");
  const BSFamily<double> fam = parse_family(require(doc, "family", "$"), "$.family");
  const BSFamily<double> fam_t = parse_family(require(doc, "family_tilde", "$"), "$.family_tilde");
  const json& m = require(doc, "m", "$");
  if (!m.is_number_integer()) throw ConfigError("$.m", "expected an integer");
  RunConfig rc{[&] {
    try {
      return CompositeConfig<double>(fam, fam_t, m.get<int>());
    } catch (const ParameterError& e) {
      throw ConfigError("$.m", e.what());
    }
  }()};
  if (doc.contains("tol")) {
    if (!doc["tol"].is_number() || !(doc["tol"].get<double>() > 0)) throw ConfigError("$.tol", "expected a positive number");
    rc.tol = doc["tol"].get<double>();
  }
  if (doc.contains("format")) {
    if (!doc["format"].is_string()) throw ConfigError("$.format", "expected a string");
    rc.format = parse_format(doc["format"].get<std::string>(), "$.format");
  }
  return rc;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Composite Bernstein-Szego quadrature rules"};
  app.require_subcommand(1);
  Options opt;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"rule", "nodes, dual weights and Chebyshev weight values of the quadrature rule"},
      {"nodes", "solved nodes with residuals and bracket certificates"},
      {"verify", "residual report for orthogonality, spectrum, CD sums and the characteristic polynomial"},
      {"integrate", "integrate f(cos xi) / prod(1 + 2 alpha cos xi + alpha^2) against the Chebyshev weight"},
      {"charpoly", "characteristic polynomial samples (--mesh N) or its cosine coefficients"},
      {"jacobi", "bands of the symmetric Jacobi matrix"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config_path, "JSON configuration file")->required();
    sub->add_option("--format", opt.format, "json or csv");
    sub->add_option("--tol", opt.tol, "node solver tolerance");
    sub->add_option("--out", opt.out_path, "write the document here instead of stdout");
    if (name == "integrate") sub->add_option("--f-coeffs", opt.f_coeffs, "Chebyshev-T coefficients, comma separated");
    if (name == "charpoly") sub->add_option("--mesh", opt.mesh, "number of midpoint samples on (0, pi)");
    if (name == "verify") sub->add_option("--check-tol", opt.check_tol, "pass threshold for every residual");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    emit_error(out, "usage", e.what());
    return exit_invalid;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    std::ifstream in(opt.config_path);
    if (!in) throw ConfigError(opt.config_path, "cannot open config file");
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError(opt.config_path, std::string("invalid JSON: ") + e.what());
    }
    RunConfig rc = parse_config(doc);
    if (opt.tol) {
      if (!(*opt.tol > 0)) throw ConfigError("--tol", "expected a positive number");
      rc.tol = *opt.tol;
    }
    if (opt.format) rc.format = parse_format(*opt.format, "--format");

    Emitted e;
    if (command == "rule")
      e = cmd_rule(rc);
    else if (command == "nodes")
      e = cmd_nodes(rc);
    else if (command == "verify")
      e = cmd_verify(rc, opt.check_tol);
    else if (command == "integrate")
      e = cmd_integrate(rc, opt.f_coeffs);
    else if (command == "charpoly")
      e = cmd_charpoly(rc, opt.mesh);
    else
      e = cmd_jacobi(rc);

    std::ofstream file;
    if (!opt.out_path.empty()) {
      file.open(opt.out_path, std::ios::binary);
      if (!file) throw ConfigError(opt.out_path, "cannot open output file");
    }
    std::ostream& dst = opt.out_path.empty() ? out : file;
    if (rc.format == Format::json) {
      write_json(dst, e.doc);
      dst << '\n';
    } else {
      for (const auto& line : e.csv) dst << line << '\n';
    }
    return e.ok ? exit_ok : exit_check_failed;
  } catch (const ParameterError& e) {
    emit_error(out, "validation", e.what());
  } catch (const DomainError& e) {
    emit_error(out, "domain", e.what());
  } catch (const ConvergenceError& e) {
    emit_error(out, "convergence", e.what());
    return exit_convergence;
  } catch (const std::exception& e) {
    emit_error(out, "internal", e.what());
    err << "bsquad: " << e.what() << '\n';
    return exit_check_failed;
  }
  return exit_invalid;
}

}  // namespace bsquad::cli
