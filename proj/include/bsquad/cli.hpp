#ifndef BSQUAD_CLI_HPP
#define BSQUAD_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "bsquad/params.hpp"

namespace bsquad::cli {

enum class Format { json, csv };

struct RunConfig {
  CompositeConfig<double> config;
  double tol = 1e-13;
  Format format = Format::json;
};

/// Parses the config document; messages name the offending JSON path.
RunConfig parse_config(const nlohmann::json& doc);

/// Writes `value` with every number at 17 significant digits.
void write_json(std::ostream& os, const nlohmann::ordered_json& value);

/// %.17g, with non-finite values spelled as JSON-safe strings.
std::string format_number(double x);

/// Entry point shared by the executable and the tests.  `args` excludes the
/// program name.  Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bsquad::cli

#endif  // BSQUAD_CLI_HPP
