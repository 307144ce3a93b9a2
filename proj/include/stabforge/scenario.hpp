#pragma once

#include "stabforge/derived_core.hpp"
#include "stabforge/mirror_numeric.hpp"
#include "stabforge/report.hpp"
#include "stabforge/slag_tracer.hpp"

#include <string>
#include <vector>

namespace stabforge {

/// Parsers for config values; all throw ConfigInvalid.
cplx parse_complex(const std::string& text);
double parse_real(const std::string& text);
long long parse_int(const std::string& text);
/// "O(1)*Sky[2]": factor symbols joined by '*', optional [shift].
Generator parse_generator(const std::string& text);
/// Generators separated by ';', bottom of the filtration first.
FormalObject parse_object(const std::string& text);

/// Checks every key against the schema of the config's `kind`.
void validate_config(const Config& cfg);

/// Validates, then runs the pipeline for the config's kind. Module errors
/// propagate as stabforge::Error.
std::vector<ReportRecord> run_scenario(const Config& cfg);

struct VerifyAllOptions {
  int window = 3;
  double tol = 1e-9;
};

/// Reduced-size versions of every module check with fixed seeds.
std::vector<ReportRecord> verify_all(const VerifyAllOptions& opts = {});

/// Writes <dir>/<stem>_<i>.csv for each path and returns the file names.
/// Throws IOFailure.
std::vector<std::string> emit_paths(const std::vector<TracedPath>& paths, const std::string& dir,
                                    const std::string& stem = "path");

}  // namespace stabforge
