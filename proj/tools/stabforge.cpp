// Command-line front end. Reports go to stdout as JSON lines sorted by id;
// diagnostics go to stderr.
//
// Exit status: 0 every check passed, 1 some check failed, 2 invalid
// configuration or arguments, 3 a module raised an error.

#include "stabforge/errors.hpp"
#include "stabforge/mirror_numeric.hpp"
#include "stabforge/report.hpp"
#include "stabforge/scenario.hpp"
#include "stabforge/slag_tracer.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <stdexcept>
#include <iostream>
#include <string>

namespace sf = stabforge;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int emit(const std::vector<sf::ReportRecord>& records) {
  std::cout << sf::render_report(records) << std::flush;
  return sf::exit_code(records);
}

std::string fmt(sf::cplx z) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g", z.real(), z.imag());
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stabforge: stability-condition and mirror-integral checks"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the checks described by a config file");
  run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);

  sf::VerifyAllOptions vopts;
  auto* verify = app.add_subcommand("verify-all", "Run the fixed-seed suite over every module");
  verify->add_option("--window", vopts.window, "Degree window half-width")->capture_default_str();
  verify->add_option("--tol", vopts.tol, "Relative tolerance for closed-form comparisons")->capture_default_str();

  auto* slag = app.add_subcommand("slag", "Special Lagrangian paths");
  slag->require_subcommand(1);
  std::string s_a = "0", s_c = "0", s_seed = "1";
  double s_phi = 0.0;
  std::string s_out;
  auto* trace = slag->add_subcommand("trace", "Trace one path and print it as CSV");
  trace->add_option("--a", s_a, "log q as re[,im]")->capture_default_str();
  trace->add_option("--c", s_c, "constant shift as re[,im]")->capture_default_str();
  trace->add_option("--phi", s_phi, "phase in units of pi")->capture_default_str();
  trace->add_option("--seed", s_seed, "starting point as re[,im]")->capture_default_str();
  trace->add_option("--out", s_out, "write the CSV here instead of stdout");

  auto* mirror = app.add_subcommand("mirror", "Oscillatory integrals");
  mirror->require_subcommand(1);
  std::string m_a = "0", m_c = "0";
  int m_k = 0;
  auto* circle = mirror->add_subcommand("circle", "Circle integral against the Bessel series");
  circle->add_option("--a", m_a, "log q as re[,im]")->capture_default_str();
  circle->add_option("--c", m_c, "constant shift as re[,im]")->capture_default_str();
  circle->add_option("--k", m_k, "weight")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return emit(sf::run_scenario(sf::Config::load(config_path)));
    if (*verify) return emit(sf::verify_all(vopts));
    if (*trace) {
      sf::SLagProblem p;
      p.a = sf::parse_complex(s_a);
      p.c = sf::parse_complex(s_c);
      p.phi = s_phi;
      p.seed = sf::parse_complex(s_seed);
      try {
        sf::validate(p);
      } catch (const std::invalid_argument& e) {
        throw sf::Error(sf::ErrorCode::ConfigInvalid, e.what(), "slag trace");
      }
      const sf::TracedPath path = sf::trace_slag(p);
      const std::string csv = sf::path_csv(path);
      if (s_out.empty()) {
        std::cout << csv;
      } else {
        FILE* f = std::fopen(s_out.c_str(), "wb");
        if (!f) throw sf::Error(sf::ErrorCode::IOFailure, "cannot open output file", s_out);
        const bool ok = std::fwrite(csv.data(), 1, csv.size(), f) == csv.size();
        if (std::fclose(f) != 0 || !ok) throw sf::Error(sf::ErrorCode::IOFailure, "write failed", s_out);
      }
      std::cerr << "ends: " << sf::to_string(path.start_end) << " -> " << sf::to_string(path.end_end) << ", mass "
                << path.mass << ", phase drift " << path.phase_drift << "\n";
      return 0;
    }
    if (*circle) {
      const sf::LG1 m{sf::parse_complex(m_a), sf::parse_complex(m_c)};
      const auto r = sf::circle_charge(m, m_k);
      const sf::cplx oracle = sf::bessel_oracle(m, m_k);
      const double err = std::abs(r.value - oracle) / std::abs(oracle);
      sf::ReportRecord rec;
      rec.id = "mirror.circle";
      rec.module = "mirror_numeric";
      rec.operation = "circle_charge";
      rec.params = {{"a", fmt(m.a)}, {"c", fmt(m.c)}, {"k", std::to_string(m_k)}};
      rec.values = {{"re", r.value.real(), {}}, {"im", r.value.imag(), {}}, {"nodes", double(r.nodes), {}}, {"rel_err", err, 1e-9}};
      rec.status = err <= 1e-9 ? sf::Status::Pass : sf::Status::Fail;
      if (rec.status == sf::Status::Fail) rec.witness = "series value " + fmt(oracle);
      return emit({rec});
    }
  } catch (const sf::Error& e) {
    std::cerr << "stabforge: " << e.what();
    if (!e.witness().empty()) std::cerr << " [" << e.witness() << "]";
    std::cerr << "\n";
    return e.code() == sf::ErrorCode::ConfigInvalid ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "stabforge: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
