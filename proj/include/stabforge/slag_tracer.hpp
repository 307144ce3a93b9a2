#pragma once

#include "stabforge/mirror_numeric.hpp"

#include <optional>
#include <string>
#include <vector>

namespace stabforge {

// Curves in C^x along which Omega = exp(z + c + q/z) dz/z has constant phase
// pi*phi. The ODE is dz/dt = e^{i pi phi} / rho(z) with rho(z) = exp(z + c + q/z)/z,
// so t is the Omega-mass. Integration runs in Euclidean arclength s with t
// carried along as a third state component, which caps |dz/ds| at 1.

struct SLagProblem {
  cplx a{0.0, 0.0};
  cplx c{0.0, 0.0};
  double phi = 0.0;
  cplx seed{1.0, 0.0};
  double rel_tol = 1e-12;
  double abs_tol = 1e-12;
  double max_arclength = 500.0;
  double guard = 1e-8;
  double max_step = 0.5;      // in arclength, further limited to 0.1 |z|
  double end_low = -36.0;     // Re(W + c) at which an end with vanishing density is declared
  double end_high = 25.0;     // Re(W + c) at which the path is declared escaping
  double return_delta = 1e-6; // closed-orbit return distance, relative to 1 + |seed|
  bool truncation_is_error = false;
};

void validate(const SLagProblem& p);

enum class EndClass { LeftInfinity, ZeroPuncture, Escaping, ClosedOrbit, Truncated };

std::string to_string(EndClass e);

struct PathSample {
  double t = 0.0;
  cplx z;
  cplx zdot;  // dz/dt
};

struct TracedPath {
  cplx a, c;
  double phi = 0.0;
  std::vector<PathSample> samples;  // increasing t
  double mass = 0.0;                // t extent
  double mass_quadrature = 0.0;     // |sum of segment integrals of Omega|
  cplx omega_integral;              // sum of segment integrals, closing chord included for orbits
  double mass_identity_err = 0.0;   // |mass_quadrature - mass| / mass
  double phase_drift = 0.0;         // max over segments of |arg(int Omega)/pi - phi| mod 2
  EndClass start_end = EndClass::Truncated;  // end reached going backwards in t
  EndClass end_end = EndClass::Truncated;    // end reached going forwards
  double return_distance = -1.0;             // distance at the first return to the section, -1 if none
  std::size_t steps = 0;

  bool closed() const { return end_end == EndClass::ClosedOrbit; }
  bool accepted(double drift_tol = 1e-6) const { return phase_drift <= drift_tol; }
};

/// Omega density rho(z) = exp(z + c + q/z) / z.
cplx omega_density(cplx a, cplx c, cplx z);

/// Traces both directions from the seed. Closed orbits are detected on the
/// forward leg by the return to the line through the seed normal to the flow.
TracedPath trace_slag(const SLagProblem& p);

/// Independent traces fanned out over worker threads; results keep input order.
std::vector<TracedPath> trace_many(const std::vector<SLagProblem>& problems);
std::vector<TracedPath> trace_many_serial(const std::vector<SLagProblem>& problems);

struct ClosedScanPoint {
  double r = 0.0;
  double return_distance = -1.0;  // negative when the path never returned
};

struct ClosedSearch {
  std::vector<ClosedScanPoint> scan;
  std::optional<TracedPath> orbit;  // the first seed whose first return lies within delta
};

/// Seeds r e^{i theta} for `count` values of r spread over [r_lo, r_hi].
ClosedSearch find_closed_slag(cplx a, cplx c, double phi, double theta, double r_lo, double r_hi, int count, double delta,
                              const SLagProblem& base = {});

struct PhaseCheckReport {
  bool ok = true;
  std::size_t samples = 0;
  double max_phase_err = 0.0;
  double max_mass_err = 0.0;
  std::string witness;
};

/// Evaluates prod_i rho_i(z_i) zdot_i at sample tuples taken at matching
/// fractions along each path and compares its argument with pi * sum(phi_i).
PhaseCheckReport product_phase_check(const std::vector<TracedPath>& paths, int sample_count, double tol_per_path = 1e-6);

/// CSV text for one path: commented header with a, c, phi, then
/// t, Re z, Im z, Re(rho zdot), Im(rho zdot), cumulative mass.
std::string path_csv(const TracedPath& path);

}  // namespace stabforge
