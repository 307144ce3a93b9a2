#include "stabforge/slag_tracer.hpp"
#include "stabforge/errors.hpp"
#include "stabforge/parallel.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>

namespace stabforge {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 3>;  // Re z, Im z, t
constexpr double kPi = std::numbers::pi;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt(cplx z) { return fmt(z.real()) + "," + fmt(z.imag()); }

double wrap_phase(double x) {
  // Representative of x mod 2 in (-1, 1].
  double r = std::fmod(x, 2.0);
  if (r > 1.0) r -= 2.0;
  if (r <= -1.0) r += 2.0;
  return r;
}

// e^{i pi phi}, with phi and phi + 1 giving exactly opposite values whenever
// the reduction of phi mod 1 is exact (for instance dyadic phases).
cplx phase_unit(double phi) {
  double r = std::fmod(phi, 2.0);
  if (r < 0.0) r += 2.0;
  return r >= 1.0 ? -std::polar(1.0, kPi * (r - 1.0)) : std::polar(1.0, kPi * r);
}

// Flow in arclength: dz/ds = dir * F/|F|, dt/ds = dir / |F| with
// F = e^{i pi phi} z e^{-(z + c + q/z)}.
struct Flow {
  cplx q, c;
  cplx rot;  // e^{i pi phi}
  double dir;

  void operator()(const State& x, State& dxds, double /*s*/) const {
    const cplx z{x[0], x[1]};
    const cplx w = z + c + q / z;
    const double az = std::abs(z);
    const cplx unit = rot * (z / az) * std::polar(1.0, -w.imag());
    dxds[0] = dir * unit.real();
    dxds[1] = dir * unit.imag();
    dxds[2] = dir * std::exp(std::min(w.real(), 700.0)) / az;
  }
};

struct Section {
  cplx origin;
  cplx line;     // direction of the section line
  double orient; // makes g increase along the flow at the seed
  double g(cplx z) const { return orient * ((z - origin) * std::conj(line)).imag(); }
};

struct Leg {
  std::vector<State> states;
  EndClass end = EndClass::Truncated;
  double return_distance = -1.0;
  std::size_t steps = 0;
};

Leg trace_leg(const SLagProblem& p, double dir, const Section* section, bool stop_on_return = false) {
  const cplx q = std::exp(p.a);
  const Flow flow{q, p.c, phase_unit(p.phi), dir};
  auto stepper = odeint::make_controlled(p.abs_tol, p.rel_tol, odeint::runge_kutta_dopri5<State>());
  odeint::runge_kutta_dopri5<State> single;

  Leg leg;
  State x{p.seed.real(), p.seed.imag(), 0.0};
  leg.states.push_back(x);
  double s = 0.0;
  double ds = 1e-3 * std::min(1.0, std::abs(p.seed));
  const double delta = p.return_delta * (1.0 + std::abs(p.seed));
  double g_prev = 0.0;

  while (true) {
    const cplx z{x[0], x[1]};
    const double cap = std::min(p.max_step, 0.1 * std::abs(z));
    ds = std::min(ds, cap);
    State trial = x;
    double s_trial = s;
    const double ds_used = ds;
    if (stepper.try_step(flow, trial, s_trial, ds) == odeint::fail) {
      if (ds < 1e-14 * (1.0 + s))
        throw Error(ErrorCode::StepCollapse, "arclength step underflow", "z " + fmt(z) + " s " + fmt(s));
      continue;
    }
    ++leg.steps;
    const cplx zn{trial[0], trial[1]};
    if (std::abs(zn) < p.guard)
      throw Error(ErrorCode::StepCollapse, "path entered the guard disc around 0", "z " + fmt(zn));

    if (section) {
      const double g_new = section->g(zn);
      if (g_prev < 0.0 && g_new >= 0.0) {
        // Illinois iteration on the step length that lands on the section.
        double lo = 0.0, hi = ds_used, glo = g_prev, ghi = g_new;
        State hit = trial, dxdt, dxdt_out;
        flow(x, dxdt, s);
        for (int it = 0; it < 80 && hi - lo > 1e-15 * ds_used; ++it) {
          const double h = hi - (ghi * (hi - lo)) / (ghi - glo);
          State out;
          single.do_step(flow, x, dxdt, s, out, dxdt_out, h);
          const double gh = section->g({out[0], out[1]});
          hit = out;
          if (gh == 0.0) break;
          if (gh < 0.0) {
            lo = h;
            glo = gh;
            ghi *= 0.5;
          } else {
            hi = h;
            ghi = gh;
            glo *= 0.5;
          }
        }
        const double dist = std::abs(cplx{hit[0], hit[1]} - section->origin);
        if (leg.return_distance < 0.0) leg.return_distance = dist;
        if (stop_on_return) return leg;
        if (dist <= delta) {
          leg.return_distance = dist;
          leg.states.push_back(hit);
          leg.end = EndClass::ClosedOrbit;
          return leg;
        }
      }
      g_prev = g_new;
    }

    x = trial;
    s = s_trial;
    leg.states.push_back(x);
    const cplx w = zn + p.c + q / zn;
    if (w.real() <= p.end_low) {
      leg.end = std::abs(zn) >= std::abs(q / zn) ? EndClass::LeftInfinity : EndClass::ZeroPuncture;
      return leg;
    }
    if (w.real() >= p.end_high) {
      leg.end = EndClass::Escaping;
      return leg;
    }
    if (s >= p.max_arclength) {
      if (p.truncation_is_error)
        throw Error(ErrorCode::Truncated, "maximum arclength reached", "z " + fmt(zn) + " s " + fmt(s));
      leg.end = EndClass::Truncated;
      return leg;
    }
  }
}

// Integral of rho dz along the chord [za, zb]; rho is holomorphic on C^x so
// this equals the integral along the traced arc between the same points.
cplx chord_integral(cplx a, cplx c, cplx za, cplx zb) {
  using G = boost::math::quadrature::gauss<double, 20>;
  const cplx q = std::exp(a);
  const double rmin = std::min(std::abs(za), std::abs(zb));
  const double scale = std::abs(zb - za) * (1.0 + std::abs(q) / (rmin * rmin));
  const int pieces = std::clamp(static_cast<int>(scale), 1, 256);
  cplx sum = 0.0;
  for (int j = 0; j < pieces; ++j) {
    const cplx u0 = za + (zb - za) * (static_cast<double>(j) / pieces);
    const cplx u1 = za + (zb - za) * (static_cast<double>(j + 1) / pieces);
    const cplx mid = 0.5 * (u0 + u1), half = 0.5 * (u1 - u0);
    sum += G::integrate([&](double x) { return omega_density(a, c, mid + half * x) * half; }, -1.0, 1.0);
  }
  return sum;
}

}  // namespace

std::string to_string(EndClass e) {
  switch (e) {
    case EndClass::LeftInfinity: return "left-infinity";
    case EndClass::ZeroPuncture: return "zero-puncture";
    case EndClass::Escaping: return "escaping";
    case EndClass::ClosedOrbit: return "closed-orbit";
    case EndClass::Truncated: return "truncated";
  }
  return "unknown";
}

void validate(const SLagProblem& p) {
  if (p.seed == cplx{0.0, 0.0}) throw std::invalid_argument("seed must be nonzero");
  if (!(p.rel_tol > 0.0) || !(p.abs_tol > 0.0) || !(p.max_arclength > 0.0) || !(p.guard > 0.0) || !(p.max_step > 0.0) ||
      !(p.return_delta > 0.0))
    throw std::invalid_argument("tolerances must be positive");
  if (std::abs(p.seed) <= p.guard) throw std::invalid_argument("seed lies inside the guard disc");
}

cplx omega_density(cplx a, cplx c, cplx z) { return std::exp(z + c + std::exp(a) / z) / z; }

namespace {

TracedPath assemble(const SLagProblem& p, const Leg& back, const Leg& fwd) {
  TracedPath out;
  out.a = p.a;
  out.c = p.c;
  out.phi = p.phi;
  out.start_end = fwd.end == EndClass::ClosedOrbit ? EndClass::ClosedOrbit : back.end;
  out.end_end = fwd.end;
  out.return_distance = fwd.return_distance;
  out.steps = back.steps + fwd.steps;

  const cplx q = std::exp(p.a), rot = phase_unit(p.phi);
  auto sample = [&](const State& s) {
    const cplx z{s[0], s[1]};
    const cplx zdot = rot * z * std::exp(-(z + p.c + q / z));
    return PathSample{s[2], z, zdot};
  };
  for (std::size_t i = back.states.size(); i-- > 1;) out.samples.push_back(sample(back.states[i]));
  for (const State& s : fwd.states) out.samples.push_back(sample(s));

  out.mass = out.samples.back().t - out.samples.front().t;
  cplx total = 0.0;
  for (std::size_t i = 0; i + 1 < out.samples.size(); ++i) {
    const cplx seg = chord_integral(p.a, p.c, out.samples[i].z, out.samples[i + 1].z);
    total += seg;
    if (std::abs(seg) > 0.0)
      out.phase_drift = std::max(out.phase_drift, std::abs(wrap_phase(std::arg(seg) / kPi - p.phi)));
  }
  if (out.closed()) total += chord_integral(p.a, p.c, out.samples.back().z, out.samples.front().z);
  out.omega_integral = total;
  out.mass_quadrature = std::abs(total);
  out.mass_identity_err = out.mass > 0.0 ? std::abs(total - rot * out.mass) / out.mass : 0.0;
  return out;
}

TracedPath trace_with_section(const SLagProblem& p, const Section& sec) {
  validate(p);
  const Leg fwd = trace_leg(p, 1.0, &sec);
  if (fwd.end == EndClass::ClosedOrbit) return assemble(p, Leg{{State{p.seed.real(), p.seed.imag(), 0.0}}}, fwd);
  const Leg back = trace_leg(p, -1.0, nullptr);
  return assemble(p, back, fwd);
}

Section section_for(const SLagProblem& p, cplx line) {
  const cplx q = std::exp(p.a);
  const cplx flow = phase_unit(p.phi) * p.seed * std::exp(-(p.seed + p.c + q / p.seed));
  Section sec{p.seed, line, 1.0};
  const double slope = (flow * std::conj(line)).imag();
  sec.orient = slope >= 0.0 ? 1.0 : -1.0;
  return sec;
}

}  // namespace

TracedPath trace_slag(const SLagProblem& p) {
  validate(p);
  const cplx q = std::exp(p.a);
  const cplx flow = phase_unit(p.phi) * p.seed * std::exp(-(p.seed + p.c + q / p.seed));
  // Section normal to the flow at the seed.
  return trace_with_section(p, section_for(p, cplx{0.0, 1.0} * flow / std::abs(flow)));
}

std::vector<TracedPath> trace_many_serial(const std::vector<SLagProblem>& problems) {
  std::vector<TracedPath> out;
  out.reserve(problems.size());
  for (const auto& p : problems) out.push_back(trace_slag(p));
  return out;
}

std::vector<TracedPath> trace_many(const std::vector<SLagProblem>& problems) {
  const long count = static_cast<long>(problems.size());
  std::vector<TracedPath> out(problems.size());
  std::vector<std::exception_ptr> errors(problems.size());
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
  for (long i = 0; i < count; ++i) {
    try {
      out[i] = trace_slag(problems[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

ClosedSearch find_closed_slag(cplx a, cplx c, double phi, double theta, double r_lo, double r_hi, int count, double delta,
                              const SLagProblem& base) {
  if (!(r_lo > 0.0) || !(r_hi >= r_lo) || count < 1) throw std::invalid_argument("search ray must avoid 0");
  ClosedSearch out;
  const cplx dir = std::polar(1.0, theta);
  for (int j = 0; j < count; ++j) {
    const double r = count == 1 ? r_lo : r_lo + (r_hi - r_lo) * j / (count - 1);
    SLagProblem p = base;
    p.a = a;
    p.c = c;
    p.phi = phi;
    p.seed = r * dir;
    ClosedScanPoint pt{r, -1.0};
    try {
      validate(p);
      const Section sec = section_for(p, dir);
      pt.return_distance = trace_leg(p, 1.0, &sec, true).return_distance;
    } catch (const Error&) {
      pt.return_distance = -1.0;
    }
    out.scan.push_back(pt);
    if (!out.orbit && pt.return_distance >= 0.0 && pt.return_distance <= delta) {
      p.return_delta = delta / (1.0 + r);
      try {
        out.orbit = trace_with_section(p, section_for(p, dir));
        if (!out.orbit->closed()) out.orbit.reset();
      } catch (const Error&) {
        out.orbit.reset();
      }
    }
  }
  return out;
}

PhaseCheckReport product_phase_check(const std::vector<TracedPath>& paths, int sample_count, double tol_per_path) {
  PhaseCheckReport rep;
  if (paths.empty() || sample_count < 1) return rep;
  double phase_sum = 0.0;
  for (const auto& pth : paths) {
    if (pth.samples.empty()) throw std::invalid_argument("product_phase_check needs nonempty paths");
    phase_sum += pth.phi;
  }
  const double tol = tol_per_path * static_cast<double>(paths.size());
  for (int j = 0; j < sample_count; ++j) {
    const double f = (j + 0.5) / sample_count;
    cplx prod = 1.0;
    double norm_prod = 1.0;
    std::string where;
    for (std::size_t i = 0; i < paths.size(); ++i) {
      const auto& pth = paths[i];
      const std::size_t idx = static_cast<std::size_t>(f * static_cast<double>(pth.samples.size() - 1));
      const PathSample& sm = pth.samples[idx];
      const cplx rho = omega_density(pth.a, pth.c, sm.z);
      prod *= rho * sm.zdot;
      norm_prod *= std::abs(rho) * std::abs(sm.zdot);
      where += (i ? ";" : "") + std::to_string(i) + "@" + std::to_string(idx);
    }
    ++rep.samples;
    const double perr = std::abs(wrap_phase(std::arg(prod) / kPi - phase_sum));
    const double merr = std::abs(std::abs(prod) - norm_prod) / norm_prod;
    rep.max_phase_err = std::max(rep.max_phase_err, perr);
    rep.max_mass_err = std::max(rep.max_mass_err, merr);
    if ((perr > tol || merr > 1e-12) && rep.ok) {
      rep.ok = false;
      rep.witness = "sample " + std::to_string(j) + " (" + where + ") phase error " + fmt(perr) + " mass error " + fmt(merr);
    }
  }
  return rep;
}

std::string path_csv(const TracedPath& path) {
  std::string out = "# a=" + fmt(path.a) + " c=" + fmt(path.c) + " phi=" + fmt(path.phi) + "\n";
  out += "t,re_z,im_z,re_rho_zdot,im_rho_zdot,cumulative_mass\n";
  cplx acc = 0.0;
  for (std::size_t i = 0; i < path.samples.size(); ++i) {
    const PathSample& s = path.samples[i];
    if (i > 0) acc += chord_integral(path.a, path.c, path.samples[i - 1].z, s.z);
    const cplx v = omega_density(path.a, path.c, s.z) * s.zdot;
    out += fmt(s.t) + "," + fmt(s.z.real()) + "," + fmt(s.z.imag()) + "," + fmt(v.real()) + "," + fmt(v.imag()) + "," +
           fmt(std::abs(acc)) + "\n";
  }
  return out;
}

}  // namespace stabforge
