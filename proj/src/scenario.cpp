#include "stabforge/scenario.hpp"
#include "stabforge/errors.hpp"
#include "stabforge/p1_stab.hpp"
#include "stabforge/product_stab.hpp"
#include "stabforge/surface_geom.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

namespace stabforge {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string num(cplx z) { return num(z.real()) + "," + num(z.imag()); }

[[noreturn]] void invalid(const std::string& what, const std::string& where) {
  throw Error(ErrorCode::ConfigInvalid, what, where);
}

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(strip(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Records

struct RecordBuilder {
  ReportRecord rec;

  RecordBuilder(std::string id, std::string module, std::string op, std::map<std::string, std::string> params = {}) {
    rec.id = std::move(id);
    rec.module = std::move(module);
    rec.operation = std::move(op);
    rec.params = std::move(params);
  }
  RecordBuilder& value(const std::string& name, double v) {
    rec.values.push_back({name, v, std::nullopt});
    return *this;
  }
  RecordBuilder& value(const std::string& name, double v, double tol) {
    rec.values.push_back({name, v, tol});
    return *this;
  }
  RecordBuilder& detail(const std::string& d) {
    rec.detail = d;
    return *this;
  }
  ReportRecord verdict(bool ok, const std::string& witness) {
    rec.status = ok ? Status::Pass : Status::Fail;
    if (!ok) rec.witness = witness.empty() ? "check failed without a specific counterexample" : witness;
    return rec;
  }
  ReportRecord skipped(const std::string& why) {
    rec.status = Status::Skipped;
    rec.detail = why;
    return rec;
  }
};

// ---------------------------------------------------------------------------
// Schema

enum class FieldType { Int, Real, PosReal, Complex, Text, Object, Bool, RealList, Kind, StabType };

struct Field {
  std::string pattern;  // '#' stands for a decimal index
  FieldType type;
};

const std::map<std::string, std::vector<Field>>& schemas() {
  static const std::map<std::string, std::vector<Field>> s = [] {
    const std::vector<Field> window = {{"window.lo", FieldType::Int}, {"window.hi", FieldType::Int}};
    auto with = [](std::vector<Field> base, const std::vector<Field>& more) {
      base.insert(base.end(), more.begin(), more.end());
      return base;
    };
    const std::vector<Field> common = {{"kind", FieldType::Kind}, {"seed", FieldType::Int}, {"output.dir", FieldType::Text}};
    std::map<std::string, std::vector<Field>> m;
    m["p1"] = with(with(common, window), {{"stab.type", FieldType::StabType},
                                           {"stab.tau", FieldType::Complex},
                                           {"stab.c", FieldType::Complex},
                                           {"stab.k", FieldType::Int},
                                           {"stab.psi", FieldType::Real},
                                           {"stab.phi", FieldType::Real},
                                           {"stab.m0", FieldType::PosReal},
                                           {"stab.m1", FieldType::PosReal},
                                           {"object", FieldType::Object}});
    m["product"] = with(with(common, window), {{"factors", FieldType::Int},
                                                {"factor.#.type", FieldType::StabType},
                                                {"factor.#.tau", FieldType::Complex},
                                                {"factor.#.c", FieldType::Complex},
                                                {"factor.#.k", FieldType::Int},
                                                {"factor.#.psi", FieldType::Real},
                                                {"factor.#.phi", FieldType::Real},
                                                {"factor.#.m0", FieldType::PosReal},
                                                {"factor.#.m1", FieldType::PosReal},
                                                {"twist", FieldType::Complex},
                                                {"filtrations", FieldType::Int},
                                                {"object", FieldType::Object}});
    const std::vector<Field> pair = {{"tau1", FieldType::Complex}, {"c1", FieldType::Complex},
                                     {"tau2", FieldType::Complex}, {"c2", FieldType::Complex}};
    m["surface"] = with(with(with(common, window), pair), {{"samples", FieldType::Int}, {"tol", FieldType::PosReal}});
    m["elliptic"] = with(with(common, window), pair);
    m["mirror"] = with(common, {{"a", FieldType::Complex},
                                {"c", FieldType::Complex},
                                {"k", FieldType::Int},
                                {"radii", FieldType::RealList},
                                {"a2", FieldType::Complex},
                                {"k2", FieldType::Int},
                                {"monodromy.steps", FieldType::Int},
                                {"tol", FieldType::PosReal}});
    m["slag"] = with(common, {{"a", FieldType::Complex},
                              {"c", FieldType::Complex},
                              {"phi", FieldType::Real},
                              {"seeds", FieldType::Text},
                              {"rel_tol", FieldType::PosReal},
                              {"max_arclength", FieldType::PosReal},
                              {"drift_tol", FieldType::PosReal},
                              {"mass_tol", FieldType::PosReal},
                              {"closed.theta", FieldType::Real},
                              {"closed.r_lo", FieldType::PosReal},
                              {"closed.r_hi", FieldType::PosReal},
                              {"closed.count", FieldType::Int},
                              {"closed.delta", FieldType::PosReal}});
    m["verify-all"] = {{"kind", FieldType::Kind}, {"window", FieldType::Int}, {"tol", FieldType::PosReal}};
    return m;
  }();
  return s;
}

bool matches(const std::string& pattern, const std::string& key) {
  std::size_t i = 0, j = 0;
  while (i < pattern.size() && j < key.size()) {
    if (pattern[i] == '#') {
      const std::size_t start = j;
      while (j < key.size() && std::isdigit(static_cast<unsigned char>(key[j]))) ++j;
      if (j == start) return false;
      ++i;
    } else if (pattern[i++] != key[j++]) {
      return false;
    }
  }
  return i == pattern.size() && j == key.size();
}

void check_type(FieldType t, const std::string& key, const std::string& v) {
  try {
    switch (t) {
      case FieldType::Int: parse_int(v); break;
      case FieldType::Real: parse_real(v); break;
      case FieldType::PosReal:
        if (!(parse_real(v) > 0.0)) invalid("value must be positive", key);
        break;
      case FieldType::Complex: parse_complex(v); break;
      case FieldType::Object: parse_object(v); break;
      case FieldType::Bool:
        if (v != "true" && v != "false") invalid("expected true or false", key);
        break;
      case FieldType::RealList:
        for (const auto& part : split(v, ',')) parse_real(part);
        break;
      case FieldType::StabType:
        if (v != "geometric" && v != "algebraic") invalid("expected geometric or algebraic", key);
        break;
      case FieldType::Kind:
      case FieldType::Text:
        if (v.empty()) invalid("empty value", key);
        break;
    }
  } catch (const Error& e) {
    invalid("bad value for '" + key + "': " + v, key);
  }
}

// ---------------------------------------------------------------------------
// Typed access after validation

double real_or(const Config& cfg, const std::string& key, double fallback) {
  return cfg.has(key) ? parse_real(cfg.get(key)) : fallback;
}
long long int_or(const Config& cfg, const std::string& key, long long fallback) {
  return cfg.has(key) ? parse_int(cfg.get(key)) : fallback;
}
cplx complex_or(const Config& cfg, const std::string& key, cplx fallback) {
  return cfg.has(key) ? parse_complex(cfg.get(key)) : fallback;
}

Window window_of(const Config& cfg, Window fallback) {
  Window w{static_cast<int>(int_or(cfg, "window.lo", fallback.lo)), static_cast<int>(int_or(cfg, "window.hi", fallback.hi))};
  if (w.lo > w.hi) invalid("window.lo exceeds window.hi", "window");
  return w;
}

// Reads a P^1 stability datum under `prefix`. Geometric data must satisfy
// Im tau > 0; the algebraic phase step is left unchecked so counterexamples
// with a step below 1 can be run and reported.
StabP1 stab_of(const Config& cfg, const std::string& prefix) {
  const std::string type = cfg.get(prefix + ".type");
  if (type == "geometric") {
    const Geometric g{complex_or(cfg, prefix + ".tau", {0.0, 1.0}), complex_or(cfg, prefix + ".c", {})};
    if (!(g.tau.imag() > 0.0)) invalid("geometric factor needs Im(tau) > 0", prefix + ".tau");
    return g;
  }
  Algebraic a;
  a.k = static_cast<int>(int_or(cfg, prefix + ".k", 0));
  a.psi = real_or(cfg, prefix + ".psi", 0.0);
  a.phi = real_or(cfg, prefix + ".phi", 1.0);
  a.m0 = real_or(cfg, prefix + ".m0", 1.0);
  a.m1 = real_or(cfg, prefix + ".m1", 1.0);
  if (!(a.phi > 0.0)) invalid("algebraic phase step must be positive", prefix + ".phi");
  return a;
}

std::map<std::string, std::string> params_of(const Config& cfg) { return cfg.entries(); }

std::string join(const std::vector<Generator>& gens) {
  std::string out;
  for (const auto& g : gens) out += (out.empty() ? "" : " | ") + g.to_string();
  return out;
}

// ---------------------------------------------------------------------------
// Shared check bodies. Each returns one record.

ReportRecord check_p1_phases(const StabP1& s, Window w, const std::map<std::string, std::string>& params, const std::string& id) {
  RecordBuilder b(id, "p1_stab", "phase_p1", params);
  const auto objs = stable_objects_p1(s, w);
  double worst = 0.0;
  std::string witness;
  for (const auto& g : objs) {
    const cplx z = central_charge_p1(s, g.symbols[0].factor_class());
    const double gap = std::abs(std::remainder(std::arg(z) - kPi * phase_p1(s, g), 2.0 * kPi));
    if (gap > worst) worst = gap;
    if (gap > 1e-10 && witness.empty()) witness = g.to_string() + " angle gap " + num(gap);
  }
  // Line bundle phases must increase strictly with the degree.
  for (std::size_t i = 0; i + 1 < objs.size(); ++i) {
    const auto& x = objs[i].symbols[0];
    const auto& y = objs[i + 1].symbols[0];
    if (!x.sky && !y.sky && x.degree < y.degree && !(phase_p1(s, x) < phase_p1(s, y)) && witness.empty())
      witness = x.to_string() + " not below " + y.to_string();
  }
  return b.value("stable_objects", static_cast<double>(objs.size())).value("max_angle_gap", worst, 1e-10).verdict(witness.empty(), witness);
}

ReportRecord check_hn(const std::vector<HNPart>& parts, const FormalObject& obj, const std::string& module,
                      const std::string& op, const std::map<std::string, std::string>& params, const std::string& id) {
  RecordBuilder b(id, module, op, params);
  std::string witness;
  KClass total = KClass::zero(obj.n);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i && !(parts[i - 1].phase > parts[i].phase)) witness = "phases not strictly decreasing at part " + std::to_string(i);
    for (const auto& g : parts[i].parts) total = total + k_class(g);
  }
  if (!(total == k_class(obj)) && witness.empty()) witness = "class of the parts differs from the object";
  std::string desc;
  for (const auto& p : parts) desc += (desc.empty() ? "" : " ; ") + num(p.phase) + ": " + join(p.parts);
  return b.value("parts", static_cast<double>(parts.size())).detail(desc).verdict(witness.empty(), witness);
}

std::vector<ReportRecord> product_records(const ProductStab& ps, Window w, std::uint64_t seed, int filtrations,
                                          const std::map<std::string, std::string>& params, const std::string& prefix) {
  std::vector<ReportRecord> out;
  VerifyOptions vo;
  vo.window = w;
  vo.seed = seed;
  vo.random_filtrations = filtrations;
  const AxiomReport rep = verify_axioms(ps, vo);
  for (const auto& r : rep.results)
    out.push_back(RecordBuilder(prefix + r.id, "product_stab", "verify_axioms", params)
                      .value("checked", static_cast<double>(r.checked))
                      .verdict(r.pass, r.witness));
  if (!ps.pure_algebraic()) {
    const GluingReport g = gluing_vanishing_check(ps, w);
    out.push_back(RecordBuilder(prefix + "gluing", "product_stab", "gluing_vanishing_check", params)
                      .value("pairs_checked", static_cast<double>(g.pairs_checked))
                      .verdict(g.ok, g.witness ? g.witness->text + " at level " + std::to_string(g.witness->level) : ""));
  }
  {
    RecordBuilder b(prefix + "support-constant", "product_stab", "support_constant", params);
    try {
      const SupportReport s = support_constant(ps, w);
      out.push_back(b.value("constant", s.constant).value("min_ratio", s.min_ratio, 1.0).value("generators", static_cast<double>(s.generators_checked)).verdict(true, ""));
    } catch (const Error& e) {
      out.push_back(b.verdict(false, e.witness()));
    }
  }
  if (ps.pure_algebraic()) {
    RecordBuilder b(prefix + "recovery", "product_stab", "recover_factors", params);
    const auto rec = recover_factors(stable_data(ps));
    double worst = 0.0;
    for (int l = 0; l < ps.n(); ++l) {
      const auto& a = std::get<Algebraic>(ps.factors[l]);
      worst = std::max({worst, std::abs(rec[l].step - a.phi), std::abs(rec[l].mass_ratio - a.m1 / a.m0) / (a.m1 / a.m0)});
    }
    out.push_back(b.value("max_error", worst, 1e-9).verdict(worst <= 1e-9, "recovered data off by " + num(worst)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scenario kinds

std::vector<ReportRecord> run_p1(const Config& cfg) {
  const StabP1 s = stab_of(cfg, "stab");
  try {
    validate(s);
  } catch (const std::invalid_argument& e) {
    invalid(e.what(), "stab");
  }
  const auto params = params_of(cfg);
  const Window w = window_of(cfg, {-4, 4});
  std::vector<ReportRecord> out{check_p1_phases(s, w, params, "p1.stable-phases")};
  if (cfg.has("object")) {
    const FormalObject obj = parse_object(cfg.get("object"));
    if (obj.n != 1) invalid("object must live on a single factor", "object");
    out.push_back(check_hn(hn_p1(s, obj), obj, "p1_stab", "hn_p1", params, "p1.hn"));
  }
  return out;
}

std::vector<ReportRecord> run_product(const Config& cfg) {
  const long long n = parse_int(cfg.get("factors"));
  if (n < 1 || n > 6) invalid("factors must lie in [1, 6]", "factors");
  for (const auto& [k, v] : cfg.entries()) {
    if (k.rfind("factor.", 0) != 0) continue;
    const long long idx = parse_int(k.substr(7, k.find('.', 7) - 7));
    if (idx < 0 || idx >= n) invalid("factor index out of range", k);
  }
  std::vector<StabP1> factors;
  for (long long l = 0; l < n; ++l) factors.push_back(stab_of(cfg, "factor." + std::to_string(l)));
  if (!admissible(factors)) invalid("at most one geometric factor is admissible", "factor");
  const ProductStab ps = make_product(factors, complex_or(cfg, "twist", {}), false);
  const auto params = params_of(cfg);
  const Window w = window_of(cfg, {-3, 3});
  auto out = product_records(ps, w, static_cast<std::uint64_t>(int_or(cfg, "seed", 1)),
                             static_cast<int>(int_or(cfg, "filtrations", 32)), params, "product.");
  if (cfg.has("object")) {
    const FormalObject obj = parse_object(cfg.get("object"));
    if (obj.n != n) invalid("object factor count differs from the product", "object");
    out.push_back(check_hn(hn_product(ps, obj), obj, "product_stab", "hn_product", params, "product.hn"));
  }
  return out;
}

std::vector<ClassPair> sample_classes(std::mt19937_64& rng, int count, Window w) {
  std::uniform_int_distribution<int> deg(w.lo, w.hi);
  std::uniform_int_distribution<int> rank(0, 3);
  std::vector<ClassPair> out;
  for (int i = 0; i < count; ++i) {
    FactorClass e1{rank(rng), deg(rng)}, e2{rank(rng), deg(rng)};
    if (e1.rank == 0 && e1.degree == 0) e1.degree = 1;
    if (e2.rank == 0 && e2.degree == 0) e2.degree = 1;
    out.push_back({e1, e2});
  }
  return out;
}

std::vector<ReportRecord> surface_records(cplx tau1, cplx c1, cplx tau2, cplx c2, Window w, int samples,
                                          std::uint64_t seed, double tol, const std::map<std::string, std::string>& params) {
  std::vector<ReportRecord> out;
  out.push_back(RecordBuilder("surface.decomposition-identity", "surface_geom", "product_decomposition_identity", params)
                    .verdict(product_decomposition_identity(), "symbolic difference is a nonzero polynomial"));
  std::mt19937_64 rng(seed);
  const GeomProduct gp = geom_product(tau1, c1, tau2, c2);
  const auto classes = sample_classes(rng, samples, w);
  {
    const DecompositionReport r = product_decomposition_check(gp.data, classes, tol);
    out.push_back(RecordBuilder("surface.decomposition-float", "surface_geom", "product_decomposition_check", params)
                      .value("samples", static_cast<double>(r.samples))
                      .value("max_rel_err", r.max_rel_err, tol)
                      .verdict(r.ok, r.witness));
  }
  {
    // Rational B and H drawn on a 1/12 grid.
    std::uniform_int_distribution<int> num12(-24, 24), pos12(1, 36);
    RationalChargeData rd{Rational(num12(rng), 12), Rational(num12(rng), 12), Rational(pos12(rng), 12), Rational(pos12(rng), 12)};
    const DecompositionReport r = product_decomposition_check_exact(rd, classes);
    out.push_back(RecordBuilder("surface.decomposition-exact", "surface_geom", "product_decomposition_check_exact", params)
                      .value("samples", static_cast<double>(r.samples))
                      .verdict(r.ok, r.witness));
  }
  {
    // Z(i_* O(l)) = -l + b2 + i h2 for the class (0, (1, 0), l).
    double worst = 0.0;
    std::string witness;
    for (int l = w.lo; l <= w.hi; ++l) {
      const cplx z = charge_BH(gp.data, SurfaceClass{0, 1, 0, Rational(l)});
      const cplx expect = -static_cast<double>(l) + cplx{gp.data.b2, gp.data.h2};
      const double err = std::abs(z - expect);
      worst = std::max(worst, err);
      if (err > 1e-12 * (1.0 + std::abs(expect)) && witness.empty()) witness = "l = " + std::to_string(l);
    }
    out.push_back(RecordBuilder("surface.pushforward-charge", "surface_geom", "charge_BH", params)
                      .value("max_abs_err", worst, 1e-12)
                      .verdict(witness.empty(), witness));
  }
  {
    const auto fams = geom_product_phase_windows(tau1, c1, tau2, c2, w);
    std::string witness;
    for (const auto& f : fams)
      if ((!f.in_window || !f.charge_matches) && witness.empty())
        witness = f.family + " " + f.object + " surface phase " + num(f.surface_phase);
    out.push_back(RecordBuilder("surface.phase-windows", "surface_geom", "geom_product", params)
                      .value("objects", static_cast<double>(fams.size()))
                      .verdict(witness.empty(), witness));
  }
  return out;
}

std::vector<ReportRecord> elliptic_records(cplx tau1, cplx c1, cplx tau2, cplx c2, Window w,
                                           const std::map<std::string, std::string>& params) {
  std::vector<ReportRecord> out;
  {
    double worst = 0.0;
    std::string witness;
    std::size_t pairs = 0;
    std::vector<FactorClass> stable;
    for (long long r = 0; r <= 2; ++r)
      for (long long d = w.lo; d <= w.hi; ++d)
        if ((r || d) && elliptic_factor_stable(r, d) && (r > 0 || d > 0)) stable.push_back({r, d});
    for (const auto& e1 : stable)
      for (const auto& e2 : stable) {
        ++pairs;
        const cplx z = elliptic_product_charge(tau1, c1, tau2, c2, e1, e2);
        const double sum = elliptic_factor_phase(tau1, c1, e1) + elliptic_factor_phase(tau2, c2, e2);
        const double gap = std::abs(std::remainder(std::arg(z) - kPi * sum, 2.0 * kPi));
        worst = std::max(worst, gap);
        if (gap > 1e-10 && witness.empty())
          witness = "(" + std::to_string(e1.rank) + "," + std::to_string(e1.degree) + ") x (" + std::to_string(e2.rank) + "," +
                    std::to_string(e2.degree) + ")";
      }
    out.push_back(RecordBuilder("elliptic.phase-additivity", "surface_geom", "elliptic_product_charge", params)
                      .value("pairs", static_cast<double>(pairs))
                      .value("max_angle_gap", worst, 1e-10)
                      .verdict(witness.empty(), witness));
  }
  {
    const cplx z = elliptic_product_charge(tau1, c1, tau2, c2, {0, 1}, {0, 1});
    const cplx expect = std::exp(c1 + c2);
    const double err = std::abs(z - expect) / std::abs(expect);
    out.push_back(RecordBuilder("elliptic.skyscraper-charge", "surface_geom", "elliptic_product_charge", params)
                      .value("rel_err", err, 1e-14)
                      .verdict(err <= 1e-14, "Z(pt x pt) = " + num(z)));
  }
  {
    const bool ok = elliptic_factor_stable(1, 5) && !elliptic_factor_stable(2, 4) && elliptic_factor_stable(0, 1) &&
                    elliptic_factor_stable(3, -7) && !elliptic_factor_stable(0, 2);
    out.push_back(RecordBuilder("elliptic.stability-predicate", "surface_geom", "elliptic_factor_stable", params)
                      .verdict(ok, "gcd predicate disagrees on a fixed sample"));
  }
  return out;
}

ReportRecord circle_record(cplx a, cplx c, int k, double tol, const std::string& id) {
  const LG1 m{a, c};
  const CircleResult cr = circle_charge(m, k);
  const cplx oracle = bessel_oracle(m, k);
  const double err = std::abs(cr.value - oracle) / std::abs(oracle);
  return RecordBuilder(id, "mirror_numeric", "circle_charge", {{"a", num(a)}, {"c", num(c)}, {"k", std::to_string(k)}})
      .value("re", cr.value.real())
      .value("im", cr.value.imag())
      .value("nodes", cr.nodes)
      .value("rel_err", err, tol)
      .verdict(err <= tol, "circle " + num(cr.value) + " vs series " + num(oracle));
}

ReportRecord thimble_record(cplx a, cplx c, int k, const std::string& id) {
  const LG1 m{a, c};
  const cplx circ = circle_charge(m, k).value;
  const ThimbleResult tp = trace_thimble(m, 1, {}, k), tm = trace_thimble(m, -1, {}, k);
  const cplx diff = tp.integral - tm.integral;
  const double e_minus = std::abs(circ - diff) / std::abs(circ);
  const double e_plus = std::abs(circ + diff) / std::abs(circ);
  const double err = std::min(e_minus, e_plus);
  const double drift = std::max(tp.im_drift, tm.im_drift);
  const bool ok = err <= 1e-6 && drift <= 1e-8;
  return RecordBuilder(id, "mirror_numeric", "trace_thimble", {{"a", num(a)}, {"c", num(c)}, {"k", std::to_string(k)}})
      .value("rel_err", err, 1e-6)
      .value("matched_sign", e_minus <= e_plus ? 1.0 : -1.0)
      .value("im_drift", drift, 1e-8)
      .value("tail_bound", tp.tail_bound + tm.tail_bound)
      .detail(tp.broken || tm.broken ? "broken path at a Stokes configuration" : "smooth thimbles")
      .verdict(ok, "relation error " + num(err) + " drift " + num(drift));
}

ReportRecord tensor_record(cplx a1, cplx a2, cplx c, int k1, int k2, CycleKind second, double tol, const std::string& id) {
  const LGModel m{{a1, a2}, c};
  const auto r = product_charge_numeric(m, {k1, k2}, {CycleSpec{CycleKind::Circle, 1.0}, CycleSpec{second, 1.0}});
  return RecordBuilder(id, "mirror_numeric", "product_charge_numeric",
                       {{"a1", num(a1)}, {"a2", num(a2)}, {"c", num(c)}, {"k1", std::to_string(k1)}, {"k2", std::to_string(k2)},
                        {"second", second == CycleKind::Circle ? "circle" : "thimble+"}})
      .value("rel_err", r.tensor_rel_err, tol)
      .verdict(r.tensor_rel_err <= tol, "tensor " + num(*r.tensor_value) + " vs product " + num(r.value));
}

ReportRecord monodromy_record(cplx a, int steps, const std::string& id) {
  const LG1 m{a, {}};
  const MonodromyReport one = monodromy_probe(m, steps, 1.0, 0, false);
  const MonodromyReport two = monodromy_probe(m, steps, 2.0, 0, false);
  const double drift = std::max(one.circle_rel_change, two.circle_rel_change);
  const bool ok = one.swapped && two.identity && drift <= 1e-8;
  return RecordBuilder(id, "mirror_numeric", "monodromy_probe", {{"a", num(a)}, {"steps", std::to_string(steps)}})
      .value("swapped_after_one", one.swapped ? 1.0 : 0.0)
      .value("identity_after_two", two.identity ? 1.0 : 0.0)
      .value("circle_rel_change", drift, 1e-8)
      .verdict(ok, "end of one loop " + num(one.end_plus) + ", two loops " + num(two.end_plus));
}

std::vector<ReportRecord> run_mirror(const Config& cfg) {
  const cplx a = complex_or(cfg, "a", {}), c = complex_or(cfg, "c", {});
  const int k = static_cast<int>(int_or(cfg, "k", 0));
  const double tol = real_or(cfg, "tol", 1e-9);
  std::vector<ReportRecord> out{circle_record(a, c, k, tol, "mirror.circle-bessel"), thimble_record(a, c, k, "mirror.thimble-relation")};
  {
    std::vector<double> radii{0.3, 1.0, 3.0};
    if (cfg.has("radii")) {
      radii.clear();
      for (const auto& part : split(cfg.get("radii"), ',')) radii.push_back(parse_real(part));
    }
    for (double r : radii)
      if (!(r > 0.0)) invalid("radii must be positive", "radii");
    const LG1 m{a, c};
    const cplx ref = circle_charge(m, k, radii.front()).value;
    double worst = 0.0;
    for (double r : radii) worst = std::max(worst, std::abs(circle_charge(m, k, r).value - ref) / std::abs(ref));
    out.push_back(RecordBuilder("mirror.contour-independence", "mirror_numeric", "circle_charge", params_of(cfg))
                      .value("max_rel_spread", worst, 1e-10)
                      .verdict(worst <= 1e-10, "radius spread " + num(worst)));
  }
  if (cfg.has("a2")) {
    const cplx a2 = parse_complex(cfg.get("a2"));
    const int k2 = static_cast<int>(int_or(cfg, "k2", 0));
    out.push_back(tensor_record(a, a2, c, k, k2, CycleKind::Circle, 1e-8, "mirror.tensor-circles"));
    out.push_back(tensor_record(a, a2, c, k, k2, CycleKind::ThimblePlus, 1e-8, "mirror.tensor-circle-thimble"));
  }
  if (cfg.has("monodromy.steps")) {
    const long long steps = parse_int(cfg.get("monodromy.steps"));
    if (steps < 4) invalid("monodromy.steps must be at least 4", "monodromy.steps");
    out.push_back(monodromy_record(a, static_cast<int>(steps), "mirror.monodromy"));
  }
  return out;
}

ReportRecord slag_record(const TracedPath& p, double drift_tol, double mass_tol, const std::string& id,
                         const std::map<std::string, std::string>& params) {
  const bool ok = p.phase_drift <= drift_tol && p.mass_identity_err <= mass_tol;
  return RecordBuilder(id, "slag_tracer", "trace_slag", params)
      .value("mass", p.mass)
      .value("phase_drift", p.phase_drift, drift_tol)
      .value("mass_identity_err", p.mass_identity_err, mass_tol)
      .value("samples", static_cast<double>(p.samples.size()))
      .detail(to_string(p.start_end) + " -> " + to_string(p.end_end))
      .verdict(ok, "drift " + num(p.phase_drift) + " mass identity " + num(p.mass_identity_err));
}

std::vector<ReportRecord> run_slag(const Config& cfg) {
  SLagProblem base;
  base.a = complex_or(cfg, "a", {});
  base.c = complex_or(cfg, "c", {});
  base.phi = real_or(cfg, "phi", 0.0);
  base.rel_tol = real_or(cfg, "rel_tol", base.rel_tol);
  base.max_arclength = real_or(cfg, "max_arclength", base.max_arclength);
  const double drift_tol = real_or(cfg, "drift_tol", 1e-6), mass_tol = real_or(cfg, "mass_tol", 1e-8);
  std::vector<SLagProblem> problems;
  for (const auto& s : split(cfg.get_or("seeds", "1,0"), ';')) {
    SLagProblem p = base;
    p.seed = parse_complex(s);
    try {
      validate(p);
    } catch (const std::invalid_argument& e) {
      invalid(e.what(), "seeds");
    }
    problems.push_back(p);
  }
  const auto paths = trace_many(problems);
  std::vector<ReportRecord> out;
  const auto params = params_of(cfg);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "slag.path-%03zu", i);
    auto rec = slag_record(paths[i], drift_tol, mass_tol, id, params);
    rec.params["seed.index"] = std::to_string(i);
    out.push_back(std::move(rec));
  }
  if (paths.size() >= 2) {
    std::vector<TracedPath> accepted;
    for (const auto& p : paths)
      if (p.accepted(drift_tol)) accepted.push_back(p);
    const auto r = product_phase_check(accepted, 16, drift_tol);
    out.push_back(RecordBuilder("slag.product-phase", "slag_tracer", "product_phase_check", params)
                      .value("paths", static_cast<double>(accepted.size()))
                      .value("max_phase_err", r.max_phase_err, drift_tol * static_cast<double>(accepted.size()))
                      .verdict(r.ok, r.witness));
  }
  std::vector<TracedPath> to_emit = paths;
  if (cfg.has("closed.count")) {
    const double delta = real_or(cfg, "closed.delta", 1e-6);
    const auto cs = find_closed_slag(base.a, base.c, base.phi, real_or(cfg, "closed.theta", kPi), real_or(cfg, "closed.r_lo", 0.5),
                                     real_or(cfg, "closed.r_hi", 3.0), static_cast<int>(parse_int(cfg.get("closed.count"))), delta, base);
    double best = -1.0;
    for (const auto& pt : cs.scan)
      if (pt.return_distance >= 0.0 && (best < 0.0 || pt.return_distance < best)) best = pt.return_distance;
    RecordBuilder b("slag.closed-search", "slag_tracer", "find_closed_slag", params);
    b.value("best_return", best).value("found", cs.orbit ? 1.0 : 0.0);
    if (cs.orbit) {
      const TracedPath& o = *cs.orbit;
      const double im = std::abs((std::polar(1.0, -kPi * base.phi) * o.omega_integral).imag());
      b.value("mass", o.mass).value("orbit_im_residual", im / o.mass, mass_tol);
      to_emit.push_back(o);
      out.push_back(b.detail("closed orbit found").verdict(im <= mass_tol * o.mass && o.phase_drift <= drift_tol,
                                                           "orbit integral off the phase ray by " + num(im / o.mass)));
    } else {
      out.push_back(b.detail("no return within delta on this grid").verdict(true, ""));
    }
  }
  if (cfg.has("output.dir")) emit_paths(to_emit, cfg.get("output.dir"));
  return out;
}

std::vector<ReportRecord> run_surface(const Config& cfg) {
  const cplx tau1 = complex_or(cfg, "tau1", {0.0, 1.0}), tau2 = complex_or(cfg, "tau2", {0.0, 1.0});
  if (!(tau1.imag() > 0.0) || !(tau2.imag() > 0.0)) invalid("tau1 and tau2 need positive imaginary part", "tau");
  const long long samples = int_or(cfg, "samples", 1000);
  if (samples < 1) invalid("samples must be positive", "samples");
  return surface_records(tau1, complex_or(cfg, "c1", {}), tau2, complex_or(cfg, "c2", {}), window_of(cfg, {-3, 3}),
                         static_cast<int>(samples), static_cast<std::uint64_t>(int_or(cfg, "seed", 1)), real_or(cfg, "tol", 1e-12),
                         params_of(cfg));
}

std::vector<ReportRecord> run_elliptic(const Config& cfg) {
  const cplx tau1 = complex_or(cfg, "tau1", {0.0, 1.0}), tau2 = complex_or(cfg, "tau2", {0.0, 1.0});
  if (!(tau1.imag() > 0.0) || !(tau2.imag() > 0.0)) invalid("tau1 and tau2 need positive imaginary part", "tau");
  return elliptic_records(tau1, complex_or(cfg, "c1", {}), tau2, complex_or(cfg, "c2", {}), window_of(cfg, {-3, 3}), params_of(cfg));
}

// ---------------------------------------------------------------------------
// verify-all helpers

Algebraic random_algebraic(std::mt19937_64& rng, double phi_lo, double phi_hi) {
  std::uniform_real_distribution<double> phi(phi_lo, phi_hi), psi(-1.0, 1.0), mass(0.1, 10.0);
  std::uniform_int_distribution<int> k(-2, 2);
  Algebraic a;
  a.k = k(rng);
  a.psi = psi(rng);
  a.phi = phi(rng);
  a.m0 = mass(rng);
  a.m1 = mass(rng);
  return a;
}

Geometric random_geometric(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> re(-1.0, 1.0), im(0.5, 2.0), cre(-0.5, 0.5), cim(-1.0, 1.0);
  return {{re(rng), im(rng)}, {cre(rng), cim(rng)}};
}

std::string describe(const ProductStab& ps) {
  std::string out;
  for (const auto& f : ps.factors) {
    if (!out.empty()) out += " ; ";
    if (const auto* g = std::get_if<Geometric>(&f))
      out += "geometric tau=" + num(g->tau) + " c=" + num(g->c);
    else {
      const auto& a = std::get<Algebraic>(f);
      out += "algebraic k=" + std::to_string(a.k) + " psi=" + num(a.psi) + " phi=" + num(a.phi) + " m0=" + num(a.m0) + " m1=" + num(a.m1);
    }
  }
  return out + " ; twist=" + num(ps.global_twist);
}

std::vector<ReportRecord> verify_core(Window w) {
  std::vector<ReportRecord> out;
  // Euler pairing from classes must match the alternating sum of Hom dimensions.
  std::vector<Generator> pool;
  for (int a = w.lo; a <= w.hi; ++a) {
    pool.push_back(line_bundle({a}));
    for (int b = w.lo; b <= w.hi; b += 2) pool.push_back(line_bundle({a, b}));
  }
  pool.push_back(Generator{{FactorSymbol::skyscraper()}, 0});
  pool.push_back(Generator{{FactorSymbol::skyscraper(), FactorSymbol::line(1)}, 1});
  pool.push_back(Generator{{FactorSymbol::line(-1), FactorSymbol::skyscraper()}, 0});
  std::size_t checked = 0;
  std::string witness;
  for (const auto& x : pool)
    for (const auto& y : pool) {
      if (x.n() != y.n()) continue;
      ++checked;
      if (euler_characteristic(hom_degrees(x, y)) != euler_form(k_class(x), k_class(y)) && witness.empty())
        witness = x.to_string() + " vs " + y.to_string();
    }
  out.push_back(RecordBuilder("core.euler-form", "derived_core", "hom_degrees", {{"window", std::to_string(w.hi)}})
                    .value("pairs", static_cast<double>(checked))
                    .verdict(witness.empty(), witness));
  // Line bundle coordinates in the tensor basis.
  witness.clear();
  for (int a = w.lo; a <= w.hi; ++a)
    for (int b = w.lo; b <= w.hi; ++b) {
      const KClass cls = k_class(line_bundle({a, b}));
      const KClass expect = external_product(KClass::from_factors({{1, a}}), KClass::from_factors({{1, b}}));
      if (!(cls == expect) || cls.coords != std::vector<long long>{1, b, a, 1LL * a * b})
        if (witness.empty()) witness = "O(" + std::to_string(a) + "," + std::to_string(b) + ")";
    }
  out.push_back(RecordBuilder("core.kronecker-classes", "derived_core", "external_product", {{"window", std::to_string(w.hi)}})
                    .verdict(witness.empty(), witness));
  return out;
}

std::vector<ReportRecord> verify_products(Window w, std::mt19937_64& rng) {
  std::vector<ReportRecord> out;
  std::uniform_int_distribution<int> nfac(1, 3);
  std::uniform_real_distribution<double> twist_re(-0.5, 0.5), twist_im(-1.0, 1.0);

  auto first_failure = [](const std::vector<ReportRecord>& recs) -> std::string {
    for (const auto& r : recs)
      if (r.status == Status::Fail) return r.id + ": " + r.witness;
    return "";
  };

  // Pure algebraic tuples with steps in [1, 3].
  {
    std::string witness;
    int count = 0;
    for (int t = 0; t < 12; ++t) {
      std::vector<StabP1> fs;
      const int n = nfac(rng);
      for (int l = 0; l < n; ++l) fs.push_back(random_algebraic(rng, 1.0, 3.0));
      const ProductStab ps = make_product(fs, {twist_re(rng), twist_im(rng)});
      const auto recs = product_records(ps, w, 7 + t, 8, {}, "");
      ++count;
      const std::string f = first_failure(recs);
      if (!f.empty() && witness.empty()) witness = describe(ps) + " -> " + f;
    }
    out.push_back(RecordBuilder("product.pure-algebraic", "product_stab", "verify_axioms", {{"tuples", "12"}})
                      .value("tuples", count)
                      .verdict(witness.empty(), witness));
  }
  // A step of 0.5 must break the exceptional collection.
  {
    std::vector<StabP1> fs{Algebraic{0, 0.1, 0.5, 1.0, 2.0}, Algebraic{0, 0.2, 1.5, 1.0, 1.0}};
    const ProductStab ps = make_product(fs, {}, false);
    const AxiomReport rep = verify_axioms(ps, {w, 1, 8});
    const AxiomResult* ext = rep.find("ext-exceptional");
    const bool detected = ext && !ext->pass && !ext->witness.empty();
    out.push_back(RecordBuilder("product.step-below-one", "product_stab", "ext_exceptional_check", {{"factors", describe(ps)}})
                      .detail(detected ? "detected: " + ext->witness : "")
                      .verdict(detected, "ext-exceptional check passed on a step of 0.5"));
  }
  // Mixed tuples glue; a geometric factor glued to a step below 1 does not.
  {
    std::string witness;
    for (int t = 0; t < 8; ++t) {
      const int n = 1 + nfac(rng) % 3;
      std::uniform_int_distribution<int> pos(0, n - 1);
      const int g = pos(rng);
      std::vector<StabP1> fs;
      for (int l = 0; l < n; ++l) fs.push_back(l == g ? StabP1{random_geometric(rng)} : StabP1{random_algebraic(rng, 1.0, 3.0)});
      const ProductStab ps = make_product(fs, {twist_re(rng), twist_im(rng)});
      const std::string f = first_failure(product_records(ps, {-2, 2}, 11 + t, 8, {}, ""));
      if (!f.empty() && witness.empty()) witness = describe(ps) + " -> " + f;
    }
    out.push_back(RecordBuilder("product.mixed", "product_stab", "gluing_vanishing_check", {{"tuples", "8"}})
                      .verdict(witness.empty(), witness));
    const ProductStab bad = make_product({Geometric{{0.2, 1.0}, {}}, Algebraic{0, 0.0, 0.5, 1.0, 1.0}}, {}, false);
    const GluingReport gr = gluing_vanishing_check(bad, {-2, 2});
    out.push_back(RecordBuilder("product.gluing-control", "product_stab", "gluing_vanishing_check", {{"factors", describe(bad)}})
                      .detail(gr.witness ? "detected: " + gr.witness->text : "")
                      .verdict(!gr.ok && gr.witness, "gluing check passed on a step of 0.5"));
  }
  // Recovery rejects a non-affine defect.
  {
    const PureAlgebraic pa = build_pure_algebraic({1.0, 2.0, 3.0, 6.0}, 0.2, {1.3, 2.1});
    StableData d = stable_data(pa);
    d.phases[3] += 1e-3;
    bool caught = false;
    try {
      recover_factors(d);
    } catch (const Error& e) {
      caught = e.code() == ErrorCode::InconsistentData;
    }
    out.push_back(RecordBuilder("product.recovery-defect", "product_stab", "recover_factors", {{"defect", "1e-3"}})
                      .verdict(caught, "defect of 1e-3 on (1,1) went unnoticed"));
  }
  return out;
}

std::vector<ReportRecord> verify_mirror(int window, double tol) {
  std::vector<ReportRecord> out;
  const std::vector<cplx> as{{0.0, 0.0}, {1.0, 1.0}, {-0.5, 2.0}};
  for (std::size_t i = 0; i < as.size(); ++i)
    for (int k = -window; k <= window; ++k) {
      char id[64];
      std::snprintf(id, sizeof id, "mirror.circle-bessel.a%zu.k%+d", i, k);
      out.push_back(circle_record(as[i], {}, k, tol, id));
    }
  const std::vector<cplx> thimble_as{{0.0, 0.0}, {0.5, 0.0}, {1.0, 0.3}};
  for (std::size_t i = 0; i < thimble_as.size(); ++i)
    out.push_back(thimble_record(thimble_as[i], {}, 0, "mirror.thimble-relation.a" + std::to_string(i)));
  {
    const LG1 m{{std::log(25.0), 0.0}, {}};
    const ThimbleResult t = trace_thimble(m, 1);
    const double err = std::abs(saddle_asymptotic(m, t.saddle) / t.integral - 1.0);
    out.push_back(RecordBuilder("mirror.saddle-asymptotic", "mirror_numeric", "saddle_asymptotic", {{"q", "25"}})
                      .value("rel_err", err, 0.05)
                      .verdict(err <= 0.05, "asymptotic off by " + num(err)));
  }
  out.push_back(tensor_record({0.2, 0.1}, {-0.3, 0.5}, {0.1, 0.2}, 1, -2, CycleKind::Circle, std::max(tol, 1e-8), "mirror.tensor-circles"));
  out.push_back(tensor_record({0.2, 0.1}, {1.0, 0.3}, {0.1, 0.2}, 0, 0, CycleKind::ThimblePlus, std::max(tol, 1e-8), "mirror.tensor-circle-thimble"));
  out.push_back(monodromy_record({0.0, 0.0}, 64, "mirror.monodromy.a0"));
  out.push_back(monodromy_record({0.0, 0.7}, 64, "mirror.monodromy.a1"));
  return out;
}

std::vector<ReportRecord> verify_slag(double tol) {
  std::vector<ReportRecord> out;
  std::vector<SLagProblem> problems;
  const std::vector<cplx> as{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}};
  const std::vector<double> phis{0.0, 0.25, 0.5};
  const std::vector<cplx> seeds{{0.5, 0.0}, {-1.0, 0.5}, {0.3, -2.0}};
  for (cplx a : as)
    for (double phi : phis)
      for (cplx z0 : seeds) {
        SLagProblem p;
        p.a = a;
        p.phi = phi;
        p.seed = z0;
        problems.push_back(p);
      }
  const auto paths = trace_many(problems);
  double drift = 0.0, mass = 0.0;
  std::string witness;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    drift = std::max(drift, paths[i].phase_drift);
    mass = std::max(mass, paths[i].mass_identity_err);
    if ((paths[i].phase_drift > 1e-6 || paths[i].mass_identity_err > std::max(tol, 1e-8)) && witness.empty())
      witness = "a=" + num(problems[i].a) + " phi=" + num(problems[i].phi) + " seed=" + num(problems[i].seed);
  }
  out.push_back(RecordBuilder("slag.grid", "slag_tracer", "trace_slag", {{"paths", std::to_string(paths.size())}})
                    .value("max_phase_drift", drift, 1e-6)
                    .value("max_mass_identity_err", mass, std::max(tol, 1e-8))
                    .verdict(witness.empty(), witness));
  {
    // Real data: the real axis is invariant.
    SLagProblem p;
    p.seed = {0.7, 0.0};
    const TracedPath t = trace_slag(p);
    double off = 0.0;
    for (const auto& s : t.samples) off = std::max(off, std::abs(s.z.imag()));
    out.push_back(RecordBuilder("slag.real-axis", "slag_tracer", "trace_slag", {{"seed", "0.7,0"}})
                      .value("max_abs_im", off, 0.0)
                      .verdict(off == 0.0, "left the real axis by " + num(off)));
  }
  {
    std::vector<TracedPath> pair{paths[1], paths[4]};  // phases 0 and 0.25
    const auto r = product_phase_check(pair, 16);
    out.push_back(RecordBuilder("slag.product-phase", "slag_tracer", "product_phase_check", {{"paths", "1,4"}})
                      .value("max_phase_err", r.max_phase_err, 2e-6)
                      .verdict(r.ok, r.witness));
  }
  {
    const auto cs = find_closed_slag({}, {}, 0.5, kPi, 0.5, 2.0, 4, 1e-6);
    bool ok = cs.orbit.has_value();
    double resid = -1.0;
    if (cs.orbit) {
      resid = std::abs((std::polar(1.0, -kPi * 0.5) * cs.orbit->omega_integral).imag()) / cs.orbit->mass;
      ok = resid <= 1e-8;
    }
    out.push_back(RecordBuilder("slag.closed-orbit", "slag_tracer", "find_closed_slag", {{"a", "0,0"}, {"phi", "0.5"}, {"theta", "pi"}})
                      .value("orbit_im_residual", resid, 1e-8)
                      .verdict(ok, cs.orbit ? "orbit integral off the phase ray by " + num(resid) : "no closed orbit on the grid"));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public parsers

double parse_real(const std::string& text) {
  const std::string s = strip(text);
  if (s.empty()) invalid("empty number", text);
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (errno != 0 || end != s.c_str() + s.size() || !std::isfinite(v)) invalid("not a finite real number: " + s, text);
  return v;
}

long long parse_int(const std::string& text) {
  const std::string s = strip(text);
  if (s.empty()) invalid("empty integer", text);
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (errno != 0 || end != s.c_str() + s.size()) invalid("not an integer: " + s, text);
  return v;
}

cplx parse_complex(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() == 1) return {parse_real(parts[0]), 0.0};
  if (parts.size() == 2) return {parse_real(parts[0]), parse_real(parts[1])};
  invalid("expected re or re,im", text);
}

Generator parse_generator(const std::string& text) {
  std::string s = strip(text);
  Generator g;
  const std::size_t br = s.find('[');
  if (br != std::string::npos) {
    if (s.back() != ']') invalid("unterminated shift", text);
    g.shift = static_cast<int>(parse_int(s.substr(br + 1, s.size() - br - 2)));
    s = strip(s.substr(0, br));
  }
  for (const auto& sym : split(s, '*')) {
    if (sym == "Sky") {
      g.symbols.push_back(FactorSymbol::skyscraper());
    } else if (sym.size() > 3 && sym.rfind("O(", 0) == 0 && sym.back() == ')') {
      g.symbols.push_back(FactorSymbol::line(static_cast<int>(parse_int(sym.substr(2, sym.size() - 3)))));
    } else {
      invalid("unknown factor symbol '" + sym + "'", text);
    }
  }
  return g;
}

FormalObject parse_object(const std::string& text) {
  FormalObject obj;
  bool first = true;
  for (const auto& part : split(text, ';')) {
    if (part.empty()) continue;
    Generator g = parse_generator(part);
    if (first) obj.n = g.n();
    if (g.n() != obj.n) invalid("generators with different factor counts", text);
    first = false;
    obj.filtration.push_back(std::move(g));
  }
  return obj;
}

void validate_config(const Config& cfg) {
  if (!cfg.has("kind")) invalid("missing key 'kind'", "kind");
  const std::string kind = cfg.get("kind");
  const auto it = schemas().find(kind);
  if (it == schemas().end()) invalid("unknown kind '" + kind + "'", "kind");
  for (const auto& [key, value] : cfg.entries()) {
    const auto f = std::find_if(it->second.begin(), it->second.end(), [&](const Field& fd) { return matches(fd.pattern, key); });
    if (f == it->second.end()) invalid("unknown key '" + key + "' for kind " + kind, key);
    check_type(f->type, key, value);
  }
  if (kind == "p1" && !cfg.has("stab.type")) invalid("missing key 'stab.type'", "stab.type");
  if (kind == "product") {
    if (!cfg.has("factors")) invalid("missing key 'factors'", "factors");
    const long long n = parse_int(cfg.get("factors"));
    for (long long l = 0; l < n && l < 64; ++l)
      if (!cfg.has("factor." + std::to_string(l) + ".type")) invalid("missing key 'factor." + std::to_string(l) + ".type'", "factor");
  }
}

std::vector<ReportRecord> run_scenario(const Config& cfg) {
  validate_config(cfg);
  const std::string kind = cfg.get("kind");
  if (kind == "p1") return run_p1(cfg);
  if (kind == "product") return run_product(cfg);
  if (kind == "surface") return run_surface(cfg);
  if (kind == "elliptic") return run_elliptic(cfg);
  if (kind == "mirror") return run_mirror(cfg);
  if (kind == "slag") return run_slag(cfg);
  VerifyAllOptions vo;
  vo.window = static_cast<int>(int_or(cfg, "window", vo.window));
  vo.tol = real_or(cfg, "tol", vo.tol);
  return verify_all(vo);
}

std::vector<ReportRecord> verify_all(const VerifyAllOptions& opts) {
  if (opts.window < 1 || opts.window > 12) invalid("window must lie in [1, 12]", "window");
  if (!(opts.tol > 0.0)) invalid("tol must be positive", "tol");
  const Window w{-opts.window, opts.window};
  std::mt19937_64 rng(20240611);
  std::vector<ReportRecord> out = verify_core(w);
  auto append = [&](std::vector<ReportRecord> more) {
    for (auto& r : more) out.push_back(std::move(r));
  };
  for (const StabP1& s : {StabP1{Geometric{{0.3, 1.2}, {0.1, 0.4}}}, StabP1{Algebraic{-1, 0.25, 1.5, 1.0, 2.0}}}) {
    const std::string id = is_geometric(s) ? "p1.geometric-phases" : "p1.algebraic-phases";
    out.push_back(check_p1_phases(s, w, {{"window", std::to_string(opts.window)}}, id));
  }
  append(verify_products(w, rng));
  append(surface_records({0.25, 1.5}, {0.1, 0.2}, {-0.5, 0.75}, {-0.3, 0.1}, w, 200, 5, 1e-12, {{"samples", "200"}}));
  append(elliptic_records({0.2, 1.1}, {0.0, 0.3}, {-0.4, 0.9}, {0.5, -0.2}, w, {}));
  append(verify_mirror(opts.window, opts.tol));
  append(verify_slag(opts.tol));
  return out;
}

std::vector<std::string> emit_paths(const std::vector<TracedPath>& paths, const std::string& dir, const std::string& stem) {
  std::vector<std::string> files;
  if (paths.empty()) return files;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IOFailure, "cannot create output directory", dir);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "%s_%03zu.csv", stem.c_str(), i);
    const std::string file = (std::filesystem::path(dir) / name).string();
    std::ofstream f(file, std::ios::binary);
    if (!f) throw Error(ErrorCode::IOFailure, "cannot open output file", file);
    f << path_csv(paths[i]);
    if (!f) throw Error(ErrorCode::IOFailure, "write failed", file);
    files.push_back(file);
  }
  return files;
}

}  // namespace stabforge
