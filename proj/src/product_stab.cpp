#include "stabforge/product_stab.hpp"
#include "stabforge/errors.hpp"
#include "stabforge/parallel.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <limits>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace stabforge {

namespace {

const Algebraic& alg(const ProductStab& ps, int l) { return std::get<Algebraic>(ps.factors[l]); }

std::vector<int> algebraic_positions(const ProductStab& ps) {
  std::vector<int> out;
  for (int l = 0; l < ps.n(); ++l)
    if (!ps.geo_index || *ps.geo_index != l) out.push_back(l);
  return out;
}

// Index (0 or 1) of the line bundle O(k + i) sitting in algebraic slot l.
int algebraic_bit(const ProductStab& ps, const Generator& g, int l) { return g.symbols[l].degree - ps.base_ks[l]; }

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

bool admissible(const std::vector<StabP1>& factors) {
  return std::count_if(factors.begin(), factors.end(), [](const StabP1& s) { return is_geometric(s); }) <= 1;
}

ProductStab make_product(std::vector<StabP1> factors, cplx twist, bool check_factors) {
  if (factors.empty()) throw Error(ErrorCode::NotAdmissible, "product needs at least one factor");
  if (!admissible(factors)) throw Error(ErrorCode::NotAdmissible, "more than one geometric factor");
  if (check_factors)
    for (const auto& f : factors) validate(f);
  ProductStab ps;
  ps.global_twist = twist;
  ps.base_ks.assign(factors.size(), 0);
  for (std::size_t l = 0; l < factors.size(); ++l) {
    if (is_geometric(factors[l]))
      ps.geo_index = static_cast<int>(l);
    else
      ps.base_ks[l] = std::get<Algebraic>(factors[l]).k;
  }
  ps.factors = std::move(factors);
  return ps;
}

int heart_shift(double phase) { return -static_cast<int>(std::ceil(phase - 1.0)); }

double ShiftTable::phase(unsigned mask) const {
  double ph = base_phase;
  for (int l = 0; l < n; ++l)
    if (mask & factor_bit(n, l)) ph += steps[l];
  return ph;
}

ShiftTable shift_table(double phi, const std::vector<double>& steps) {
  ShiftTable t;
  t.n = static_cast<int>(steps.size());
  t.base_phase = phi;
  t.steps = steps;
  t.shifts.resize(std::size_t{1} << t.n);
  for (unsigned m = 0; m < t.shifts.size(); ++m) t.shifts[m] = heart_shift(t.phase(m));
  return t;
}

std::vector<unsigned> linear_order(int n) {
  std::vector<unsigned> order(std::size_t{1} << n);
  for (unsigned m = 0; m < order.size(); ++m) order[m] = m;
  std::stable_sort(order.begin(), order.end(),
                   [](unsigned a, unsigned b) { return std::popcount(a) < std::popcount(b); });
  return order;
}

PureAlgebraic build_pure_algebraic_unchecked(const std::vector<double>& masses, double phi,
                                             const std::vector<double>& steps, std::vector<int> ks) {
  const int n = static_cast<int>(steps.size());
  if (masses.size() != (std::size_t{1} << n)) throw std::invalid_argument("need one mass per multi-index");
  if (ks.empty()) ks.assign(n, 0);
  PureAlgebraic pa;
  pa.table = shift_table(phi, steps);
  pa.order = linear_order(n);
  pa.masses = masses;
  pa.ks = ks;
  for (unsigned m : pa.order) {
    std::vector<int> deg(n);
    for (int l = 0; l < n; ++l) deg[l] = ks[l] + ((m & factor_bit(n, l)) ? 1 : 0);
    pa.generators.push_back(line_bundle(deg, pa.table.shift(m)));
  }
  return pa;
}

PureAlgebraic build_pure_algebraic(const std::vector<double>& masses, double phi, const std::vector<double>& steps,
                                   std::vector<int> ks) {
  for (std::size_t l = 0; l < steps.size(); ++l)
    if (!(steps[l] >= 1.0))
      throw Error(ErrorCode::InvalidPhaseStep, "phase step below 1", "factor " + std::to_string(l + 1) + " step " + fmt_double(steps[l]));
  for (double m : masses)
    if (!(m > 0.0)) throw std::invalid_argument("masses must be positive");
  return build_pure_algebraic_unchecked(masses, phi, steps, std::move(ks));
}

ExtCheck ext_exceptional_check(const std::vector<Generator>& gens, const std::vector<std::size_t>& order) {
  for (std::size_t a : order)
    for (std::size_t b : order) {
      if (a == b) continue;
      const GradedDims dims = hom_degrees(gens[a], gens[b]);
      for (auto [deg, dim] : dims) {
        if (deg > 0) break;
        if (dim != 0) {
          ExtWitness w{a, b, deg, "Hom^" + std::to_string(deg) + "(" + gens[a].to_string() + ", " + gens[b].to_string() + ") has dimension " + std::to_string(dim)};
          return {false, w};
        }
      }
    }
  return {};
}

ExtCheck ext_exceptional_check(const std::vector<Generator>& gens) {
  std::vector<std::size_t> order(gens.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  return ext_exceptional_check(gens, order);
}

bool is_stable_generator(const ProductStab& ps, const Generator& g) {
  if (g.n() != ps.n()) return false;
  for (int l = 0; l < ps.n(); ++l)
    if (!is_stable_symbol(ps.factors[l], g.symbols[l])) return false;
  return true;
}

double product_phase(const ProductStab& ps, const Generator& g) {
  if (!is_stable_generator(ps, g)) throw Error(ErrorCode::NotStable, "not a product of stable factors", g.to_string());
  double ph = ps.global_twist.imag() / std::numbers::pi + g.shift;
  for (int l = 0; l < ps.n(); ++l) ph += phase_p1(ps.factors[l], g.symbols[l]);
  return ph;
}

cplx product_charge(const ProductStab& ps, const KClass& cls) {
  if (!admissible(ps.factors)) throw Error(ErrorCode::NotAdmissible, "more than one geometric factor");
  if (cls.n != ps.n()) throw std::invalid_argument("class and product have different factor counts");
  const int n = ps.n();
  std::vector<std::array<cplx, 2>> fn(n);
  for (int l = 0; l < n; ++l)
    fn[l] = {central_charge_p1(ps.factors[l], {1, 0}), central_charge_p1(ps.factors[l], {0, 1})};
  cplx total = 0.0;
  for (std::size_t s = 0; s < cls.coords.size(); ++s) {
    if (!cls.coords[s]) continue;
    cplx term = static_cast<double>(cls.coords[s]);
    for (int l = 0; l < n; ++l) term *= fn[l][(s & factor_bit(n, l)) ? 1 : 0];
    total += term;
  }
  return std::exp(ps.global_twist) * total;
}

std::vector<Generator> stable_generators(const ProductStab& ps, Window window) {
  if (!admissible(ps.factors)) throw Error(ErrorCode::NotAdmissible, "more than one geometric factor");
  const int n = ps.n();
  std::vector<Generator> out;
  auto normalize = [&](Generator g) {
    g.shift = 0;
    g.shift = heart_shift(product_phase(ps, g));
    out.push_back(std::move(g));
  };
  if (ps.pure_algebraic()) {
    for (unsigned m : linear_order(n)) {
      std::vector<int> deg(n);
      for (int l = 0; l < n; ++l) deg[l] = ps.base_ks[l] + ((m & factor_bit(n, l)) ? 1 : 0);
      normalize(line_bundle(deg));
    }
    return out;
  }
  const int g = *ps.geo_index;
  std::vector<FactorSymbol> geo_syms;
  for (int m = window.lo; m <= window.hi; ++m) geo_syms.push_back(FactorSymbol::line(m));
  geo_syms.push_back(FactorSymbol::skyscraper());
  const std::vector<int> algs = algebraic_positions(ps);
  for (const auto& gs : geo_syms)
    for (unsigned m : linear_order(static_cast<int>(algs.size()))) {
      Generator gen{std::vector<FactorSymbol>(n), 0};
      gen.symbols[g] = gs;
      for (std::size_t j = 0; j < algs.size(); ++j) {
        const int bit = (m & factor_bit(static_cast<int>(algs.size()), static_cast<int>(j))) ? 1 : 0;
        gen.symbols[algs[j]] = FactorSymbol::line(ps.base_ks[algs[j]] + bit);
      }
      normalize(std::move(gen));
    }
  return out;
}

std::vector<HNPart> hn_product(const ProductStab& ps, const FormalObject& obj) {
  struct Item {
    double phase;
    Generator g;
  };
  std::vector<Item> items;
  for (const auto& g : obj.filtration) {
    if (!is_stable_generator(ps, g))
      throw Error(ErrorCode::UnsupportedObject, "subquotient is not a stable generator up to shift", g.to_string());
    items.push_back({product_phase(ps, g), g});
  }
  // Bubble sort, highest phase to the bottom. Only strict inversions move.
  for (std::size_t pass = 0; pass + 1 < items.size(); ++pass) {
    bool moved = false;
    for (std::size_t i = 0; i + 1 < items.size() - pass; ++i) {
      Item& lower = items[i];
      Item& upper = items[i + 1];
      if (lower.phase < upper.phase - kPhaseTol) {
        if (hom_dim(upper.g, lower.g, 1) != 0)
          throw Error(ErrorCode::RearrangementBlocked, "nonzero Ext^1 blocks a required swap",
                      "Ext^1(" + upper.g.to_string() + ", " + lower.g.to_string() + ") != 0");
        std::swap(lower, upper);
        moved = true;
      }
    }
    if (!moved) break;
  }
  std::vector<HNPart> parts;
  for (auto& it : items) {
    if (parts.empty() || parts.back().phase - it.phase > kPhaseTol) parts.push_back({it.phase, {}});
    parts.back().parts.push_back(std::move(it.g));
  }
  return parts;
}

GluingReport gluing_vanishing_check(const ProductStab& ps, Window degrees, bool include_sky) {
  GluingReport rep;
  if (!ps.geo_index) throw std::invalid_argument("gluing check expects exactly one geometric factor");
  const int g = *ps.geo_index;
  const std::vector<int> algs = algebraic_positions(ps);

  std::vector<FactorSymbol> geo_syms;
  for (int m = degrees.lo; m <= degrees.hi; ++m) geo_syms.push_back(FactorSymbol::line(m));
  if (include_sky) geo_syms.push_back(FactorSymbol::skyscraper());

  // Level j glues the geometric factor and algs[0..j-2] (already built)
  // with algs[j-1] split into O(k) and O(k+1).
  for (std::size_t level = 1; level <= algs.size(); ++level) {
    ProductStab sub;
    sub.global_twist = ps.global_twist;
    sub.factors.push_back(ps.factors[g]);
    sub.base_ks.push_back(0);
    sub.geo_index = 0;
    for (std::size_t j = 0; j < level; ++j) {
      sub.factors.push_back(ps.factors[algs[j]]);
      sub.base_ks.push_back(ps.base_ks[algs[j]]);
    }
    const int inner = static_cast<int>(level) - 1;  // algebraic factors below the split
    const int split_k = sub.base_ks.back();
    const unsigned jcount = 1u << inner;

    auto make = [&](const FactorSymbol& gs, unsigned jmask, int top) {
      Generator x{std::vector<FactorSymbol>(sub.n()), 0};
      x.symbols[0] = gs;
      for (int j = 0; j < inner; ++j)
        x.symbols[1 + j] = FactorSymbol::line(sub.base_ks[1 + j] + ((jmask & factor_bit(inner, j)) ? 1 : 0));
      x.symbols.back() = FactorSymbol::line(split_k + top);
      x.shift = heart_shift(product_phase(sub, x));
      return x;
    };

    for (const auto& s0 : geo_syms)
      for (unsigned j0 = 0; j0 < jcount; ++j0) {
        const Generator a0 = make(s0, j0, 0);
        for (const auto& s1 : geo_syms)
          for (unsigned j1 = 0; j1 < jcount; ++j1) {
            const Generator a1 = make(s1, j1, 1);
            ++rep.pairs_checked;
            const GradedDims dims = hom_degrees(a0, a1);
            for (auto [deg, dim] : dims) {
              if (deg > 0) break;
              if (dim == 0) continue;
              GluingWitness w{s0.to_string(), s1.to_string(), MultiIndex{inner, j0}, MultiIndex{inner, j1}, deg,
                              static_cast<int>(level),
                              "Hom^" + std::to_string(deg) + "(" + a0.to_string() + ", " + a1.to_string() + ") != 0"};
              rep.ok = false;
              rep.witness = w;
              return rep;
            }
          }
      }
  }
  return rep;
}

double sup_norm(const KClass& cls) {
  long long m = 0;
  for (long long v : cls.coords) m = std::max(m, v < 0 ? -v : v);
  return static_cast<double>(m);
}

SupportReport support_constant(const ProductStab& ps, Window window) {
  SupportReport rep;
  double c = std::exp(ps.global_twist.real());
  for (const auto& f : ps.factors) {
    double ci = std::numeric_limits<double>::infinity();
    for (const auto& g : stable_objects_p1(f, window)) {
      const FactorClass fc = g.symbols[0].factor_class();
      const double norm = static_cast<double>(std::max(std::llabs(fc.rank), std::llabs(fc.degree)));
      ci = std::min(ci, std::abs(central_charge_p1(f, fc)) / norm);
    }
    rep.factor_constants.push_back(ci);
    c *= ci;  // the sup-norm is multiplicative on Kronecker products
  }
  // |Z| of a generator comes back through a signed sum over its class, which
  // can lose a few ulps to cancellation; C gives up that much.
  rep.constant = c * (1.0 - 1e-9);
  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (const auto& g : stable_generators(ps, window)) {
    const KClass cls = k_class(g);
    const double ratio = std::abs(product_charge(ps, cls)) / (rep.constant * sup_norm(cls));
    ++rep.generators_checked;
    rep.min_ratio = std::min(rep.min_ratio, ratio);
    if (ratio < 1.0)
      throw Error(ErrorCode::SupportViolated, "|Z| below C times the norm", g.to_string() + " ratio " + fmt_double(ratio));
  }
  return rep;
}

StableData stable_data(const PureAlgebraic& pa) {
  StableData d;
  d.n = pa.table.n;
  d.masses = pa.masses;
  d.phases.resize(pa.masses.size());
  for (unsigned m = 0; m < d.phases.size(); ++m) d.phases[m] = pa.table.phase(m);
  return d;
}

StableData stable_data(const ProductStab& ps) {
  if (!ps.pure_algebraic()) throw std::invalid_argument("stable data needs a purely algebraic product");
  StableData d;
  d.n = ps.n();
  const std::size_t size = std::size_t{1} << d.n;
  d.phases.resize(size);
  d.masses.resize(size);
  for (unsigned m = 0; m < size; ++m) {
    double ph = ps.global_twist.imag() / std::numbers::pi;
    double mass = std::exp(ps.global_twist.real());
    for (int l = 0; l < d.n; ++l) {
      const auto& a = alg(ps, l);
      const bool up = m & factor_bit(d.n, l);
      ph += up ? a.psi + a.phi : a.psi;
      mass *= up ? a.m1 : a.m0;
    }
    d.phases[m] = ph;
    d.masses[m] = mass;
  }
  return d;
}

std::vector<RecoveredFactor> recover_factors(const StableData& data, double tol) {
  const int n = data.n;
  std::vector<RecoveredFactor> out(n);
  std::vector<double> log_ratio(n);
  for (int l = 0; l < n; ++l) {
    const unsigned e = factor_bit(n, l);
    out[l].step = data.phases[e] - data.phases[0];
    out[l].mass_ratio = data.masses[e] / data.masses[0];
    log_ratio[l] = std::log(out[l].mass_ratio);
  }
  for (unsigned m = 0; m < data.phases.size(); ++m) {
    double ph = data.phases[0];
    double lm = std::log(data.masses[0]);
    for (int l = 0; l < n; ++l)
      if (m & factor_bit(n, l)) {
        ph += out[l].step;
        lm += log_ratio[l];
      }
    const double dph = std::abs(data.phases[m] - ph);
    const double dlm = std::abs(std::log(data.masses[m]) - lm);
    if (dph > tol || dlm > tol)
      throw Error(ErrorCode::InconsistentData, "phases or log-masses are not affine in the multi-index",
                  MultiIndex{n, m}.to_string() + " phase residual " + fmt_double(dph) + " log-mass residual " + fmt_double(dlm));
  }
  return out;
}

bool AxiomReport::all_pass() const {
  return std::all_of(results.begin(), results.end(), [](const AxiomResult& r) { return r.pass; });
}

const AxiomResult* AxiomReport::find(const std::string& id) const {
  for (const auto& r : results)
    if (r.id == id) return &r;
  return nullptr;
}

namespace {

std::optional<PairFailure> scan_row(const std::vector<Generator>& gens, const std::vector<double>& ph, std::size_t i,
                                    int spread, std::size_t& count) {
  for (std::size_t j = 0; j < gens.size(); ++j)
    for (int d = -spread; d <= spread; ++d) {
      if (!(ph[i] > ph[j] + d + kPhaseTol)) continue;
      ++count;
      if (hom_dim(gens[i], gens[j].shifted(d), 0) != 0) return PairFailure{i, j, d};
    }
  return std::nullopt;
}

std::vector<double> phases_of(const ProductStab& ps, const std::vector<Generator>& gens) {
  std::vector<double> ph(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i) ph[i] = product_phase(ps, gens[i]);
  return ph;
}

}  // namespace

std::optional<PairFailure> hom_vanishing_pairs_serial(const ProductStab& ps, const std::vector<Generator>& gens,
                                                      int spread, std::size_t* checked) {
  const std::vector<double> ph = phases_of(ps, gens);
  std::size_t count = 0;
  std::optional<PairFailure> first;
  for (std::size_t i = 0; i < gens.size() && !first; ++i) first = scan_row(gens, ph, i, spread, count);
  if (checked) *checked = count;
  return first;
}

std::optional<PairFailure> hom_vanishing_pairs(const ProductStab& ps, const std::vector<Generator>& gens, int spread,
                                               std::size_t* checked) {
  const std::vector<double> ph = phases_of(ps, gens);
  const long rows = static_cast<long>(gens.size());
  std::vector<std::optional<PairFailure>> row_fail(gens.size());
  std::vector<std::size_t> row_count(gens.size(), 0);
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
  for (long i = 0; i < rows; ++i) row_fail[i] = scan_row(gens, ph, static_cast<std::size_t>(i), spread, row_count[i]);
  // Match the serial kernel: report the first failing row and count rows up to it.
  std::size_t count = 0;
  std::optional<PairFailure> first;
  for (std::size_t i = 0; i < gens.size() && !first; ++i) {
    count += row_count[i];
    first = row_fail[i];
  }
  if (checked) *checked = count;
  return first;
}

AxiomReport verify_axioms(const ProductStab& ps, const VerifyOptions& opts) {
  AxiomReport rep;
  if (!admissible(ps.factors)) {
    rep.results.push_back({"admissible", false, 1, "more than one geometric factor"});
    return rep;
  }
  const std::vector<Generator> gens = stable_generators(ps, opts.window);
  const std::vector<double> ph = phases_of(ps, gens);

  // (i) the charge of each generator points along its phase.
  {
    AxiomResult r{"axiom-i-alignment", true, 0, {}};
    for (std::size_t i = 0; i < gens.size(); ++i) {
      ++r.checked;
      const cplx z = product_charge(ps, k_class(gens[i]));
      const double gap = std::remainder(std::arg(z) - std::numbers::pi * ph[i], 2.0 * std::numbers::pi);
      if (!(std::abs(z) > 0.0) || std::abs(gap) > 1e-10) {
        r.pass = false;
        r.witness = gens[i].to_string() + " angle gap " + fmt_double(gap);
        break;
      }
    }
    rep.results.push_back(r);
  }
  // (ii) shifting by one adds one to the phase and negates the charge.
  {
    AxiomResult r{"axiom-ii-shift", true, 0, {}};
    for (std::size_t i = 0; i < gens.size(); ++i) {
      ++r.checked;
      const Generator up = gens[i].shifted(1);
      const cplx z0 = product_charge(ps, k_class(gens[i]));
      const cplx z1 = product_charge(ps, k_class(up));
      const double dph = product_phase(ps, up) - ph[i];
      if (std::abs(dph - 1.0) > 1e-12 || std::abs(z0 + z1) > 1e-12 * std::abs(z0)) {
        r.pass = false;
        r.witness = gens[i].to_string();
        break;
      }
    }
    rep.results.push_back(r);
  }
  // (iii) no maps from higher to lower phase.
  {
    AxiomResult r{"axiom-iii-hom-vanishing", true, 0, {}};
    const auto fail = opts.parallel ? hom_vanishing_pairs(ps, gens, opts.shift_spread, &r.checked)
                                    : hom_vanishing_pairs_serial(ps, gens, opts.shift_spread, &r.checked);
    if (fail) {
      r.pass = false;
      r.witness = "Hom^0(" + gens[fail->i].to_string() + ", " + gens[fail->j].shifted(fail->d).to_string() + ") != 0";
    }
    rep.results.push_back(r);
  }
  // (iv) HN filtrations by rearrangement: pairwise swaps, then random filtrations.
  {
    AxiomResult r{"axiom-iv-hn", true, 0, {}};
    const std::vector<int> algs = algebraic_positions(ps);
    auto sod_key = [&](const Generator& g) {
      unsigned key = 0;
      for (std::size_t j = 0; j < algs.size(); ++j) key |= static_cast<unsigned>(algebraic_bit(ps, g, algs[j])) << j;
      return key;
    };
    auto cross_pair = [&](const Generator& bottom, const Generator& top) {
      if (ps.pure_algebraic()) return true;
      const unsigned kb = sod_key(bottom), kt = sod_key(top);
      if (kb == kt) return false;
      const unsigned high = 1u << (std::bit_width(kb ^ kt) - 1);
      return (kb & high) != 0;
    };
    for (std::size_t a = 0; a < gens.size() && r.pass; ++a)
      for (std::size_t b = 0; b < gens.size(); ++b) {
        if (a == b || !cross_pair(gens[a], gens[b])) continue;
        if (!(ph[a] < ph[b] - kPhaseTol)) continue;
        ++r.checked;
        if (hom_dim(gens[b], gens[a], 1) != 0) {
          r.pass = false;
          r.witness = "blocked swap: Ext^1(" + gens[b].to_string() + ", " + gens[a].to_string() + ") != 0";
          break;
        }
      }
    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
    std::uniform_int_distribution<int> len(1, std::max(1, opts.max_length));
    for (int t = 0; t < opts.random_filtrations && r.pass; ++t) {
      FormalObject obj{ps.n(), {}};
      const int L = len(rng);
      for (int i = 0; i < L; ++i) obj.filtration.push_back(gens[pick(rng)]);
      if (!ps.pure_algebraic()) {
        std::stable_sort(obj.filtration.begin(), obj.filtration.end(),
                         [&](const Generator& x, const Generator& y) { return sod_key(x) > sod_key(y); });
        obj.filtration.erase(std::unique(obj.filtration.begin(), obj.filtration.end(),
                                         [&](const Generator& x, const Generator& y) { return sod_key(x) == sod_key(y); }),
                             obj.filtration.end());
      }
      ++r.checked;
      try {
        const auto parts = hn_product(ps, obj);
        KClass total = KClass::zero(ps.n());
        for (std::size_t i = 0; i < parts.size(); ++i) {
          if (i && !(parts[i - 1].phase > parts[i].phase)) throw std::logic_error("phases not strictly decreasing");
          for (const auto& g : parts[i].parts) total = total + k_class(g);
        }
        if (!(total == k_class(obj))) throw std::logic_error("class not conserved");
      } catch (const std::exception& e) {
        r.pass = false;
        std::string desc;
        for (const auto& g : obj.filtration) desc += (desc.empty() ? "" : " | ") + g.to_string();
        r.witness = std::string(e.what()) + " on [" + desc + "]";
      }
    }
    rep.results.push_back(r);
  }
  // (v) support property on the window.
  {
    AxiomResult r{"axiom-v-support", true, 0, {}};
    try {
      const auto s = support_constant(ps, opts.window);
      r.checked = s.generators_checked;
    } catch (const Error& e) {
      r.pass = false;
      r.witness = e.witness();
    }
    rep.results.push_back(r);
  }
  if (ps.pure_algebraic()) {
    AxiomResult r{"ext-exceptional", true, 0, {}};
    const ExtCheck ec = ext_exceptional_check(gens);
    r.checked = gens.size() * (gens.size() - 1);
    if (!ec.ok) {
      r.pass = false;
      r.witness = ec.witness->text;
    }
    rep.results.push_back(r);
  }
  std::sort(rep.results.begin(), rep.results.end(), [](const AxiomResult& x, const AxiomResult& y) { return x.id < y.id; });
  return rep;
}

}  // namespace stabforge
