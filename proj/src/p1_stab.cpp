#include "stabforge/p1_stab.hpp"
#include "stabforge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stabforge {

void validate(const StabP1& s) {
  if (const auto* g = std::get_if<Geometric>(&s)) {
    if (!(g->tau.imag() > 0.0)) throw std::invalid_argument("geometric factor needs Im(tau) > 0");
  } else {
    const auto& a = std::get<Algebraic>(s);
    if (!(a.phi >= 1.0)) throw std::invalid_argument("algebraic factor needs phi >= 1");
    if (!(a.m0 > 0.0) || !(a.m1 > 0.0)) throw std::invalid_argument("algebraic factor needs positive masses");
  }
}

cplx central_charge_p1(const StabP1& s, const FactorClass& cls) {
  const double r = static_cast<double>(cls.rank);
  const double d = static_cast<double>(cls.degree);
  if (const auto* g = std::get_if<Geometric>(&s)) return std::exp(g->c) * (-d + g->tau * r);
  const auto& a = std::get<Algebraic>(s);
  const cplx z0 = std::polar(a.m0, std::numbers::pi * a.psi);
  const cplx z1 = std::polar(a.m1, std::numbers::pi * (a.psi + a.phi));
  return (r * (a.k + 1) - d) * z0 + (d - r * a.k) * z1;
}

std::vector<Generator> stable_objects_p1(const StabP1& s, Window window) {
  std::vector<Generator> out;
  if (is_geometric(s)) {
    for (int m = window.lo; m <= window.hi; ++m) out.push_back({{FactorSymbol::line(m)}, 0});
    out.push_back({{FactorSymbol::skyscraper()}, 0});
  } else {
    const int k = std::get<Algebraic>(s).k;
    out.push_back({{FactorSymbol::line(k)}, 0});
    out.push_back({{FactorSymbol::line(k + 1)}, 0});
  }
  return out;
}

bool is_stable_symbol(const StabP1& s, const FactorSymbol& sym) {
  if (is_geometric(s)) return true;
  const int k = std::get<Algebraic>(s).k;
  return !sym.sky && (sym.degree == k || sym.degree == k + 1);
}

double phase_p1(const StabP1& s, const FactorSymbol& sym) {
  if (const auto* g = std::get_if<Geometric>(&s)) {
    const double base = g->c.imag() / std::numbers::pi;
    if (sym.sky) return 1.0 + base;
    // arg(-m + tau) lies in (0, pi) because Im tau > 0.
    return base + std::atan2(g->tau.imag(), g->tau.real() - sym.degree) / std::numbers::pi;
  }
  const auto& a = std::get<Algebraic>(s);
  if (sym.sky || (sym.degree != a.k && sym.degree != a.k + 1))
    throw Error(ErrorCode::NotStable, "symbol is not stable for the algebraic factor", sym.to_string());
  return sym.degree == a.k ? a.psi : a.psi + a.phi;
}

double phase_p1(const StabP1& s, const Generator& g) {
  if (g.n() != 1) throw std::invalid_argument("phase_p1 expects a single-factor generator");
  return phase_p1(s, g.symbols[0]) + g.shift;
}

std::vector<HNPart> hn_p1(const StabP1& s, const FormalObject& obj) {
  struct Item {
    double phase;
    Generator g;
  };
  std::vector<Item> items;
  items.reserve(obj.filtration.size());
  for (const auto& g : obj.filtration) {
    if (g.n() != 1) throw Error(ErrorCode::UnsupportedObject, "hn_p1 expects single-factor generators", g.to_string());
    if (!is_stable_symbol(s, g.symbols[0]))
      throw Error(ErrorCode::UnsupportedObject, "subquotient outside the stable generators", g.to_string());
    items.push_back({phase_p1(s, g), g});
  }
  std::stable_sort(items.begin(), items.end(), [](const Item& x, const Item& y) { return x.phase > y.phase; });

  std::vector<HNPart> parts;
  for (auto& it : items) {
    if (parts.empty() || parts.back().phase - it.phase > kPhaseTol) parts.push_back({it.phase, {}});
    parts.back().parts.push_back(std::move(it.g));
  }
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t j = i + 1; j < parts.size(); ++j)
      for (const auto& hi : parts[i].parts)
        for (const auto& lo : parts[j].parts)
          if (hom_dim(hi, lo, 0) != 0)
            throw Error(ErrorCode::RearrangementBlocked, "nonzero Hom from a higher to a lower phase",
                        hi.to_string() + " -> " + lo.to_string());
  return parts;
}

}  // namespace stabforge
