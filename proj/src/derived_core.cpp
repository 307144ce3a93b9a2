#include "stabforge/derived_core.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <stdexcept>

namespace stabforge {

KClass KClass::zero(int n) { return {n, std::vector<long long>(std::size_t{1} << n, 0)}; }

KClass KClass::from_factors(const std::vector<FactorClass>& factors) {
  KClass out{1, {factors.at(0).rank, factors.at(0).degree}};
  for (std::size_t l = 1; l < factors.size(); ++l)
    out = external_product(out, KClass{1, {factors[l].rank, factors[l].degree}});
  return out;
}

KClass operator+(const KClass& x, const KClass& y) {
  if (x.n != y.n) throw std::invalid_argument("KClass sum across different factor counts");
  KClass out = x;
  for (std::size_t i = 0; i < out.coords.size(); ++i) out.coords[i] += y.coords[i];
  return out;
}

KClass operator-(const KClass& x, const KClass& y) { return x + (-1) * y; }

KClass operator*(long long s, const KClass& x) {
  KClass out = x;
  for (auto& v : out.coords) v *= s;
  return out;
}

KClass external_product(const KClass& x, const KClass& y) {
  KClass out{x.n + y.n, std::vector<long long>(x.coords.size() * y.coords.size())};
  for (std::size_t i = 0; i < x.coords.size(); ++i)
    for (std::size_t j = 0; j < y.coords.size(); ++j) out.coords[i * y.coords.size() + j] = x.coords[i] * y.coords[j];
  return out;
}

int MultiIndex::weight() const { return std::popcount(mask); }

std::string MultiIndex::to_string() const {
  std::string s = "(";
  for (int l = 0; l < n; ++l) {
    if (l) s += ',';
    s += static_cast<char>('0' + bit(l));
  }
  return s + ")";
}

std::string FactorSymbol::to_string() const { return sky ? "Sky" : "O(" + std::to_string(degree) + ")"; }

KClass Generator::sheaf_class() const {
  std::vector<FactorClass> fc;
  fc.reserve(symbols.size());
  for (const auto& s : symbols) fc.push_back(s.factor_class());
  return KClass::from_factors(fc);
}

std::string Generator::to_string() const {
  std::string s;
  for (std::size_t l = 0; l < symbols.size(); ++l) {
    if (l) s += '*';
    s += symbols[l].to_string();
  }
  return s + "[" + std::to_string(shift) + "]";
}

Generator line_bundle(const std::vector<int>& degrees, int shift) {
  Generator g{{}, shift};
  for (int d : degrees) g.symbols.push_back(FactorSymbol::line(d));
  return g;
}

GradedDims factor_hom_degrees(const FactorSymbol& a, const FactorSymbol& b) {
  GradedDims out;
  if (!a.sky && !b.sky) {
    const long long h0 = std::max<long long>(b.degree - a.degree + 1, 0);
    const long long h1 = std::max<long long>(a.degree - b.degree - 1, 0);
    if (h0) out[0] = h0;
    if (h1) out[1] = h1;
  } else if (!a.sky && b.sky) {
    out[0] = 1;
  } else if (a.sky && !b.sky) {
    out[1] = 1;
  } else {
    out[0] = 1;
    out[1] = 1;
  }
  return out;
}

GradedDims hom_degrees(const Generator& g1, const Generator& g2) {
  if (g1.n() != g2.n()) throw std::invalid_argument("hom_degrees across different factor counts");
  GradedDims acc{{0, 1}};
  for (int l = 0; l < g1.n(); ++l) {
    const GradedDims f = factor_hom_degrees(g1.symbols[l], g2.symbols[l]);
    GradedDims next;
    for (auto [da, va] : acc)
      for (auto [db, vb] : f) next[da + db] += va * vb;
    acc = std::move(next);
    if (acc.empty()) return acc;
  }
  // Hom(A[a], B[b][k]) = Hom(A, B[k + b - a]); reindex by the shift difference.
  GradedDims out;
  const int offset = g2.shift - g1.shift;
  for (auto [d, v] : acc) out[d - offset] = v;
  return out;
}

long long hom_dim(const Generator& g1, const Generator& g2, int k) {
  const GradedDims dims = hom_degrees(g1, g2);
  auto it = dims.find(k);
  return it == dims.end() ? 0 : it->second;
}

KClass k_class(const Generator& g) { return (g.shift % 2 == 0 ? 1 : -1) * g.sheaf_class(); }

KClass k_class(const FormalObject& obj) {
  KClass acc = KClass::zero(obj.n);
  for (const auto& g : obj.filtration) acc = acc + k_class(g);
  return acc;
}

long long euler_characteristic(const GradedDims& dims) {
  long long chi = 0;
  for (auto [d, v] : dims) chi += (d % 2 == 0 ? v : -v);
  return chi;
}

long long euler_form(const KClass& x, const KClass& y) {
  if (x.n != y.n) throw std::invalid_argument("euler_form across different factor counts");
  // Single-factor form on (e_O, e_pt): chi(O,O)=1, chi(O,pt)=1, chi(pt,O)=-1, chi(pt,pt)=0.
  static constexpr long long kFactor[2][2] = {{1, 1}, {-1, 0}};
  long long total = 0;
  const std::size_t size = x.coords.size();
  for (std::size_t s = 0; s < size; ++s) {
    if (!x.coords[s]) continue;
    for (std::size_t t = 0; t < size; ++t) {
      if (!y.coords[t]) continue;
      long long w = 1;
      for (int l = 0; l < x.n && w; ++l) {
        const unsigned b = factor_bit(x.n, l);
        w *= kFactor[(s & b) ? 1 : 0][(t & b) ? 1 : 0];
      }
      total += w * x.coords[s] * y.coords[t];
    }
  }
  return total;
}

namespace {

// Apply a 2x2 integer matrix along the axis of factor l.
void apply_axis(std::vector<long long>& v, int n, int l, const long long m[2][2]) {
  const unsigned b = factor_bit(n, l);
  for (std::size_t s = 0; s < v.size(); ++s) {
    if (s & b) continue;
    const long long lo = v[s], hi = v[s | b];
    v[s] = m[0][0] * lo + m[0][1] * hi;
    v[s | b] = m[1][0] * lo + m[1][1] * hi;
  }
}

}  // namespace

std::vector<long long> to_line_bundle_basis(const KClass& x, const std::vector<int>& ks) {
  assert(static_cast<int>(ks.size()) == x.n);
  std::vector<long long> v = x.coords;
  for (int l = 0; l < x.n; ++l) {
    const long long k = ks[l];
    const long long inv[2][2] = {{k + 1, -1}, {-k, 1}};
    apply_axis(v, x.n, l, inv);
  }
  return v;
}

KClass from_line_bundle_basis(const std::vector<long long>& coeffs, const std::vector<int>& ks) {
  const int n = static_cast<int>(ks.size());
  KClass out{n, coeffs};
  for (int l = 0; l < n; ++l) {
    const long long k = ks[l];
    const long long fwd[2][2] = {{1, 1}, {k, k + 1}};
    apply_axis(out.coords, n, l, fwd);
  }
  return out;
}

}  // namespace stabforge
