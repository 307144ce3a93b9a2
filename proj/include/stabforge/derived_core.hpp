/** @file derived_core.hpp
 *  @brief K-lattice of (P^1)^n, shifted generator objects, and graded Hom
 *         dimensions between them.
 */
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace stabforge {

/// Rank and degree of a class on one P^1 factor.
struct FactorClass {
  long long rank = 0;
  long long degree = 0;

  friend FactorClass operator+(FactorClass x, FactorClass y) { return {x.rank + y.rank, x.degree + y.degree}; }
  friend FactorClass operator-(FactorClass x, FactorClass y) { return {x.rank - y.rank, x.degree - y.degree}; }
  friend FactorClass operator*(long long s, FactorClass x) { return {s * x.rank, s * x.degree}; }
  friend bool operator==(const FactorClass&, const FactorClass&) = default;
};

/// Class in the tensor basis e_S. Index S is a bitmask where factor l owns
/// bit (n-1-l); a set bit selects the point class in that factor. With this
/// layout the external product is literally the Kronecker product.
struct KClass {
  int n = 1;
  std::vector<long long> coords;

  static KClass zero(int n);
  static KClass from_factors(const std::vector<FactorClass>& factors);

  friend KClass operator+(const KClass& x, const KClass& y);
  friend KClass operator-(const KClass& x, const KClass& y);
  friend KClass operator*(long long s, const KClass& x);
  friend bool operator==(const KClass&, const KClass&) = default;
};

KClass external_product(const KClass& x, const KClass& y);

/// Bit position of factor l inside an n-factor mask.
inline unsigned factor_bit(int n, int l) { return 1u << (n - 1 - l); }

/// Element of {0,1}^n, stored with the same bit layout as KClass indices.
struct MultiIndex {
  int n = 1;
  unsigned mask = 0;

  int bit(int l) const { return (mask & factor_bit(n, l)) ? 1 : 0; }
  int weight() const;
  bool leq(const MultiIndex& other) const { return (mask & ~other.mask) == 0; }
  std::string to_string() const;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

/// O(m) on one factor, or the skyscraper at the marked point.
struct FactorSymbol {
  bool sky = false;
  int degree = 0;

  static FactorSymbol line(int m) { return {false, m}; }
  static FactorSymbol skyscraper() { return {true, 0}; }
  FactorClass factor_class() const { return sky ? FactorClass{0, 1} : FactorClass{1, degree}; }
  std::string to_string() const;
  friend auto operator<=>(const FactorSymbol&, const FactorSymbol&) = default;
};

/// External product of factor symbols, homologically shifted.
struct Generator {
  std::vector<FactorSymbol> symbols;
  int shift = 0;

  int n() const { return static_cast<int>(symbols.size()); }
  Generator shifted(int by) const { return {symbols, shift + by}; }
  /// Class of the unshifted sheaf product.
  KClass sheaf_class() const;
  std::string to_string() const;
  friend auto operator<=>(const Generator&, const Generator&) = default;
};

Generator line_bundle(const std::vector<int>& degrees, int shift = 0);

/// Filtration list, bottom subquotient first. Empty means the zero object.
struct FormalObject {
  int n = 1;
  std::vector<Generator> filtration;
};

/// Graded dimensions, degree -> dimension; zero entries are never stored.
using GradedDims = std::map<int, long long>;

GradedDims factor_hom_degrees(const FactorSymbol& a, const FactorSymbol& b);
GradedDims hom_degrees(const Generator& g1, const Generator& g2);
/// Dimension of Hom^k(g1, g2), i.e. Hom(g1, g2[k]).
long long hom_dim(const Generator& g1, const Generator& g2, int k);

KClass k_class(const Generator& g);
KClass k_class(const FormalObject& obj);

/// Euler form sum_k (-1)^k dim Hom^k evaluated on lattice classes.
long long euler_form(const KClass& x, const KClass& y);
long long euler_characteristic(const GradedDims& dims);

/// Coordinates of a class in the basis L_I = O(k_1+i_1, ..., k_n+i_n),
/// and back. Both directions are exact unimodular integer maps.
std::vector<long long> to_line_bundle_basis(const KClass& x, const std::vector<int>& ks);
KClass from_line_bundle_basis(const std::vector<long long>& coeffs, const std::vector<int>& ks);

}  // namespace stabforge
