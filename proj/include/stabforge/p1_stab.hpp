#pragma once

#include "stabforge/derived_core.hpp"

#include <complex>
#include <variant>
#include <vector>

namespace stabforge {

using cplx = std::complex<double>;

/// Z(E) = e^c (-deg E + tau rank E) with Im tau > 0.
struct Geometric {
  cplx tau{0.0, 1.0};
  cplx c{0.0, 0.0};
};

/// O(k) stable at phase psi with mass m0, O(k+1) stable at phase psi+phi
/// with mass m1; phi >= 1.
struct Algebraic {
  int k = 0;
  double psi = 0.0;
  double phi = 1.0;
  double m0 = 1.0;
  double m1 = 1.0;
};

using StabP1 = std::variant<Geometric, Algebraic>;

inline bool is_geometric(const StabP1& s) { return std::holds_alternative<Geometric>(s); }

/// Throws std::invalid_argument when the parameters leave the family.
void validate(const StabP1& s);

struct Window {
  int lo = -8;
  int hi = 8;
};

/// Two classes whose phases differ by less than this are treated as equal.
inline constexpr double kPhaseTol = 1e-11;

cplx central_charge_p1(const StabP1& s, const FactorClass& cls);
std::vector<Generator> stable_objects_p1(const StabP1& s, Window window = {});
bool is_stable_symbol(const StabP1& s, const FactorSymbol& sym);
/// Phase of a shifted single-factor generator; throws NotStable.
double phase_p1(const StabP1& s, const Generator& g);
double phase_p1(const StabP1& s, const FactorSymbol& sym);

struct HNPart {
  double phase = 0.0;
  std::vector<Generator> parts;
};

/// Harder-Narasimhan grouping of a one-factor formal object. Every object of
/// D^b(P^1) splits into shifted indecomposables, so the filtration is read as
/// a direct sum and sorted; the Hom^0 vanishing between distinct parts is
/// then asserted.
std::vector<HNPart> hn_p1(const StabP1& s, const FormalObject& obj);

}  // namespace stabforge
