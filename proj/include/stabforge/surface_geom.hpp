#pragma once

#include "stabforge/derived_core.hpp"
#include "stabforge/p1_stab.hpp"

#include <boost/rational.hpp>

#include <string>
#include <utility>
#include <vector>

namespace stabforge {

using Rational = boost::rational<long long>;

/// B = b1 D1 + b2 D2 and H = h1 D1 + h2 D2 on P^1 x P^1, where D1 is the
/// fibre {pt} x P^1 and D2 is P^1 x {pt}.
struct SurfaceChargeData {
  double b1 = 0.0;
  double b2 = 0.0;
  double h1 = 1.0;
  double h2 = 1.0;
};

struct RationalChargeData {
  Rational b1, b2, h1{1}, h2{1};
};

/// Chern character (rank, c1 = c1a D1 + c1b D2, ch2 as a multiple of the point).
struct SurfaceClass {
  long long r = 0;
  long long c1a = 0;
  long long c1b = 0;
  Rational ch2{0};
};

SurfaceClass line_bundle_class(long long k1, long long k2);
/// ch(E1 x E2) from rank/degree on each factor.
SurfaceClass box_class(const FactorClass& e1, const FactorClass& e2);

/// Gaussian rational, enough for exact charge arithmetic.
struct GaussRational {
  Rational re{0}, im{0};
  friend GaussRational operator+(const GaussRational& x, const GaussRational& y) { return {x.re + y.re, x.im + y.im}; }
  friend GaussRational operator-(const GaussRational& x, const GaussRational& y) { return {x.re - y.re, x.im - y.im}; }
  friend GaussRational operator*(const GaussRational& x, const GaussRational& y) {
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
  }
  friend bool operator==(const GaussRational&, const GaussRational&) = default;
};

cplx charge_BH(const SurfaceChargeData& d, const SurfaceClass& cls);
GaussRational charge_BH_exact(const RationalChargeData& d, const SurfaceClass& cls);

/// -deg + (b + i h) rank on one factor.
cplx factor_charge(double b, double h, const FactorClass& e);
GaussRational factor_charge_exact(const Rational& b, const Rational& h, const FactorClass& e);

/// Symbolic check that Z_BH(E1 x E2) + Z1(E1) Z2(E2) vanishes as a polynomial
/// in (b1, h1, b2, h2, r1, d1, r2, d2) with Gaussian-rational coefficients.
bool product_decomposition_identity();

struct DecompositionReport {
  bool ok = true;
  std::size_t samples = 0;
  double max_rel_err = 0.0;
  std::string witness;
};

using ClassPair = std::pair<FactorClass, FactorClass>;

DecompositionReport product_decomposition_check(const SurfaceChargeData& d, const std::vector<ClassPair>& samples,
                                                double tol = 1e-12);
DecompositionReport product_decomposition_check_exact(const RationalChargeData& d,
                                                      const std::vector<ClassPair>& samples);

struct GeomProduct {
  SurfaceChargeData data;
  cplx twist;
};

GeomProduct geom_product(cplx tau1, cplx c1, cplx tau2, cplx c2);

struct FamilyPhase {
  std::string family;  // line-bundle, torsion-1, torsion-2, skyscraper
  std::string object;
  double factor_sum = 0.0;     // sum of the two factor phases
  double surface_phase = 0.0;  // factor_sum - 1 - Im(c1 + c2)/pi
  bool in_window = false;
  bool charge_matches = false;
};

/// Phase bookkeeping for the four stable families with degrees in `window`.
std::vector<FamilyPhase> geom_product_phase_windows(cplx tau1, cplx c1, cplx tau2, cplx c2, Window window = {-3, 3});

cplx elliptic_product_charge(cplx tau1, cplx c1, cplx tau2, cplx c2, const FactorClass& e1, const FactorClass& e2);
/// Throws ZeroClass for (0, 0).
bool elliptic_factor_stable(long long r, long long d);
/// Phase of a class under e^c(-d + tau r); classes with r < 0, or r = 0 and
/// d < 0, are read as odd shifts of their negatives.
double elliptic_factor_phase(cplx tau, cplx c, const FactorClass& e);

}  // namespace stabforge
