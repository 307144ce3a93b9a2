#include "stabforge/surface_geom.hpp"
#include "stabforge/errors.hpp"

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

namespace stabforge {

namespace {

// Element x0 + x1 D1 + x2 D2 + x12 D1 D2 of R[D1, D2]/(D1^2, D2^2).
template <class S>
struct Truncated {
  S x0, x1, x2, x12;
};

template <class S>
Truncated<S> mul(const Truncated<S>& a, const Truncated<S>& b) {
  return {a.x0 * b.x0, a.x0 * b.x1 + a.x1 * b.x0, a.x0 * b.x2 + a.x2 * b.x0,
          a.x0 * b.x12 + a.x12 * b.x0 + a.x1 * b.x2 + a.x2 * b.x1};
}

// -(D1 D2 coefficient of exp(-(beta1 D1 + beta2 D2)) * ch), with
// exp(-beta) = 1 - beta1 D1 - beta2 D2 + beta1 beta2 D1 D2 in this ring.
template <class S>
S charge_generic(const S& beta1, const S& beta2, const S& r, const S& c1a, const S& c1b, const S& ch2, const S& zero,
                 const S& one) {
  const Truncated<S> e{one, zero - beta1, zero - beta2, beta1 * beta2};
  const Truncated<S> ch{r, c1a, c1b, ch2};
  return zero - mul(e, ch).x12;
}

GaussRational gr(Rational re, Rational im = 0) { return {re, im}; }

// Polynomial over Gaussian rationals in the variables b1 h1 b2 h2 r1 d1 r2 d2.
struct Poly {
  using Mono = std::array<int, 8>;
  std::map<Mono, GaussRational> terms;

  static Poly constant(GaussRational c) {
    Poly p;
    if (!(c == GaussRational{})) p.terms[Mono{}] = c;
    return p;
  }
  static Poly var(int i) {
    Poly p;
    Mono m{};
    m[i] = 1;
    p.terms[m] = gr(1);
    return p;
  }
  friend Poly operator+(Poly a, const Poly& b) {
    for (const auto& [m, c] : b.terms) {
      a.terms[m] = a.terms[m] + c;
      if (a.terms[m] == GaussRational{}) a.terms.erase(m);
    }
    return a;
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + b * constant(gr(-1)); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a.terms)
      for (const auto& [mb, cb] : b.terms) {
        Mono m;
        for (int i = 0; i < 8; ++i) m[i] = ma[i] + mb[i];
        const GaussRational sum = out.terms[m] + ca * cb;
        if (sum == GaussRational{})
          out.terms.erase(m);
        else
          out.terms[m] = sum;
      }
    return out;
  }
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::string fmt(const FactorClass& e) { return "(" + std::to_string(e.rank) + "," + std::to_string(e.degree) + ")"; }

}  // namespace

SurfaceClass line_bundle_class(long long k1, long long k2) { return {1, k1, k2, Rational(k1 * k2)}; }

SurfaceClass box_class(const FactorClass& e1, const FactorClass& e2) {
  return {e1.rank * e2.rank, e1.degree * e2.rank, e1.rank * e2.degree, Rational(e1.degree * e2.degree)};
}

cplx charge_BH(const SurfaceChargeData& d, const SurfaceClass& cls) {
  const cplx beta1{d.b1, d.h1}, beta2{d.b2, d.h2};
  const double ch2 = static_cast<double>(cls.ch2.numerator()) / static_cast<double>(cls.ch2.denominator());
  return charge_generic<cplx>(beta1, beta2, static_cast<double>(cls.r), static_cast<double>(cls.c1a),
                              static_cast<double>(cls.c1b), ch2, 0.0, 1.0);
}

GaussRational charge_BH_exact(const RationalChargeData& d, const SurfaceClass& cls) {
  return charge_generic<GaussRational>(gr(d.b1, d.h1), gr(d.b2, d.h2), gr(cls.r), gr(cls.c1a), gr(cls.c1b), gr(cls.ch2),
                                       gr(0), gr(1));
}

cplx factor_charge(double b, double h, const FactorClass& e) {
  return -static_cast<double>(e.degree) + cplx{b, h} * static_cast<double>(e.rank);
}

GaussRational factor_charge_exact(const Rational& b, const Rational& h, const FactorClass& e) {
  return gr(-e.degree) + gr(b, h) * gr(e.rank);
}

bool product_decomposition_identity() {
  const Poly i = Poly::constant(gr(0, 1));
  const Poly b1 = Poly::var(0), h1 = Poly::var(1), b2 = Poly::var(2), h2 = Poly::var(3);
  const Poly r1 = Poly::var(4), d1 = Poly::var(5), r2 = Poly::var(6), d2 = Poly::var(7);
  const Poly beta1 = b1 + i * h1, beta2 = b2 + i * h2;
  const Poly zero, one = Poly::constant(gr(1));
  // ch(E1 x E2) = (r1 r2, d1 r2, r1 d2, d1 d2).
  const Poly lhs = charge_generic<Poly>(beta1, beta2, r1 * r2, d1 * r2, r1 * d2, d1 * d2, zero, one);
  const Poly z1 = zero - d1 + beta1 * r1;
  const Poly z2 = zero - d2 + beta2 * r2;
  return (lhs + z1 * z2).terms.empty();
}

DecompositionReport product_decomposition_check(const SurfaceChargeData& d, const std::vector<ClassPair>& samples,
                                                double tol) {
  DecompositionReport rep;
  for (const auto& [e1, e2] : samples) {
    ++rep.samples;
    const cplx lhs = charge_BH(d, box_class(e1, e2));
    const cplx z1 = factor_charge(d.b1, d.h1, e1);
    const cplx z2 = factor_charge(d.b2, d.h2, e2);
    const cplx rhs = -z1 * z2;
    const double scale = std::max({std::abs(z1) * std::abs(z2), std::abs(lhs), 1e-300});
    const double err = std::abs(lhs - rhs) / scale;
    rep.max_rel_err = std::max(rep.max_rel_err, err);
    if (err > tol && rep.ok) {
      rep.ok = false;
      rep.witness = fmt(e1) + " x " + fmt(e2) + " rel err " + fmt(err);
    }
  }
  return rep;
}

DecompositionReport product_decomposition_check_exact(const RationalChargeData& d, const std::vector<ClassPair>& samples) {
  DecompositionReport rep;
  for (const auto& [e1, e2] : samples) {
    ++rep.samples;
    const GaussRational lhs = charge_BH_exact(d, box_class(e1, e2));
    const GaussRational rhs = gr(0) - factor_charge_exact(d.b1, d.h1, e1) * factor_charge_exact(d.b2, d.h2, e2);
    if (!(lhs == rhs) && rep.ok) {
      rep.ok = false;
      rep.witness = fmt(e1) + " x " + fmt(e2);
    }
  }
  return rep;
}

GeomProduct geom_product(cplx tau1, cplx c1, cplx tau2, cplx c2) {
  if (!(tau1.imag() > 0.0) || !(tau2.imag() > 0.0)) throw std::invalid_argument("geometric factors need Im(tau) > 0");
  return {{tau1.real(), tau2.real(), tau1.imag(), tau2.imag()}, c1 + c2 + cplx{0.0, std::numbers::pi}};
}

std::vector<FamilyPhase> geom_product_phase_windows(cplx tau1, cplx c1, cplx tau2, cplx c2, Window window) {
  const GeomProduct gp = geom_product(tau1, c1, tau2, c2);
  const StabP1 s1 = Geometric{tau1, c1}, s2 = Geometric{tau2, c2};
  const double base = (c1 + c2).imag() / std::numbers::pi;
  std::vector<FamilyPhase> out;

  auto record = [&](const std::string& family, const FactorSymbol& x1, const FactorSymbol& x2, double lo, double hi) {
    FamilyPhase fp;
    fp.family = family;
    fp.object = x1.to_string() + "*" + x2.to_string();
    fp.factor_sum = phase_p1(s1, x1) + phase_p1(s2, x2);
    fp.surface_phase = fp.factor_sum - 1.0 - base;
    fp.in_window = (lo == hi) ? std::abs(fp.surface_phase - lo) <= 1e-12 : (fp.surface_phase > lo && fp.surface_phase < hi);
    // e^twist Z_BH must equal the product of the twisted factor charges and
    // point along pi times the factor phase sum.
    const FactorClass e1 = x1.factor_class(), e2 = x2.factor_class();
    const cplx z_surface = std::exp(gp.twist) * charge_BH(gp.data, box_class(e1, e2));
    const cplx z_factors = central_charge_p1(s1, e1) * central_charge_p1(s2, e2);
    const double gap = std::remainder(std::arg(z_surface) - std::numbers::pi * fp.factor_sum, 2.0 * std::numbers::pi);
    fp.charge_matches = std::abs(z_surface - z_factors) <= 1e-12 * std::abs(z_factors) && std::abs(gap) <= 1e-10;
    out.push_back(fp);
  };

  for (int k1 = window.lo; k1 <= window.hi; ++k1)
    for (int k2 = window.lo; k2 <= window.hi; ++k2)
      record("line-bundle", FactorSymbol::line(k1), FactorSymbol::line(k2), -1.0, 1.0);
  for (int k = window.lo; k <= window.hi; ++k) {
    record("torsion-2", FactorSymbol::line(k), FactorSymbol::skyscraper(), 0.0, 1.0);
    record("torsion-1", FactorSymbol::skyscraper(), FactorSymbol::line(k), 0.0, 1.0);
  }
  record("skyscraper", FactorSymbol::skyscraper(), FactorSymbol::skyscraper(), 1.0, 1.0);
  return out;
}

cplx elliptic_product_charge(cplx tau1, cplx c1, cplx tau2, cplx c2, const FactorClass& e1, const FactorClass& e2) {
  const cplx f1 = -static_cast<double>(e1.degree) + tau1 * static_cast<double>(e1.rank);
  const cplx f2 = -static_cast<double>(e2.degree) + tau2 * static_cast<double>(e2.rank);
  return std::exp(c1 + c2 + cplx{0.0, std::numbers::pi}) * (-1.0) * f1 * f2;
}

bool elliptic_factor_stable(long long r, long long d) {
  if (r == 0 && d == 0) throw Error(ErrorCode::ZeroClass, "zero class has no stability", "(0,0)");
  return std::gcd(r < 0 ? -r : r, d < 0 ? -d : d) == 1;
}

double elliptic_factor_phase(cplx tau, cplx c, const FactorClass& e) {
  if (e.rank == 0 && e.degree == 0) throw Error(ErrorCode::ZeroClass, "zero class has no phase", "(0,0)");
  const bool negative = e.rank < 0 || (e.rank == 0 && e.degree < 0);
  const FactorClass v = negative ? (-1) * e : e;
  const double base = c.imag() / std::numbers::pi;
  const double theta = v.rank == 0 ? 1.0 : std::atan2(tau.imag() * v.rank, tau.real() * v.rank - v.degree) / std::numbers::pi;
  return base + theta + (negative ? 1.0 : 0.0);
}

}  // namespace stabforge
