/** @file mirror_numeric.hpp
 *  @brief Oscillatory integrals of exp(z + c + q/z) z^{-k} dz/z over circles
 *         and Lefschetz thimbles of W(z) = z + q/z, with q = e^a.
 */
#pragma once

#include <complex>
#include <optional>
#include <vector>

namespace stabforge {

using cplx = std::complex<double>;

struct LG1 {
  cplx a{0.0, 0.0};
  cplx c{0.0, 0.0};
  cplx q() const { return std::exp(a); }
};

struct LGModel {
  std::vector<cplx> a;
  cplx c{0.0, 0.0};
  int n() const { return static_cast<int>(a.size()); }
  LG1 factor(int i) const { return {a.at(i), {0.0, 0.0}}; }
};

/// Discrete rule: the integral of h(z) dz along the cycle is sum_j w_j h(z_j).
struct NodeSet {
  std::vector<cplx> z;
  std::vector<cplx> w;
};

/// sum_j w_j exp(z_j + c + q/z_j) z_j^{-k-1}, summed in index order.
cplx integrate_nodes(const NodeSet& nodes, cplx q, cplx c, int k);
cplx integrate_nodes_serial(const NodeSet& nodes, cplx q, cplx c, int k);

struct QuadratureOptions {
  double rel_tol = 1e-13;
  int min_nodes = 32;
  int max_nodes = 1 << 16;
  bool parallel = true;
};

struct CircleResult {
  cplx value;
  int nodes = 0;
  double last_change = 0.0;
};

NodeSet circle_nodes(double radius, int count);

/// Periodic trapezoid rule with node doubling, summed in long double;
/// QuadratureNotConverged when doubling stops helping before max_nodes.
CircleResult circle_charge(const LG1& m, int k, double radius = 1.0, const QuadratureOptions& opts = {});

/// 2 pi i e^c sum_j q^j / (j! (j+k)!), the Laurent coefficient of z^k.
cplx bessel_oracle(const LG1& m, int k);
/// Modified Bessel function I_k(x) by its power series (k of either sign).
cplx bessel_I(int k, cplx x);

struct ThimbleOptions {
  double cutoff = 40.0;
  double rel_tol = 1e-13;
  int min_panels = 8;
  int max_panels = 1 << 12;
  /// |Im(W(p) - W(-p))| below this (relative to 1 + |W(p)|) is a Stokes
  /// configuration: the descent from the upper saddle runs into the other one.
  double wall_tol = 1e-12;
  /// At a Stokes configuration, +1 returns the limit of the thimble from
  /// Im(a) > 0 and -1 the limit from Im(a) < 0.
  int stokes_side = 1;
  double guard = 1e-12;
  int path_samples = 200;
};

struct ThimbleResult {
  cplx saddle;
  cplx critical_value;
  std::vector<cplx> path;  // from the end at 0 to the end at infinity
  cplx integral;           // oriented the same way
  double im_drift = 0.0;
  double tail_bound = 0.0;
  bool broken = false;
  int panels = 0;
  int weight = 0;
  NodeSet nodes;
};

/// Descent from the saddle sign * sqrt(q) (principal root).
ThimbleResult trace_thimble(const LG1& m, int sign, const ThimbleOptions& opts = {}, int weight = 0);
/// Descent from an explicitly given saddle (either square root of q).
ThimbleResult trace_thimble_at(const LG1& m, cplx saddle, const ThimbleOptions& opts = {}, int weight = 0);

/// Leading saddle-point term of the thimble integral through `saddle`, with
/// the same orientation as trace_thimble_at.
cplx saddle_asymptotic(const LG1& m, cplx saddle, int weight = 0);

enum class CycleKind { Circle, ThimblePlus, ThimbleMinus };

struct CycleSpec {
  CycleKind kind = CycleKind::Circle;
  double radius = 1.0;
};

struct ProductNumericResult {
  cplx value;
  std::vector<cplx> factors;  // per-factor integrals without e^c
  std::optional<cplx> tensor_value;
  double tensor_rel_err = 0.0;
};

ProductNumericResult product_charge_numeric(const LGModel& m, const std::vector<int>& weights,
                                            const std::vector<CycleSpec>& cycles, bool tensor_check = true,
                                            bool parallel = true);

/// Direct two-dimensional sum over the tensor grid of two node sets.
cplx tensor_quadrature_2d(const NodeSet& n1, const NodeSet& n2, cplx q1, cplx q2, int k1, int k2, cplx c);
cplx tensor_quadrature_2d_serial(const NodeSet& n1, const NodeSet& n2, cplx q1, cplx q2, int k1, int k2, cplx c);

struct MonodromyReport {
  int steps = 0;
  double loops = 1.0;
  cplx start_plus, start_minus;
  cplx end_plus, end_minus;
  bool swapped = false;   // end_plus == start_minus
  bool identity = false;  // end_plus == start_plus
  cplx circle_start, circle_end;
  double circle_rel_change = 0.0;
  std::vector<cplx> track;  // continued root that starts at +sqrt(q)
  cplx thimble_start_plus, thimble_start_minus;
  cplx thimble_end_plus, thimble_end_minus;
};

/// Follows a(t) = a0 + 2 pi i t for t in [0, loops], tracking the saddles by
/// continuity. TrackingLost if one step moves a root by half the separation.
MonodromyReport monodromy_probe(const LG1& m, int steps = 64, double loops = 1.0, int weight = 0,
                                bool with_thimbles = true);

}  // namespace stabforge
