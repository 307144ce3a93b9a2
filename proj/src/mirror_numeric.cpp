#include "stabforge/mirror_numeric.hpp"
#include "stabforge/errors.hpp"
#include "stabforge/parallel.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace stabforge {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// exp(z + c + q/z) z^{-k-1}; the power goes through the principal log, which
// is single valued for integer exponents.
cplx density(cplx z, cplx q, cplx c, int k) { return std::exp(z + c + q / z - static_cast<double>(k + 1) * std::log(z)); }

std::size_t parallel_threshold() { return 2048; }

// Gauss-Legendre rule on [-1, 1] as full symmetric arrays.
struct GaussRule {
  std::vector<double> x, w;
};

const GaussRule& gauss_rule() {
  static const GaussRule rule = [] {
    using G = boost::math::quadrature::gauss<double, 20>;
    GaussRule r;
    const auto& ab = G::abscissa();
    const auto& wt = G::weights();
    for (std::size_t i = ab.size(); i-- > 0;) {
      r.x.push_back(-ab[i]);
      r.w.push_back(wt[i]);
    }
    for (std::size_t i = (ab[0] == 0.0 ? 1 : 0); i < ab.size(); ++i) {
      r.x.push_back(ab[i]);
      r.w.push_back(wt[i]);
    }
    return r;
  }();
  return rule;
}

// One smooth piece of a thimble, parametrized by x in [0, extent] and
// starting at a saddle whose critical value is `wp`.
//  descent:    W(z(x)) = wp - x^2, branch sigma = +1 heads to 0, -1 to infinity.
//  connection: W(z(x)) = wp - dc sin^2 x for x in [0, pi/2], ending at the
//              other saddle; sigma picks one of the two arcs.
struct Piece {
  bool connection = false;
  cplx wp;
  cplx dc;
  int sigma = 1;
  double extent = 0.0;
  bool reversed = false;  // traversed from x = extent back to 0 along the path

  void eval(double x, cplx& z, cplx& dz) const {
    if (!connection) {
      const cplx s = std::sqrt(cplx{x * x, 0.0} - 2.0 * wp);
      z = 0.5 * (wp - x * x + static_cast<double>(sigma) * x * s);
      dz = 0.5 * (-2.0 * x + static_cast<double>(sigma) * (s + x * x / s));
    } else {
      const double sn = std::sin(x), cs = std::cos(x);
      z = 0.5 * (wp - dc * sn * sn + static_cast<double>(sigma) * I * dc * sn * cs);
      dz = 0.5 * dc * (-std::sin(2.0 * x) + static_cast<double>(sigma) * I * std::cos(2.0 * x));
    }
  }
};

// Panel breakpoints for one piece. Near a Stokes configuration the descent
// parametrization has a branch point just off the real x axis at
// x^2 = 2 wp, so the mesh is graded geometrically toward it.
std::vector<double> base_breaks(const Piece& p, int uniform) {
  std::vector<double> b;
  for (int j = 0; j <= uniform; ++j) b.push_back(p.extent * j / uniform);
  if (!p.connection) {
    const cplx root = std::sqrt(2.0 * p.wp);
    const double xs = root.real(), dist = std::abs(root.imag());
    if (xs > 0.0 && xs < p.extent && dist < 0.1 * xs) {
      for (double h = 0.5 * std::min(xs, p.extent - xs); h > 0.25 * dist; h *= 0.5) {
        b.push_back(xs - h);
        b.push_back(xs + h);
      }
      b.push_back(xs);
    }
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

NodeSet build_nodes(const std::vector<Piece>& pieces, int uniform, int subdivide) {
  const GaussRule& g = gauss_rule();
  NodeSet ns;
  for (const auto& p : pieces) {
    const double orient = p.reversed ? -1.0 : 1.0;
    const std::vector<double> b = base_breaks(p, uniform);
    for (std::size_t s = 0; s + 1 < b.size(); ++s) {
      const double h = (b[s + 1] - b[s]) / subdivide;
      for (int j = 0; j < subdivide; ++j) {
        const double mid = b[s] + (j + 0.5) * h;
        for (std::size_t i = 0; i < g.x.size(); ++i) {
          cplx z, dz;
          p.eval(mid + 0.5 * h * g.x[i], z, dz);
          ns.z.push_back(z);
          ns.w.push_back(orient * 0.5 * h * g.w[i] * dz);
        }
      }
    }
  }
  return ns;
}

double roundoff_floor(const NodeSet& ns, cplx q, cplx c, int k) {
  double s = 0.0;
  for (std::size_t j = 0; j < ns.z.size(); ++j) s += std::abs(ns.w[j] * density(ns.z[j], q, c, k));
  return 1e-15 * s;
}

}  // namespace

cplx integrate_nodes_serial(const NodeSet& nodes, cplx q, cplx c, int k) {
  cplx sum = 0.0;
  for (std::size_t j = 0; j < nodes.z.size(); ++j) sum += nodes.w[j] * density(nodes.z[j], q, c, k);
  return sum;
}

cplx integrate_nodes(const NodeSet& nodes, cplx q, cplx c, int k) {
  const long count = static_cast<long>(nodes.z.size());
  std::vector<cplx> terms(nodes.z.size());
#pragma omp parallel for schedule(static) num_threads(worker_count()) if (nodes.z.size() >= parallel_threshold())
  for (long j = 0; j < count; ++j) terms[j] = nodes.w[j] * density(nodes.z[j], q, c, k);
  cplx sum = 0.0;
  for (const cplx& t : terms) sum += t;  // fixed order keeps results bitwise reproducible
  return sum;
}

NodeSet circle_nodes(double radius, int count) {
  NodeSet ns;
  ns.z.reserve(count);
  ns.w.reserve(count);
  for (int j = 0; j < count; ++j) {
    const cplx z = std::polar(radius, 2.0 * kPi * j / count);
    ns.z.push_back(z);
    ns.w.push_back(I * z * (2.0 * kPi / count));
  }
  return ns;
}

namespace {

// Trapezoid sum on |z| = radius carried in long double. On small or large
// circles the integrand exceeds the result by up to 1e9, which leaves too few
// digits in a double sum for the radius to drop out at 1e-10.
struct CircleSum {
  cplx value;
  double abs_sum = 0.0;
};

CircleSum circle_trapezoid(double radius, int count, cplx q, cplx c, int k, bool parallel) {
  using ld = long double;
  using cld = std::complex<ld>;
  const ld h = 2 * std::numbers::pi_v<ld> / count;
  const cld ql(q.real(), q.imag()), cl(c.real(), c.imag());
  std::vector<cld> terms(static_cast<std::size_t>(count));
  auto term = [&](long j) {
    const cld z = std::polar(static_cast<ld>(radius), h * j);
    return cld(0, h) * std::exp(z + cl + ql / z - static_cast<ld>(k) * std::log(z));
  };
  if (parallel) {
#pragma omp parallel for schedule(static) num_threads(worker_count()) if (terms.size() >= parallel_threshold())
    for (long j = 0; j < count; ++j) terms[j] = term(j);
  } else {
    for (long j = 0; j < count; ++j) terms[j] = term(j);
  }
  cld sum = 0;
  ld abs_sum = 0;
  for (const cld& t : terms) {
    sum += t;
    abs_sum += std::abs(t);
  }
  return {cplx(static_cast<double>(sum.real()), static_cast<double>(sum.imag())), static_cast<double>(abs_sum)};
}

}  // namespace

CircleResult circle_charge(const LG1& m, int k, double radius, const QuadratureOptions& opts) {
  if (!(radius > 0.0)) throw std::invalid_argument("circle radius must be positive");
  const cplx q = m.q();
  int count = opts.min_nodes;
  cplx prev = circle_trapezoid(radius, count, q, m.c, k, opts.parallel).value;
  while (count < opts.max_nodes) {
    count *= 2;
    const CircleSum cur = circle_trapezoid(radius, count, q, m.c, k, opts.parallel);
    const double change = std::abs(cur.value - prev);
    if (change <= opts.rel_tol * std::abs(cur.value) + 1e-18 * cur.abs_sum) return {cur.value, count, change};
    prev = cur.value;
  }
  throw Error(ErrorCode::QuadratureNotConverged, "circle quadrature did not settle under node doubling",
              "nodes " + std::to_string(count) + " radius " + fmt(radius));
}

cplx bessel_oracle(const LG1& m, int k) {
  const cplx q = m.q();
  const int j0 = std::max(0, -k);
  // term_j = q^j / (j! (j+k)!), built by ratios from the first nonzero term.
  cplx term = std::pow(q, j0) / (std::tgamma(j0 + 1.0) * std::tgamma(j0 + k + 1.0));
  cplx sum = 0.0;
  for (int j = j0; j < j0 + 400; ++j) {
    sum += term;
    term *= q / (static_cast<double>(j + 1) * static_cast<double>(j + 1 + k));
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return 2.0 * kPi * I * std::exp(m.c) * sum;
}

cplx bessel_I(int k, cplx x) {
  const int n = std::abs(k);
  const cplx half = 0.5 * x;
  cplx term = std::pow(half, n) / std::tgamma(n + 1.0);
  cplx sum = 0.0;
  const cplx h2 = half * half;
  for (int j = 0; j < 400; ++j) {
    sum += term;
    term *= h2 / (static_cast<double>(j + 1) * static_cast<double>(j + 1 + n));
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

ThimbleResult trace_thimble(const LG1& m, int sign, const ThimbleOptions& opts, int weight) {
  return trace_thimble_at(m, static_cast<double>(sign >= 0 ? 1 : -1) * std::sqrt(m.q()), opts, weight);
}

ThimbleResult trace_thimble_at(const LG1& m, cplx p, const ThimbleOptions& opts, int weight) {
  const cplx q = m.q();
  if (!(opts.cutoff > 0.0)) throw std::invalid_argument("thimble cutoff must be positive");
  ThimbleResult res;
  res.saddle = p;
  res.weight = weight;
  const cplx wp = 2.0 * p;  // W(p) = p + q/p = 2p
  res.critical_value = wp;
  const cplx dc = 2.0 * wp;  // W(p) - W(-p)

  std::vector<Piece> pieces;
  res.broken = dc.real() > 0.0 && std::abs(dc.imag()) <= opts.wall_tol * (1.0 + std::abs(wp));
  if (!res.broken) {
    const double x = std::sqrt(opts.cutoff);
    pieces.push_back({false, wp, dc, +1, x, true});
    pieces.push_back({false, wp, dc, -1, x, false});
  } else {
    // The descent runs into -p along two saddle connections and continues
    // down the thimble of -p. Arc sigma turns left onto branch sigma of -p
    // when the broken path is the limit from Im(W(p) - W(-p)) > 0.
    const double rest = opts.cutoff - dc.real();
    if (!(rest > 0.0))
      throw Error(ErrorCode::QuadratureNotConverged, "cutoff does not reach below the lower saddle", "gap " + fmt(dc.real()));
    const cplx wo = -wp;
    const int sa = opts.stokes_side >= 0 ? -1 : 1;
    pieces.push_back({false, wo, -dc, +1, std::sqrt(rest), true});
    pieces.push_back({true, wp, dc, sa, 0.5 * kPi, true});
    pieces.push_back({true, wp, dc, -sa, 0.5 * kPi, false});
    pieces.push_back({false, wo, -dc, -1, std::sqrt(rest), false});
  }

  // Path samples, guard and monotonicity checks, Im W drift.
  const double ref_im = wp.imag();
  auto W = [&](cplx z) { return z + q / z; };
  for (const auto& pc : pieces) {
    std::vector<cplx> pts;
    double prev_re = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= opts.path_samples; ++i) {
      const double x = pc.extent * i / opts.path_samples;
      cplx z, dz;
      pc.eval(x, z, dz);
      if (std::abs(z) < opts.guard * (1.0 + std::abs(q)))
        throw Error(ErrorCode::FlowSingular, "descent path reached the guard radius around 0", "z " + fmt(z.real()) + "," + fmt(z.imag()));
      const cplx wz = W(z);
      if (wz.real() > prev_re + 1e-12 * (1.0 + std::abs(wp)))
        throw Error(ErrorCode::NonMonotone, "Re W increased along a descent path", "x " + fmt(x));
      prev_re = wz.real();
      res.im_drift = std::max(res.im_drift, std::abs(wz.imag() - ref_im));
      pts.push_back(z);
    }
    if (pc.reversed) std::reverse(pts.begin(), pts.end());
    res.path.insert(res.path.end(), pts.begin(), pts.end());
  }

  // Every panel is halved until the sum settles.
  int sub = 1;
  NodeSet ns = build_nodes(pieces, opts.min_panels, sub);
  cplx prev = integrate_nodes(ns, q, m.c, weight);
  bool done = false;
  while (sub * opts.min_panels < opts.max_panels) {
    sub *= 2;
    ns = build_nodes(pieces, opts.min_panels, sub);
    const cplx cur = integrate_nodes(ns, q, m.c, weight);
    const bool settled = std::abs(cur - prev) <= opts.rel_tol * std::abs(cur) + roundoff_floor(ns, q, m.c, weight);
    prev = cur;
    if (settled) {
      done = true;
      break;
    }
  }
  const int panels = sub * opts.min_panels;
  if (!done) throw Error(ErrorCode::QuadratureNotConverged, "thimble quadrature did not settle", "panels " + std::to_string(panels));
  for (const cplx& z : ns.z) res.im_drift = std::max(res.im_drift, std::abs(W(z).imag() - ref_im));
  res.integral = prev;
  res.panels = panels;
  res.nodes = std::move(ns);

  // Tail past the cutoff: |density| decays like exp(-x^2) beyond x_end, so
  // the remainder is at most |f(x_end)| / (2 x_end) per open end, doubled
  // for slack in the slowly varying factor.
  for (const auto& pc : pieces) {
    if (pc.connection) continue;
    cplx z, dz;
    pc.eval(pc.extent, z, dz);
    res.tail_bound += std::abs(density(z, q, m.c, weight) * dz) / pc.extent;
  }
  return res;
}

cplx saddle_asymptotic(const LG1& m, cplx p, int weight) {
  const cplx wp = 2.0 * p;
  // Direction of the infinity-bound branch at the saddle, as in Piece::eval.
  const cplx dir = -0.5 * std::sqrt(-2.0 * wp);
  return std::exp(wp + m.c - static_cast<double>(weight + 1) * std::log(p)) * std::sqrt(kPi) * dir;
}

cplx tensor_quadrature_2d_serial(const NodeSet& n1, const NodeSet& n2, cplx q1, cplx q2, int k1, int k2, cplx c) {
  cplx sum = 0.0;
  for (std::size_t i = 0; i < n1.z.size(); ++i) {
    cplx row = 0.0;
    const cplx z1 = n1.z[i];
    for (std::size_t j = 0; j < n2.z.size(); ++j) {
      const cplx z2 = n2.z[j];
      row += n2.w[j] * std::exp(z1 + q1 / z1 + z2 + q2 / z2 + c - static_cast<double>(k1 + 1) * std::log(z1) -
                                static_cast<double>(k2 + 1) * std::log(z2));
    }
    sum += n1.w[i] * row;
  }
  return sum;
}

cplx tensor_quadrature_2d(const NodeSet& n1, const NodeSet& n2, cplx q1, cplx q2, int k1, int k2, cplx c) {
  const long rows = static_cast<long>(n1.z.size());
  std::vector<cplx> row_sums(n1.z.size());
#pragma omp parallel for schedule(static) num_threads(worker_count())
  for (long i = 0; i < rows; ++i) {
    cplx row = 0.0;
    const cplx z1 = n1.z[i];
    for (std::size_t j = 0; j < n2.z.size(); ++j) {
      const cplx z2 = n2.z[j];
      row += n2.w[j] * std::exp(z1 + q1 / z1 + z2 + q2 / z2 + c - static_cast<double>(k1 + 1) * std::log(z1) -
                                static_cast<double>(k2 + 1) * std::log(z2));
    }
    row_sums[i] = n1.w[i] * row;
  }
  cplx sum = 0.0;
  for (const cplx& r : row_sums) sum += r;
  return sum;
}

ProductNumericResult product_charge_numeric(const LGModel& m, const std::vector<int>& weights,
                                            const std::vector<CycleSpec>& cycles, bool tensor_check, bool parallel) {
  if (static_cast<int>(weights.size()) != m.n() || static_cast<int>(cycles.size()) != m.n())
    throw std::invalid_argument("one weight and one cycle per factor");
  ProductNumericResult res;
  std::vector<NodeSet> nodes(m.n());
  QuadratureOptions qo;
  qo.parallel = parallel;
  cplx prod = 1.0;
  for (int i = 0; i < m.n(); ++i) {
    const LG1 f = m.factor(i);
    cplx v;
    if (cycles[i].kind == CycleKind::Circle) {
      const CircleResult cr = circle_charge(f, weights[i], cycles[i].radius, qo);
      nodes[i] = circle_nodes(cycles[i].radius, cr.nodes);
      v = cr.value;
    } else {
      ThimbleResult tr = trace_thimble(f, cycles[i].kind == CycleKind::ThimblePlus ? 1 : -1, {}, weights[i]);
      v = tr.integral;
      nodes[i] = std::move(tr.nodes);
    }
    res.factors.push_back(v);
    prod *= v;
  }
  res.value = std::exp(m.c) * prod;
  if (tensor_check && m.n() == 2) {
    const cplx t = parallel ? tensor_quadrature_2d(nodes[0], nodes[1], m.factor(0).q(), m.factor(1).q(), weights[0], weights[1], m.c)
                            : tensor_quadrature_2d_serial(nodes[0], nodes[1], m.factor(0).q(), m.factor(1).q(), weights[0], weights[1], m.c);
    res.tensor_value = t;
    res.tensor_rel_err = std::abs(t - res.value) / std::abs(res.value);
  }
  return res;
}

MonodromyReport monodromy_probe(const LG1& m, int steps, double loops, int weight, bool with_thimbles) {
  if (steps < 4) throw std::invalid_argument("monodromy probe needs at least 4 steps per loop");
  MonodromyReport rep;
  rep.steps = steps;
  rep.loops = loops;
  const int total = static_cast<int>(std::lround(steps * loops));
  auto q_at = [&](int j) { return std::exp(m.a + cplx{0.0, 2.0 * kPi * j / steps}); };

  cplx z = std::sqrt(q_at(0));
  rep.start_plus = z;
  rep.start_minus = -z;
  rep.track.push_back(z);
  for (int j = 1; j <= total; ++j) {
    const cplx r = std::sqrt(q_at(j));
    const cplx next = std::abs(r - z) <= std::abs(-r - z) ? r : -r;
    if (std::abs(next - z) >= 0.5 * std::abs(2.0 * next))
      throw Error(ErrorCode::TrackingLost, "continuation step reached half the saddle separation", "step " + std::to_string(j));
    z = next;
    rep.track.push_back(z);
  }
  rep.end_plus = z;
  rep.end_minus = -z;
  const double scale = std::abs(rep.start_plus);
  rep.swapped = std::abs(rep.end_plus - rep.start_minus) <= 1e-10 * scale;
  rep.identity = std::abs(rep.end_plus - rep.start_plus) <= 1e-10 * scale;

  const LG1 start{m.a, m.c};
  const LG1 end{m.a + cplx{0.0, 2.0 * kPi * total / steps}, m.c};
  rep.circle_start = circle_charge(start, weight).value;
  rep.circle_end = circle_charge(end, weight).value;
  rep.circle_rel_change = std::abs(rep.circle_end - rep.circle_start) / std::abs(rep.circle_start);
  if (with_thimbles) {
    rep.thimble_start_plus = trace_thimble_at(start, rep.start_plus, {}, weight).integral;
    rep.thimble_start_minus = trace_thimble_at(start, rep.start_minus, {}, weight).integral;
    rep.thimble_end_plus = trace_thimble_at(end, rep.end_plus, {}, weight).integral;
    rep.thimble_end_minus = trace_thimble_at(end, rep.end_minus, {}, weight).integral;
  }
  return rep;
}

}  // namespace stabforge
