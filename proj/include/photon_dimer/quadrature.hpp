#pragma once

// Adaptive Gauss-Kronrod (G7,K15) quadrature for real- and complex-valued
// integrands on finite intervals, with breakpoint-aware segment splitting,
// 1/u tail maps for semi-infinite ranges, and cached Gauss-Legendre rules.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

namespace photon_dimer {

using complex_t = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

namespace quad_detail {

// abscissae/weights of the (G7,K15) pair on [0,1]
inline constexpr double xgk[15] = {
    0.0042723144395936940576063989283284, 0.0254460438286207568658880973089250,
    0.0675677883201154516612518818874380, 0.1292344072003027699580002263246600,
    0.2069563822661544261194421778782300, 0.2970774243113014079220590701879700,
    0.3961075224960507457083735971537000, 0.5,
    0.6038924775039492542916264028463000, 0.7029225756886985365667896985542000,
    0.7930436177338455738805578221217700, 0.8707655927996972300419997736753400,
    0.9324322116798845483387481181125600, 0.9745539561713791876229606714332500,
    0.9957276855604062504312423698138400};

inline constexpr double wk15[15] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

inline constexpr double wg7[15] = {
    0, 0.129484966168869693270611432679082,
    0, 0.279705391489276667901467771423780,
    0, 0.381830050505118944950369775488975,
    0, 0.417959183673469387755102040816327,
    0, 0.381830050505118944950369775488975,
    0, 0.279705391489276667901467771423780,
    0, 0.129484966168869693270611432679082};

}  // namespace quad_detail

inline double abs_of(double x) { return std::abs(x); }
inline double abs_of(const complex_t& x) { return std::abs(x); }

struct QuadOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-14;
  int max_intervals = 4000;
  // when > 0, segments are pre-split geometrically away from their endpoints
  // at this scale, so features of that width sitting on a breakpoint are seen
  double feature_scale = 0;
};

template <class T>
struct QuadResult {
  T value{};
  double error = 0;       // accumulated |K15-G7| estimate
  std::size_t evals = 0;
  bool converged = true;
  QuadResult& operator+=(const QuadResult& o) {
    value += o.value;
    error += o.error;
    evals += o.evals;
    converged = converged && o.converged;
    return *this;
  }
};

// single (G7,K15) panel
template <class T, class F>
QuadResult<T> gk15_panel(F&& f, double a, double b) {
  using namespace quad_detail;
  const double h = b - a;
  T k15{}, g7{};
  for (int i = 0; i < 15; ++i) {
    T y = f(a + h * xgk[i]);
    k15 += wk15[i] * y;
    if (i % 2 == 1) g7 += wg7[i] * y;
  }
  QuadResult<T> r;
  r.value = 0.5 * h * k15;
  r.error = 0.5 * std::abs(h) * abs_of(T(k15 - g7));
  r.evals = 15;
  return r;
}

// adaptive bisection on [a,b]
template <class T, class F>
QuadResult<T> integrate(F&& f, double a, double b, const QuadOptions& opt = {}) {
  struct Interval {
    double a, b, err;
    T val;
  };
  QuadResult<T> first = gk15_panel<T>(f, a, b);
  std::vector<Interval> work{{a, b, first.error, first.value}};
  T total = first.value;
  double toterr = first.error;
  std::size_t evals = first.evals;
  int n_intervals = 1;
  while (true) {
    double tol = std::max(opt.abs_tol, opt.rel_tol * abs_of(total));
    if (toterr <= tol) break;
    // split worst interval
    auto it = std::max_element(work.begin(), work.end(),
                               [](const Interval& x, const Interval& y) { return x.err < y.err; });
    if (it->err <= tol / std::max(1, n_intervals) || n_intervals >= opt.max_intervals) {
      QuadResult<T> r{total, toterr, evals, n_intervals < opt.max_intervals};
      return r;
    }
    Interval cur = *it;
    double m = 0.5 * (cur.a + cur.b);
    QuadResult<T> left = gk15_panel<T>(f, cur.a, m);
    QuadResult<T> right = gk15_panel<T>(f, m, cur.b);
    evals += left.evals + right.evals;
    total += left.value + right.value - cur.val;
    toterr += left.error + right.error - cur.err;
    *it = {cur.a, m, left.error, left.value};
    work.push_back({m, cur.b, right.error, right.value});
    ++n_intervals;
  }
  return {total, toterr, evals, true};
}

// adaptive integration with forced interior breakpoints
template <class T, class F>
QuadResult<T> integrate_segmented(F&& f, double a, double b, std::vector<double> breaks,
                                  const QuadOptions& opt = {}) {
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  QuadResult<T> acc;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double lo = std::max(a, breaks[i]), hi = std::min(b, breaks[i + 1]);
    if (hi - lo < 1e-300) continue;
    if (opt.feature_scale > 0 && hi - lo > 8 * opt.feature_scale) {
      std::vector<double> edges{lo, hi};
      const double mid = 0.5 * (lo + hi);
      for (double w = opt.feature_scale; lo + w < mid; w *= 4) edges.push_back(lo + w);
      for (double w = opt.feature_scale; hi - w > mid; w *= 4) edges.push_back(hi - w);
      edges.push_back(mid);
      std::sort(edges.begin(), edges.end());
      for (std::size_t j = 0; j + 1 < edges.size(); ++j)
        if (edges[j + 1] - edges[j] > 1e-300) acc += integrate<T>(f, edges[j], edges[j + 1], opt);
    } else {
      acc += integrate<T>(f, lo, hi, opt);
    }
  }
  return acc;
}

// \int_a^inf f, a > 0 assumed after shifting; maps u = 1/x
template <class T, class F>
QuadResult<T> integrate_tail_up(F&& f, double a, const QuadOptions& opt = {}) {
  if (a <= 0) throw std::invalid_argument("integrate_tail_up needs a > 0");
  return integrate<T>([&f](double u) { return f(1.0 / u) / (u * u); }, 0.0, 1.0 / a, opt);
}

template <class T, class F>
QuadResult<T> integrate_tail_down(F&& f, double b, const QuadOptions& opt = {}) {
  if (b >= 0) throw std::invalid_argument("integrate_tail_down needs b < 0");
  return integrate<T>([&f](double u) { return f(1.0 / u) / (u * u); }, 1.0 / b, 0.0, opt);
}

// ---- Gauss-Legendre rules ----

struct GaussLegendreRule {
  std::vector<double> x;  // nodes on [-1,1]
  std::vector<double> w;
};

// Newton iteration on P_n; cached per order
inline const GaussLegendreRule& gauss_legendre(int n) {
  static std::map<int, GaussLegendreRule> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussLegendreRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1 - x * x) * pp * pp);
  }
  auto [pos, ok] = cache.emplace(n, std::move(r));
  return pos->second;
}

// composite fixed grid: nodes/weights mapped onto [a,b]
struct FixedGrid {
  std::vector<double> x;
  std::vector<double> w;
  void append_gl(double a, double b, int n) {
    const auto& r = gauss_legendre(n);
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
      x.push_back(c + h * r.x[i]);
      w.push_back(h * r.w[i]);
    }
  }
  std::size_t size() const { return x.size(); }
};

}  // namespace photon_dimer
