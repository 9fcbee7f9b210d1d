#pragma once

// Invariant measures of the induced map I and their lift to K.
//
// Measures are evaluated on rectangles C x [lo, hi] where C is a coin
// cylinder {w_1 = i_1, ..., w_m = i_m}. Every computation reduces to exact
// piecewise-affine interval arithmetic through the GLS branches.

#include "rbeta/algebra.hpp"
#include "rbeta/dynamics.hpp"
#include "rbeta/error.hpp"
#include "rbeta/gls.hpp"
#include "rbeta/markov.hpp"
#include "rbeta/rng.hpp"
#include "rbeta/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace rbeta {

/// Coin prefix i_1..i_m and return-time prefix n_1..n_m.
struct cylinder_spec {
  std::vector<int> coins;
  std::vector<int> rts;

  void validate(int n) const {
    if (coins.size() != rts.size()) throw domain_error("cylinder_spec: prefix lengths differ");
    for (int c : coins)
      if (c != 0 && c != 1) throw domain_error("cylinder_spec: coin must be 0 or 1");
    for (int t : rts)
      if (t < 2 || t > n) throw domain_error("cylinder_spec: return time outside {2..n}");
  }
};

template <class Real = double>
struct interval {
  Real lo{}, hi{};
  bool lo_closed = true;
  bool hi_closed = true;

  Real length() const { return hi - lo; }
};

/// m_p of a coin cylinder, with P(w_i = 0) = p.
template <class Real>
Real coin_cylinder_measure(std::span<const int> coins, const Real& p) {
  Real m{1};
  for (int c : coins) m *= (c == 0 ? p : Real{1} - p);
  return m;
}

template <class Real = double>
struct phi_preimage {
  interval<Real> J;
  std::vector<int> coin_cylinder;
};

/// phi^{-1}(C x D) = C x J with
///   J = D_{n_1} cap L_{i_1}^{-1}(D_{n_2}) cap ... ,
/// built backwards through the inverse branches.
template <class Real>
phi_preimage<Real> phi_preimage_interval(const cylinder_spec& spec,
                                         const algebraic_beta<Real>& ctx) {
  spec.validate(ctx.n);
  if (spec.coins.empty()) return {{ctx.a, ctx.b, true, true}, {}};
  const auto greedy = greedy_breakpoints(ctx);
  const auto lazy = lazy_breakpoints(ctx);
  auto branch_interval = [&](int coin, int rt) {
    const auto& part = coin == 1 ? greedy : lazy;
    auto i = part.branch_with_return_time(rt);
    return interval<Real>{part.breakpoints[i], part.breakpoints[i + 1], coin == 1, coin == 0};
  };

  const std::size_t m = spec.coins.size();
  interval<Real> J = branch_interval(spec.coins[m - 1], spec.rts[m - 1]);
  for (std::size_t j = m - 1; j-- > 0;) {
    const auto& part = spec.coins[j] == 1 ? greedy : lazy;
    auto i = part.branch_with_return_time(spec.rts[j]);
    const auto D = branch_interval(spec.coins[j], spec.rts[j]);
    interval<Real> pre{part.invert_branch(i, J.lo), part.invert_branch(i, J.hi), J.lo_closed,
                       J.hi_closed};
    if (pre.lo == D.lo) pre.lo_closed = pre.lo_closed && D.lo_closed;
    if (pre.hi == D.hi) pre.hi_closed = pre.hi_closed && D.hi_closed;
    J = pre;
  }
  if (!(J.length() > 0)) throw invariant_violation("phi_preimage_interval: empty preimage");
  return {J, spec.coins};
}

template <class Real = double>
struct gls_cylinder_result {
  Real lhs{};  // (m_p x Lebesgue)(phi^{-1}(C x D))
  Real rhs{};  // m_p(C) prod_j pi_{n_j}
  Real deviation{};
};

/// Compares normalized Lebesgue measure of the preimage with the product
/// measure built from pi (the GLS law beta^{-t} unless overridden).
template <class Real>
gls_cylinder_result<Real> gls_cylinder_check(const cylinder_spec& spec, const Real& p,
                                       const algebraic_beta<Real>& ctx,
                                       const return_time_vector<Real>* pi_override = nullptr) {
  using std::abs;
  const auto pre = phi_preimage_interval(spec, ctx);
  const Real mc = coin_cylinder_measure<Real>(spec.coins, p);
  gls_cylinder_result<Real> r;
  r.lhs = mc * pre.J.length() / (ctx.b - ctx.a);
  Real prod{1};
  if (pi_override) {
    for (int t : spec.rts) prod *= (*pi_override)[t];
  } else {
    for (int t : spec.rts) prod *= ipow(ctx.beta, -t);
  }
  r.rhs = mc * prod;
  r.deviation = abs(r.lhs - r.rhs);
  return r;
}

enum class induced_kind { lebesgue, product };

/// An I-invariant measure on Omega x [a, b]: either m_p x Lebesgue, or the
/// pullback of m_p x mu_pi through the coding.
template <class Real = double>
struct induced_measure_spec {
  induced_kind kind = induced_kind::lebesgue;
  Real p{0.5};
  return_time_vector<Real> pi;

  static induced_measure_spec lebesgue(const algebraic_beta<Real>& ctx, const Real& p) {
    return {induced_kind::lebesgue, p, return_time_vector_of(ctx)};
  }

  static induced_measure_spec product(const Real& p, return_time_vector<Real> pi) {
    return {induced_kind::product, p, std::move(pi)};
  }

  void validate(int n) const {
    using std::abs;
    if (!(p > 0 && p < 1)) throw domain_error("induced measure: coin bias must lie in (0, 1)");
    if (pi.n != n || pi.pi.size() != static_cast<std::size_t>(n + 1))
      throw domain_error("induced measure: return-time vector has the wrong size");
    for (int t = 2; t <= n; ++t)
      if (pi[t] < 0) throw domain_error("induced measure: negative probability");
    if (abs(pi.sum() - 1) > Real(1e-12)) throw domain_error("induced measure: pi must sum to 1");
  }
};

/// Coin cylinder times an interval of the real coordinate.
template <class Real = double>
struct rectangle {
  std::vector<int> coins;
  Real lo{}, hi{};
};

template <class Real = double>
class induced_measure {
 public:
  induced_measure(induced_measure_spec<Real> spec, const algebraic_beta<Real>& ctx)
      : spec_(std::move(spec)),
        ctx_(ctx),
        greedy_(greedy_breakpoints(ctx)),
        lazy_(lazy_breakpoints(ctx)) {
    spec_.validate(ctx.n);
  }

  const induced_measure_spec<Real>& spec() const { return spec_; }
  const algebraic_beta<Real>& context() const { return ctx_; }

  Real expected_return_time() const { return spec_.pi.expected_return_time(); }

  /// nu(C x ([lo, hi] cap [a, b])). Exact for the Lebesgue kind. For the
  /// product kind the interval must be aligned with the coding cylinders
  /// (for instance a union of Markov cells or GLS branches); otherwise the
  /// evaluation does not terminate exactly and unsupported_target is thrown.
  Real operator()(std::span<const int> coins, const Real& lo, const Real& hi) const {
    using std::max;
    using std::min;
    const Real l = max(lo, ctx_.a);
    const Real h = min(hi, ctx_.b);
    if (spec_.kind == induced_kind::lebesgue) {
      if (!(h > l)) return Real{0};
      return coin_cylinder_measure<Real>(coins, spec_.p) * (h - l) / (ctx_.b - ctx_.a);
    }
    if (!(h - l > align_tol())) return Real{0};
    std::size_t budget = node_budget;
    return product_eval(coins, snap(l), snap(h), budget, 0);
  }

  static constexpr std::size_t node_budget = 200000;
  static constexpr int depth_limit = 256;

 private:
  // Endpoints carried through t steps of K pick up about eps beta^t of
  // rounding; within this distance of a cylinder boundary they count as on it.
  Real align_tol() const {
    using std::max;
    const Real drift = 64 * epsilon<Real>() * ipow(ctx_.beta, ctx_.n);
    return max(Real(1e-11), drift) * (ctx_.b - ctx_.a);
  }

  Real snap(const Real& x) const {
    using std::abs;
    if (abs(x - ctx_.a) <= align_tol()) return ctx_.a;
    if (abs(x - ctx_.b) <= align_tol()) return ctx_.b;
    return x;
  }

  Real product_eval(std::span<const int> coins, const Real& lo, const Real& hi,
                    std::size_t& budget, int depth) const {
    using std::max;
    using std::min;
    if (budget-- == 0 || depth > depth_limit)
      throw unsupported_target("induced_measure: interval is not aligned with coding cylinders");
    if (lo <= ctx_.a + align_tol() && hi >= ctx_.b - align_tol())
      return coin_cylinder_measure<Real>(coins, spec_.p);
    Real total{0};
    for (int c = 0; c <= 1; ++c) {
      if (!coins.empty() && coins[0] != c) continue;
      const Real wc = c == 0 ? spec_.p : Real{1} - spec_.p;
      const auto& part = c == 1 ? greedy_ : lazy_;
      for (std::size_t i = 0; i < part.branch_count(); ++i) {
        const Real ol = max(lo, part.breakpoints[i]);
        const Real oh = min(hi, part.breakpoints[i + 1]);
        if (!(oh - ol > align_tol())) continue;
        const Real w = wc * spec_.pi[part.return_times[i]];
        if (w == 0) continue;
        total += w * product_eval(coins.empty() ? coins : coins.subspan(1),
                                  snap(part.apply_branch(i, ol)), snap(part.apply_branch(i, oh)),
                                  budget, depth + 1);
      }
    }
    return total;
  }

  induced_measure_spec<Real> spec_;
  algebraic_beta<Real> ctx_;
  gls_partition<Real> greedy_;
  gls_partition<Real> lazy_;
};

/// mu(E) = (1 / int tau dnu) sum_{k >= 0} nu({tau > k} cap K^{-k} E)
/// for E = C x [lo, hi]. Since tau <= n only k < n contributes. Along a
/// first excursion the coin stream is sigma w for every k >= 1, and the
/// excursion after coin c through the branch with return time t is an
/// affine image of the branch, so each term is an affine pullback of nu.
template <class Real>
Real kac_lift(const induced_measure<Real>& nu, const rectangle<Real>& target) {
  using std::max;
  using std::min;
  const auto& ctx = nu.context();
  const auto& spec = nu.spec();
  for (int c : target.coins)
    if (c != 0 && c != 1) throw unsupported_target("kac_lift: coin cylinder must be binary");
  if (target.hi < target.lo) throw unsupported_target("kac_lift: empty interval");

  const std::span<const int> coins(target.coins);
  Real total = nu(coins, target.lo, target.hi);
  const auto greedy = greedy_breakpoints(ctx);
  const auto lazy = lazy_breakpoints(ctx);
  for (int c = 0; c <= 1; ++c) {
    const Real wc = c == 0 ? spec.p : Real{1} - spec.p;
    const auto& part = c == 1 ? greedy : lazy;
    const Real free_offset = Real(1 - c);  // T0 after coin 1, T1 after coin 0
    for (std::size_t i = 0; i < part.branch_count(); ++i) {
      const int t = part.return_times[i];
      const Real w = wc * spec.pi[t];
      if (w == 0) continue;
      // Excursion step k as a contraction of the return point z in [a, b]:
      // y_t = z and y_j = (y_{j+1} + free_offset) / beta, built backwards so
      // rounding does not grow with t.
      Real lo = ctx.a, hi = ctx.b;
      for (int k = t - 1; k >= 1; --k) {
        lo = (lo + free_offset) / ctx.beta;
        hi = (hi + free_offset) / ctx.beta;
        const Real yl = max(lo, target.lo);
        const Real yh = min(hi, target.hi);
        if (!(yh > yl)) continue;
        Real al = ctx.a, ah = ctx.b;
        if (yl > lo) {
          al = yl;
          for (int j = k; j < t; ++j) al = ctx.beta * al - free_offset;
        }
        if (yh < hi) {
          ah = yh;
          for (int j = k; j < t; ++j) ah = ctx.beta * ah - free_offset;
        }
        total += w * nu(coins, al, ah);
      }
    }
  }
  return total / nu.expected_return_time();
}

/// K^{-1}(C x [lo, hi]) as a union of rectangles with disjoint interiors.
template <class Real>
std::vector<rectangle<Real>> preimage_under_k(const rectangle<Real>& e,
                                              const algebraic_beta<Real>& ctx) {
  using std::max;
  using std::min;
  std::vector<rectangle<Real>> out;
  auto push = [&](std::vector<int> coins, Real lo, Real hi, const Real& from, const Real& to) {
    lo = max(lo, from);
    hi = min(hi, to);
    if (hi > lo) out.push_back({std::move(coins), lo, hi});
  };
  push(e.coins, e.lo / ctx.beta, e.hi / ctx.beta, Real{0}, ctx.a);
  push(e.coins, (e.lo + 1) / ctx.beta, (e.hi + 1) / ctx.beta, ctx.b, ctx.domain_max);
  for (int c = 0; c <= 1; ++c) {
    std::vector<int> coins{c};
    coins.insert(coins.end(), e.coins.begin(), e.coins.end());
    push(std::move(coins), (e.lo + c) / ctx.beta, (e.hi + c) / ctx.beta, ctx.a, ctx.b);
  }
  return out;
}

template <class Real>
Real kac_lift_preimage(const induced_measure<Real>& nu, const rectangle<Real>& target) {
  Real s{0};
  for (const auto& r : preimage_under_k(target, nu.context())) s += kac_lift(nu, r);
  return s;
}

enum class abramov_kind { parry, mme_lift, lebesgue };

template <class Real = double>
struct abramov_report {
  Real h_K{};        // entropy of K under the lifted measure
  Real h_I{};        // entropy of I under the induced measure
  Real mu_center{};  // mass of Omega x [a, b] under the lifted measure
  Real deviation{};  // |h_K - h_I mu_center|
  Real parry_gap{};  // log lambda - h_K
};

/// Abramov relation h(K, mu) = h(I, nu) mu(Omega x [a, b]).
///  - parry: h_K = log lambda, h_I = log lambda / (cd lambda^n), and
///    mu_center is read off the stationary vector of the Parry chain.
///  - mme_lift: nu is the measure of maximal entropy of I (uniform on
///    Lambda), h_I = log(2n-2), mu_center from the Kac lift; h_K is the
///    value Abramov assigns to its lift.
///  - lebesgue: nu = m_p x Lebesgue, h_I = H(p) + H(pi), mu_center from
///    the Kac lift.
template <class Real = double>
abramov_report<Real> abramov_check(int n, abramov_kind kind, const Real& p = Real(0.5)) {
  using std::abs;
  using std::log;
  const auto ctx = solve_beta<Real>(n);
  const Real log_lambda = log(solve_lambda<Real>(n).lambda);
  abramov_report<Real> r;
  if (kind == abramov_kind::parry) {
    const auto chain = build_markov_chain<Real>(n);
    r.h_K = log_lambda;
    r.h_I = induced_parry_entropy<Real>(n);
    r.mu_center = chain.p[center_index(n)];
  } else {
    auto spec = kind == abramov_kind::mme_lift
                    ? induced_measure_spec<Real>::product(Real(0.5),
                                                          uniform_return_time_vector<Real>(n))
                    : induced_measure_spec<Real>::lebesgue(ctx, p);
    induced_measure<Real> nu(spec, ctx);
    r.mu_center = kac_lift(nu, rectangle<Real>{{}, ctx.a, ctx.b});
    const Real coin[2] = {spec.p, Real{1} - spec.p};
    std::vector<Real> rt(spec.pi.pi.begin() + 2, spec.pi.pi.end());
    r.h_I = bernoulli_entropy<Real>(coin) + bernoulli_entropy<Real>(rt);
    r.h_K = r.h_I * r.mu_center;
  }
  r.deviation = abs(r.h_K - r.h_I * r.mu_center);
  r.parry_gap = log_lambda - r.h_K;
  return r;
}

enum class entropy_estimator {
  block,       // H_k / k
  conditional  // H_k - H_{k-1}, the entropy of the k-th symbol given the k-1 before
};

namespace detail {

inline double block_shannon(std::span<const int> sample, int block_len, int alphabet) {
  if (block_len == 0) return 0.0;
  std::unordered_map<std::uint64_t, std::size_t> counts;
  const std::size_t blocks = sample.size() - static_cast<std::size_t>(block_len) + 1;
  for (std::size_t i = 0; i < blocks; ++i) {
    std::uint64_t code = 0;
    for (int j = 0; j < block_len; ++j)
      code = code * static_cast<std::uint64_t>(alphabet) + static_cast<std::uint64_t>(sample[i + j]);
    ++counts[code];
  }
  double h = 0.0;
  for (const auto& [code, cnt] : counts) {
    const double f = static_cast<double>(cnt) / static_cast<double>(blocks);
    h -= f * std::log(f);
  }
  return h;
}

}  // namespace detail

/// Block-frequency entropy estimate in nats from overlapping blocks.
inline double empirical_entropy(std::span<const int> sample, int block_len, int alphabet,
                                entropy_estimator est = entropy_estimator::block) {
  if (block_len < 1) throw domain_error("empirical_entropy: block length must be >= 1");
  if (alphabet < 1) throw domain_error("empirical_entropy: alphabet must be non-empty");
  for (int s : sample)
    if (s < 0 || s >= alphabet) throw domain_error("empirical_entropy: symbol outside alphabet");
  const double need = 100.0 * std::pow(static_cast<double>(alphabet), block_len);
  if (static_cast<double>(sample.size()) < need)
    throw insufficient_sample("empirical_entropy: need at least 100 * alphabet^block_len symbols");
  const double hk = detail::block_shannon(sample, block_len, alphabet);
  if (est == entropy_estimator::block) return hk / block_len;
  return hk - detail::block_shannon(sample, block_len - 1, alphabet);
}

/// Path of the Parry chain of length `steps`, started from its stationary law.
template <class Real>
std::vector<int> sample_parry_chain(const markov_chain<Real>& chain, std::size_t steps,
                                    std::uint64_t seed) {
  const counter_rng rng(seed, 7);
  const std::size_t m = chain.size();
  auto draw = [&](const auto& probs, std::uint64_t k) {
    const double u = rng.uniform(k);
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      acc += to_double(probs[j]);
      if (u < acc) return static_cast<int>(j);
    }
    for (std::size_t j = m; j-- > 0;)
      if (to_double(probs[j]) > 0) return static_cast<int>(j);
    return 0;
  };
  std::vector<int> path;
  path.reserve(steps);
  if (steps == 0) return path;
  path.push_back(draw(chain.p, 0));
  for (std::size_t k = 1; k < steps; ++k)
    path.push_back(draw(chain.transition[static_cast<std::size_t>(path.back())], k));
  return path;
}

inline std::vector<int> sample_uniform(int alphabet, std::size_t steps, std::uint64_t seed) {
  const counter_rng rng(seed, 11);
  std::vector<int> out(steps);
  for (std::size_t k = 0; k < steps; ++k)
    out[k] = static_cast<int>(rng.uniform(k) * alphabet);
  return out;
}

/// i.i.d. letters of Lambda drawn from m_p x mu_pi.
template <class Real>
symbolic_word sample_symbolic(int n, double p, const return_time_vector<Real>& pi,
                              std::size_t length, std::uint64_t seed) {
  const counter_rng rng(seed, 13);
  symbolic_word w{n, {}};
  w.letters.reserve(length);
  for (std::size_t k = 0; k < length; ++k) {
    const int coin = rng.uniform(2 * k) < p ? 0 : 1;
    const double u = rng.uniform(2 * k + 1);
    double acc = 0.0;
    int rt = n;
    for (int t = 2; t <= n; ++t) {
      acc += to_double(pi[t]);
      if (u < acc) {
        rt = t;
        break;
      }
    }
    w.letters.push_back({coin, rt});
  }
  return w;
}

/// Return times of `samples` independent induced steps from
/// (m_p x Lebesgue)-random starts; histogram indexed by t.
template <class Real>
std::vector<std::size_t> sample_return_times(const algebraic_beta<Real>& ctx, std::size_t samples,
                                             std::uint64_t seed, double p = 0.5) {
  const counter_rng rng(seed, 17);
  std::vector<std::size_t> hist(static_cast<std::size_t>(ctx.n + 1), 0);
  for (std::size_t k = 0; k < samples; ++k) {
    const Real x = ctx.a + Real(rng.uniform(k)) * (ctx.b - ctx.a);
    point_state<Real> s{coin_stream::seeded(seed ^ splitmix64(k), p), x};
    auto r = return_time(s, ctx);
    if (r.tau < 2 || r.tau > ctx.n)
      throw invariant_violation("sample_return_times: return time " + std::to_string(r.tau) +
                                " outside {2..n}");
    ++hist[static_cast<std::size_t>(r.tau)];
  }
  return hist;
}

}  // namespace rbeta
