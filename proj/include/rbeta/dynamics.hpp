#pragma once

// The shrinking random beta-transformation K on Omega x E, E = [0, 1/(beta-1)]:
//
//   K(w, x) = (w,        beta x)        x in [0, a)
//             (sigma w,  beta x - w_1)  x in [a, b]
//             (w,        beta x - 1)    x in (b, 1/(beta-1)]
//
// plus the first return time to Omega x [a, b] and the induced map I = K^tau.

#include "rbeta/algebra.hpp"
#include "rbeta/error.hpp"
#include "rbeta/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <sstream>
#include <vector>

namespace rbeta {

/// A point of Omega = {0,1}^N read through a cursor. Copies are cheap: the
/// explicit prefix is shared, and seeded bits are recomputed on demand.
class coin_stream {
 public:
  enum class mode { seeded, explicit_prefix };

  /// Fair coins from seed 0.
  coin_stream() = default;

  /// i.i.d. coins with P(bit = 0) = p_zero, bit k a function of (seed, k).
  static coin_stream seeded(std::uint64_t seed, double p_zero = 0.5) {
    if (!(p_zero > 0.0 && p_zero < 1.0)) throw domain_error("coin bias must lie in (0, 1)");
    coin_stream s;
    s.mode_ = mode::seeded;
    s.seed_ = seed;
    s.p_zero_ = p_zero;
    return s;
  }

  static coin_stream explicit_prefix(std::vector<int> bits) {
    for (int v : bits)
      if (v != 0 && v != 1) throw domain_error("coin bits must be 0 or 1");
    coin_stream s;
    s.mode_ = mode::explicit_prefix;
    s.prefix_ = std::make_shared<const std::vector<int>>(std::move(bits));
    return s;
  }

  int bit_at(std::size_t k) const {
    if (mode_ == mode::explicit_prefix) {
      if (k >= prefix_->size())
        throw stream_exhausted("coin stream exhausted at position " + std::to_string(k));
      return (*prefix_)[k];
    }
    if (p_zero_ == 0.5) return static_cast<int>((counter_rng(seed_)(k >> 6) >> (k & 63)) & 1u);
    return counter_rng(seed_, 1).uniform(k) < p_zero_ ? 0 : 1;
  }

  /// omega_1 of the current point.
  int head() const { return bit_at(cursor_); }

  /// The shift sigma.
  coin_stream shifted() const {
    coin_stream s = *this;
    ++s.cursor_;
    return s;
  }

  std::size_t cursor() const { return cursor_; }
  mode kind() const { return mode_; }
  std::uint64_t seed() const { return seed_; }

  /// Remaining explicit bits; unbounded for seeded streams.
  std::size_t remaining() const {
    if (mode_ == mode::seeded) return static_cast<std::size_t>(-1);
    return cursor_ < prefix_->size() ? prefix_->size() - cursor_ : 0;
  }

 private:
  mode mode_ = mode::seeded;
  std::uint64_t seed_ = 0;
  double p_zero_ = 0.5;
  std::shared_ptr<const std::vector<int>> prefix_;
  std::size_t cursor_ = 0;
};

template <class Real = double>
struct point_state {
  coin_stream omega;
  Real x{};
};

/// Landings on a or b during a first return. The default rejects them,
/// since they lie in the set removed from the domain of the coding.
enum class boundary_policy { strict, allow };

inline constexpr double drift_guard = 1e-9;

template <class Real>
Real snap_tolerance(const algebraic_beta<Real>& ctx) {
  return 256 * epsilon<Real>() * ctx.domain_max;
}

template <class Real>
bool in_switch(const Real& x, const algebraic_beta<Real>& ctx) {
  return ctx.a <= x && x <= ctx.b;
}

template <class Real = double>
struct step_result {
  point_state<Real> state;
  int digit = 0;
  bool switched = false;  // the step consumed a coin
};

namespace detail {

template <class Real>
void check_range(const Real& x, const algebraic_beta<Real>& ctx, const char* where) {
  if (x < -Real(drift_guard) || x > ctx.domain_max + Real(drift_guard)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << where << ": x = " << to_double(x) << " outside [0, " << to_double(ctx.domain_max)
        << "] (n = " << ctx.n << ")";
    throw orbit_escape(msg.str());
  }
}

// Images within rounding distance of a or b are pinned to the exact
// endpoint so that boundary orbits (a -> T1 a -> ... -> a) close exactly.
template <class Real>
Real snap(const Real& x, const algebraic_beta<Real>& ctx) {
  using std::abs;
  const Real tol = snap_tolerance(ctx);
  if (abs(x - ctx.a) <= tol) return ctx.a;
  if (abs(x - ctx.b) <= tol) return ctx.b;
  return x;
}

}  // namespace detail

template <class Real>
step_result<Real> step(const point_state<Real>& s, const algebraic_beta<Real>& ctx) {
  detail::check_range(s.x, ctx, "step");
  step_result<Real> r;
  if (s.x < ctx.a) {
    r.state = {s.omega, ctx.beta * s.x};
    r.digit = 0;
  } else if (s.x > ctx.b) {
    r.state = {s.omega, ctx.beta * s.x - 1};
    r.digit = 1;
  } else {
    int w1 = s.omega.head();
    r.state = {s.omega.shifted(), ctx.beta * s.x - Real(w1)};
    r.digit = w1;
    r.switched = true;
  }
  r.state.x = detail::snap(r.state.x, ctx);
  detail::check_range(r.state.x, ctx, "step");
  return r;
}

template <class Real = double>
struct return_result {
  int tau = 0;
  std::vector<Real> orbit;  // x_0, ..., x_tau
  std::vector<int> digits;  // d_1, ..., d_tau
  point_state<Real> state;  // K^tau of the input
  bool boundary_hit = false;  // K^tau lands exactly on a or b
};

/// First return time to Omega x [a, b] with the intermediate orbit.
/// tau = 1 is reported, not thrown; induced_step rejects it.
template <class Real>
return_result<Real> return_time(const point_state<Real>& s, const algebraic_beta<Real>& ctx) {
  if (!in_switch(s.x, ctx)) throw precondition_error("return_time: x is not in [a, b]");
  return_result<Real> r;
  r.orbit.push_back(s.x);
  point_state<Real> cur = s;
  for (int t = 1; t <= ctx.n; ++t) {
    auto st = step(cur, ctx);
    cur = st.state;
    r.orbit.push_back(cur.x);
    r.digits.push_back(st.digit);
    if (in_switch(cur.x, ctx)) {
      r.tau = t;
      r.state = cur;
      r.boundary_hit = cur.x == ctx.a || cur.x == ctx.b;
      return r;
    }
  }
  std::ostringstream msg;
  msg.precision(17);
  msg << "return_time: no return within n = " << ctx.n << " steps from x = " << to_double(s.x);
  throw invariant_violation(msg.str());
}

template <class Real = double>
struct induced_result {
  point_state<Real> state;
  int tau = 0;
  bool boundary_hit = false;
};

/// I = K^tau on Omega x [a, b].
template <class Real>
induced_result<Real> induced_step(const point_state<Real>& s, const algebraic_beta<Real>& ctx,
                                  boundary_policy policy = boundary_policy::strict) {
  auto r = return_time(s, ctx);
  if (r.tau == 1) throw deleted_point("induced_step: return time 1 (point removed from the domain)");
  if (r.boundary_hit && policy == boundary_policy::strict)
    throw deleted_point("induced_step: orbit lands exactly on a or b");
  return {r.state, r.tau, r.boundary_hit};
}

template <class Real = double>
struct orbit_row {
  std::size_t step = 0;
  Real x{};     // x_k, before the (k+1)-st application of K
  int digit = 0;  // digit emitted by that application
  bool in_switch = false;
  std::size_t coin_cursor = 0;
};

template <class Real = double>
struct orbit_trace {
  std::vector<orbit_row<Real>> rows;
  point_state<Real> final_state;

  std::vector<int> digits() const {
    std::vector<int> d;
    d.reserve(rows.size());
    for (const auto& r : rows) d.push_back(r.digit);
    return d;
  }
};

template <class Real>
orbit_trace<Real> orbit(const point_state<Real>& s, std::size_t steps,
                        const algebraic_beta<Real>& ctx) {
  orbit_trace<Real> tr;
  tr.rows.reserve(steps);
  point_state<Real> cur = s;
  for (std::size_t k = 0; k < steps; ++k) {
    auto st = step(cur, ctx);
    tr.rows.push_back({k, cur.x, st.digit, st.switched, cur.omega.cursor()});
    cur = st.state;
  }
  tr.final_state = cur;
  return tr;
}

}  // namespace rbeta
