#pragma once

// Coding of the induced system by the full shift on
//   Lambda = {0,1} x {2, ..., n},
// letter i of a point being (w_i, tau(I^{i-1}(w, x))). A word decodes to the
// digit string  w_1 (1-w_1)^(n_1-1) w_2 (1-w_2)^(n_2-1) ...  in base beta.

#include "rbeta/algebra.hpp"
#include "rbeta/dynamics.hpp"
#include "rbeta/error.hpp"
#include "rbeta/gls.hpp"

#include <cmath>
#include <compare>
#include <cstddef>
#include <span>
#include <vector>

namespace rbeta {

struct letter {
  int coin = 0;
  int rt = 2;

  auto operator<=>(const letter&) const = default;
};

inline int alphabet_size(int n) { return 2 * (n - 1); }

/// Dense index of a letter in [0, 2(n-1)).
inline int letter_index(const letter& l, int n) { return l.coin * (n - 1) + (l.rt - 2); }

inline letter letter_from_index(int idx, int n) { return {idx / (n - 1), idx % (n - 1) + 2}; }

struct symbolic_word {
  int n = 0;
  std::vector<letter> letters;

  std::size_t size() const { return letters.size(); }
  bool operator==(const symbolic_word&) const = default;

  void validate() const {
    if (n < 3) throw domain_error("symbolic_word: n must be >= 3");
    for (const auto& l : letters)
      if ((l.coin != 0 && l.coin != 1) || l.rt < 2 || l.rt > n)
        throw domain_error("symbolic_word: letter outside {0,1} x {2..n}");
  }

  /// Total number of K-steps, sum of the return times.
  int digit_length() const {
    int s = 0;
    for (const auto& l : letters) s += l.rt;
    return s;
  }

  /// The shift S on Lambda, restricted to finite words.
  symbolic_word shifted() const {
    symbolic_word w{n, {}};
    if (!letters.empty()) w.letters.assign(letters.begin() + 1, letters.end());
    return w;
  }
};

/// First k letters of the coding of (w, x).
template <class Real>
symbolic_word encode(const point_state<Real>& s, std::size_t k, const algebraic_beta<Real>& ctx,
                     boundary_policy policy = boundary_policy::strict) {
  if (!in_switch(s.x, ctx)) throw precondition_error("encode: x is not in [a, b]");
  if (s.omega.remaining() < k) throw stream_exhausted("encode: coin stream shorter than k");
  if (policy == boundary_policy::strict && (s.x == ctx.a || s.x == ctx.b))
    throw deleted_point("encode: x is an endpoint of the switch region");
  symbolic_word w{ctx.n, {}};
  w.letters.reserve(k);
  point_state<Real> cur = s;
  for (std::size_t i = 0; i < k; ++i) {
    const int coin = cur.omega.head();
    auto r = induced_step(cur, ctx, policy);
    w.letters.push_back({coin, r.tau});
    cur = r.state;
  }
  return w;
}

/// Digit expansion w_i (1-w_i)^(n_i - 1) of every letter.
inline std::vector<int> expand_digits(const symbolic_word& w) {
  std::vector<int> d;
  d.reserve(static_cast<std::size_t>(w.digit_length()));
  for (const auto& l : w.letters) {
    d.push_back(l.coin);
    for (int j = 1; j < l.rt; ++j) d.push_back(1 - l.coin);
  }
  return d;
}

template <class Real>
word_value<Real> decode(const symbolic_word& w, const algebraic_beta<Real>& ctx) {
  w.validate();
  if (w.n != ctx.n) throw domain_error("decode: word alphabet does not match n");
  auto digits = expand_digits(w);
  return eval_word(std::span<const int>(digits), ctx.beta);
}

/// Decoding through inverse GLS branches instead of digit blocks: the
/// cylinder of the word is an interval of [a, b]; its midpoint and
/// half-width are returned.
template <class Real>
word_value<Real> decode_by_inverse_branches(const symbolic_word& w,
                                            const algebraic_beta<Real>& ctx) {
  w.validate();
  const auto greedy = greedy_breakpoints(ctx);
  const auto lazy = lazy_breakpoints(ctx);
  Real lo = ctx.a;
  Real hi = ctx.b;
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    const auto& part = it->coin == 1 ? greedy : lazy;
    auto i = part.branch_with_return_time(it->rt);
    lo = part.invert_branch(i, lo);
    hi = part.invert_branch(i, hi);
  }
  return {(lo + hi) / 2, (hi - lo) / 2};
}

enum class endpoint { a, b };

/// (01)^j1 (1 0^(n-1))^j2 (01)^j3 ... for a; complemented digits for b.
inline std::vector<int> boundary_expansion(endpoint e, std::span<const int> block_counts, int n) {
  detail::require_n(n);
  std::vector<int> d;
  for (std::size_t k = 0; k < block_counts.size(); ++k) {
    if (block_counts[k] < 0) throw domain_error("boundary_expansion: negative block count");
    std::vector<int> block;
    if (k % 2 == 0) {
      block = {0, 1};
    } else {
      block.assign(static_cast<std::size_t>(n), 0);
      block[0] = 1;
    }
    for (int j = 0; j < block_counts[k]; ++j) d.insert(d.end(), block.begin(), block.end());
  }
  if (e == endpoint::b)
    for (auto& v : d) v = 1 - v;
  return d;
}

inline std::vector<int> boundary_expansion(endpoint e, std::initializer_list<int> block_counts,
                                           int n) {
  return boundary_expansion(e, std::span<const int>(block_counts.begin(), block_counts.size()), n);
}

/// Entropy log(2n - 2) of the uniform Bernoulli measure on Lambda, the
/// measure of maximal entropy of the induced map.
template <class Real = double>
Real mme_entropy(int n) {
  detail::require_n(n);
  using std::log;
  return log(Real(alphabet_size(n)));
}

/// Per-letter probability of the measure of maximal entropy.
template <class Real = double>
Real mme_letter_probability(int n) {
  detail::require_n(n);
  return Real{1} / Real(alphabet_size(n));
}

/// Entropy -sum q log q of a Bernoulli shift with letter law q.
template <class Real>
Real bernoulli_entropy(std::span<const Real> q) {
  using std::log;
  Real h{0};
  for (const auto& v : q)
    if (v > 0) h -= v * log(v);
  return h;
}

}  // namespace rbeta
