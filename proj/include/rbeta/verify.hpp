#pragma once

// Verification suites: every computable identity of the toolkit checked
// for one n, as a list of named records.

#include "rbeta/algebra.hpp"
#include "rbeta/dynamics.hpp"
#include "rbeta/gls.hpp"
#include "rbeta/io.hpp"
#include "rbeta/markov.hpp"
#include "rbeta/measures.hpp"
#include "rbeta/rng.hpp"
#include "rbeta/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rbeta::verify {

using io::json;

struct check_result {
  std::string suite;
  std::string check;
  int n = 0;
  json params = json::object();
  double lhs = 0.0;
  double rhs = 0.0;
  double deviation = 0.0;
  bool pass = false;
  std::string note;  // populated when the check raised an error
};

struct options {
  std::uint64_t seed = 1;
  std::size_t samples = 1000;
  bool corrupt_adjacency = false;  // negative control for the markov suite
};

inline json to_json(const check_result& r) {
  json j = {{"suite", r.suite},
            {"check", r.check},
            {"n", r.n},
            {"params", r.params},
            {"lhs", io::round_sig(r.lhs)},
            {"rhs", io::round_sig(r.rhs)},
            {"deviation", io::round_sig(r.deviation)},
            {"pass", r.pass}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

namespace detail {

class recorder {
 public:
  recorder(std::string suite, int n, std::vector<check_result>& out)
      : suite_(std::move(suite)), n_(n), out_(out) {}

  /// |lhs - rhs| <= tol.
  void close(const std::string& name, double lhs, double rhs, double tol, json params = {}) {
    const double dev = std::abs(lhs - rhs);
    push(name, lhs, rhs, dev, dev <= tol, with_tol(std::move(params), tol));
  }

  /// deviation <= tol, for precomputed worst-case deviations.
  void bounded(const std::string& name, double deviation, double tol, json params = {}) {
    push(name, deviation, tol, deviation, deviation <= tol, with_tol(std::move(params), tol));
  }

  /// lhs > rhs.
  void greater(const std::string& name, double lhs, double rhs, json params = {}) {
    push(name, lhs, rhs, lhs - rhs, lhs > rhs, std::move(params));
  }

  void guarded(const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      check_result r{suite_, name, n_, json::object(), 0.0, 0.0, 0.0, false, e.what()};
      out_.push_back(std::move(r));
    }
  }

 private:
  static json with_tol(json params, double tol) {
    if (params.is_null()) params = json::object();
    params["tolerance"] = tol;
    return params;
  }

  void push(const std::string& name, double lhs, double rhs, double dev, bool pass, json params) {
    if (params.is_null()) params = json::object();
    out_.push_back({suite_, name, n_, std::move(params), lhs, rhs, dev, pass, {}});
  }

  std::string suite_;
  int n_;
  std::vector<check_result>& out_;
};

inline point_state<double> random_switch_point(const algebraic_beta<double>& ctx,
                                               std::uint64_t seed, std::uint64_t k) {
  const counter_rng rng(seed, 101);
  const double x = ctx.a + rng.uniform(k) * (ctx.b - ctx.a);
  return {coin_stream::seeded(splitmix64(seed + 31 * k)), x};
}

inline int word_depth(int n, double budget) {
  int depth = 1;
  while (std::pow(alphabet_size(n), depth + 1) <= budget && depth < 4) ++depth;
  return depth;
}

inline std::vector<symbolic_word> all_words(int n, int length) {
  std::vector<symbolic_word> words{symbolic_word{n, {}}};
  for (int d = 0; d < length; ++d) {
    std::vector<symbolic_word> next;
    for (const auto& w : words)
      for (int i = 0; i < alphabet_size(n); ++i) {
        auto x = w;
        x.letters.push_back(letter_from_index(i, n));
        next.push_back(std::move(x));
      }
    words = std::move(next);
  }
  return words;
}

}  // namespace detail

inline void gls_suite(int n, const options& opt, std::vector<check_result>& out) {
  detail::recorder rec("gls", n, out);
  const auto ctx = solve_beta(n);
  rec.guarded("gls.partitions", [&] {
    const auto g = greedy_breakpoints(ctx);
    const auto l = lazy_breakpoints(ctx);

    double law = 0.0;
    for (std::size_t i = 0; i < g.branch_count(); ++i)
      law = std::max(law, std::abs(g.branch_length(i) -
                                   (ctx.b - ctx.a) * ipow(ctx.beta, -g.return_times[i])));
    rec.bounded("gls.branch_length_law", law, 1e-12);

    double lazy_left = 0.0;
    for (std::size_t i = 0; i < l.branch_count(); ++i)
      lazy_left = std::max(lazy_left, std::abs(l.invert_branch(i, ctx.a) - l.breakpoints[i]));
    rec.bounded("gls.lazy_breakpoints_vs_branch_preimages", lazy_left, 1e-12);

    // Endpoint images go through slopes up to beta^n, which turns one ulp of
    // a breakpoint into ~1e-10 at n = 30, so they are evaluated in ext_real.
    double surj = 0.0;
    {
      const auto ectx = solve_beta<ext_real>(n);
      for (const auto& part : {greedy_breakpoints(ectx), lazy_breakpoints(ectx)})
        for (std::size_t i = 0; i < part.branch_count(); ++i) {
          surj = std::max(surj, to_double(abs(part.apply_branch(i, part.breakpoints[i]) - ectx.a)));
          surj = std::max(surj,
                          to_double(abs(part.apply_branch(i, part.breakpoints[i + 1]) - ectx.b)));
        }
    }
    double lebesgue_g = 0.0, lebesgue_l = 0.0;
    for (const auto* part : {&g, &l}) {
      double inv_slopes = 0.0;
      for (std::size_t i = 0; i < part->branch_count(); ++i) inv_slopes += 1.0 / part->slopes[i];
      (part == &g ? lebesgue_g : lebesgue_l) = inv_slopes;
    }
    rec.bounded("gls.surjectivity", surj, 1e-10, {{"precision", "extended"}});
    rec.close("gls.lebesgue_invariance_greedy", lebesgue_g, 1.0, 1e-12);
    rec.close("gls.lebesgue_invariance_lazy", lebesgue_l, 1.0, 1e-12);
    rec.close("gls.return_vector_sum", return_time_vector_of(ctx).sum(), 1.0, 1e-12);

    double image_dev = 0.0;
    double tau_mismatch = 0.0;
    for (std::size_t k = 0; k < opt.samples; ++k) {
      auto s = detail::random_switch_point(ctx, opt.seed, k);
      if (s.x == ctx.a || s.x == ctx.b) continue;
      auto ind = induced_step(s, ctx);
      auto gl = s.omega.head() == 1 ? apply_greedy(s.x, g) : apply_lazy(s.x, l);
      image_dev = std::max(image_dev, std::abs(gl.x - ind.state.x));
      if (gl.return_time != ind.tau) tau_mismatch += 1.0;
    }
    rec.bounded("gls.induced_equivalence_image", image_dev, 1e-10, {{"samples", opt.samples}});
    rec.bounded("gls.induced_equivalence_return_time", tau_mismatch, 0.0,
                {{"samples", opt.samples}});
  });
}

inline void symbolic_suite(int n, const options& opt, std::vector<check_result>& out) {
  detail::recorder rec("symbolic", n, out);
  const auto ctx = solve_beta(n);
  rec.guarded("symbolic.coding", [&] {
    const std::size_t k = 12;
    const double rounding = 64 * epsilon<double>() * ctx.domain_max;
    double conj = 0.0;
    double decoded_conj = 0.0;
    double roundtrip = 0.0;
    for (std::size_t i = 0; i < opt.samples; ++i) {
      auto s = detail::random_switch_point(ctx, opt.seed, i);
      auto w = encode(s, k, ctx);
      auto img = induced_step(s, ctx);
      if (encode(img.state, k - 1, ctx) != w.shifted()) conj += 1.0;
      // I(x) against the decoded shifted word: a route that never iterates K.
      auto shifted = decode(w.shifted(), ctx);
      decoded_conj = std::max(decoded_conj, std::abs(shifted.value - img.state.x) /
                                                (shifted.tail_bound + 1e-9));
      auto dv = decode(w, ctx);
      roundtrip = std::max(roundtrip, std::abs(dv.value - s.x) / (dv.tail_bound + rounding));
    }
    rec.bounded("symbolic.conjugacy_mismatches", conj, 0.0, {{"samples", opt.samples}});
    rec.bounded("symbolic.decoded_conjugacy_over_tail_bound", decoded_conj, 1.0,
                {{"samples", opt.samples}});
    rec.bounded("symbolic.roundtrip_over_tail_bound", roundtrip, 1.0, {{"samples", opt.samples}});

    const int depth = detail::word_depth(n, 20000);
    double outside = 0.0;
    double route_gap = 0.0;
    for (const auto& w : detail::all_words(n, depth)) {
      auto dv = decode(w, ctx);
      outside = std::max({outside, ctx.a - dv.value - dv.tail_bound,
                          dv.value - dv.tail_bound - ctx.b, 0.0});
      auto ib = decode_by_inverse_branches(w, ctx);
      route_gap = std::max(route_gap, std::abs(ib.value - dv.value) - ib.tail_bound - dv.tail_bound);
    }
    rec.bounded("symbolic.surjectivity_excess", outside, 0.0, {{"word_length", depth}});
    rec.bounded("symbolic.inverse_branch_agreement", std::max(route_gap, 0.0), 1e-12,
                {{"word_length", depth}});

    std::vector<double> uniform(static_cast<std::size_t>(alphabet_size(n)),
                                mme_letter_probability(n));
    rec.close("symbolic.mme_entropy", bernoulli_entropy<double>(uniform), mme_entropy(n), 1e-14);
  });
}

inline void markov_suite(int n, const options& opt, std::vector<check_result>& out) {
  detail::recorder rec("markov", n, out);
  rec.guarded("markov.chain", [&] {
    const auto ctx = solve_beta(n);
    const auto pv = solve_lambda(n);
    const auto cells = build_partition(ctx);
    auto adj = build_adjacency(n);
    if (opt.corrupt_adjacency) adj[0][0] = 1 - adj[0][0];

    const auto images = adjacency_from_images(cells, ctx);
    double mismatch = 0.0;
    for (std::size_t i = 0; i < adj.size(); ++i)
      for (std::size_t j = 0; j < adj.size(); ++j) mismatch += adj[i][j] != images[i][j];
    rec.bounded("markov.adjacency_rule_vs_images", mismatch, 0.0);
    rec.bounded("markov.markov_property", markov_property_residual(cells, ctx), 1e-9);
    rec.bounded("markov.irreducible", is_irreducible(adj) ? 0.0 : 1.0, 0.0);

    const double samples[] = {1.5, 2.5, 3.0};
    rec.bounded("markov.char_poly", char_poly_residual<double>(n, samples), 1e-9);

    // Closed-form vectors checked against the (possibly corrupted) matrix.
    std::vector<double> v, u;
    double cd = 0.0, inv_closed = 0.0, inv_direct = 0.0;
    {
      const int m = static_cast<int>(cell_count(n));
      v.assign(m, 0.0);
      std::vector<double> uu(m, 0.0);
      double partial = 0.0;
      for (int k = 0; k <= n - 2; ++k) {
        partial += ipow(pv.lambda, k);
        v[k] = v[m - 1 - k] = ipow(pv.lambda, k);
        uu[k] = uu[m - 1 - k] = partial / ipow(pv.lambda, k);
      }
      v[n - 1] = ipow(pv.lambda, n - 1);
      uu[n - 1] = pv.lambda;
      for (int i = 0; i < m; ++i) inv_direct += uu[i] * v[i];
      inv_closed = 2.0 / (pv.lambda - 1) * (ipow(pv.lambda, n - 1) - n + ipow(pv.lambda, n) / 2) +
                   ipow(pv.lambda, n);
      cd = 1.0 / inv_closed;
      for (auto& e : uu) e *= cd;
      u = std::move(uu);
    }
    rec.bounded("markov.eigen_right_residual", right_eigen_residual<double>(adj, pv.lambda, v),
                eigen_tolerance);
    rec.bounded("markov.eigen_left_residual", left_eigen_residual<double>(adj, pv.lambda, u),
                eigen_tolerance);
    rec.bounded("markov.cd_formula_relative", std::abs(inv_closed - inv_direct) / inv_closed,
                1e-12);
    rec.close("markov.power_iteration", power_iteration<double>(adj), pv.lambda, 1e-9);

    markov_chain<double> chain;
    chain.n = n;
    chain.cells = cells;
    chain.adjacency = adj;
    chain.lambda = pv;
    chain.u = u;
    chain.v = v;
    chain.cd = cd;
    chain.p.assign(adj.size(), 0.0);
    chain.transition.assign(adj.size(), std::vector<double>(adj.size(), 0.0));
    double row_dev = 0.0;
    for (std::size_t i = 0; i < adj.size(); ++i) {
      chain.p[i] = u[i] * v[i];
      double row = 0.0;
      for (std::size_t j = 0; j < adj.size(); ++j) {
        chain.transition[i][j] = adj[i][j] * v[j] / (pv.lambda * v[i]);
        row += chain.transition[i][j];
      }
      row_dev = std::max(row_dev, std::abs(row - 1.0));
    }
    double psum = 0.0;
    for (double e : chain.p) psum += e;
    rec.close("markov.stationary_sum", psum, 1.0, 1e-12);
    rec.bounded("markov.row_sums", row_dev, 1e-12);
    rec.bounded("markov.stationarity", stationarity_residual<double>(chain.p, chain.transition),
                1e-10);
    rec.close("markov.parry_entropy", markov_entropy<double>(chain.p, chain.transition),
              std::log(pv.lambda), 1e-10);

    const double h_induced = std::log(pv.lambda) / (cd * ipow(pv.lambda, n));
    rec.close("markov.abramov", h_induced * chain.p[center_index(n)], std::log(pv.lambda), 1e-12);
    rec.greater("markov.entropy_margin", mme_entropy(n), h_induced);
  });
}

inline void measures_suite(int n, const options& opt, std::vector<check_result>& out) {
  detail::recorder rec("measures", n, out);
  const auto ctx = solve_beta(n);
  rec.guarded("measures.gls_cylinder", [&] {
    const int depth = detail::word_depth(n, 50000);
    const auto uniform = uniform_return_time_vector<double>(n);
    for (double p : {0.3, 0.5}) {
      double worst = 0.0;
      double control = 0.0;
      for (const auto& w : detail::all_words(n, depth)) {
        cylinder_spec spec;
        for (const auto& l : w.letters) {
          spec.coins.push_back(l.coin);
          spec.rts.push_back(l.rt);
        }
        worst = std::max(worst, gls_cylinder_check(spec, p, ctx).deviation);
        control = std::max(control, gls_cylinder_check(spec, p, ctx, &uniform).deviation);
      }
      rec.bounded("measures.gls_cylinder", worst, 1e-12, {{"p", p}, {"depth", depth}});
      rec.greater("measures.gls_cylinder_negative_control", control, 1e-3,
                  {{"p", p}, {"depth", depth}});
    }
  });
  rec.guarded("measures.kac", [&] {
    const auto chain_cells = build_partition(ctx);
    const double lo = chain_cells.front().lo, hi = chain_cells.back().hi;
    std::vector<std::pair<std::string, induced_measure_spec<double>>> kinds = {
        {"lebesgue", induced_measure_spec<double>::lebesgue(ctx, 0.5)},
        {"mme", induced_measure_spec<double>::product(0.5, uniform_return_time_vector<double>(n))},
    };
    for (const auto& [name, spec] : kinds) {
      induced_measure<double> nu(spec, ctx);
      const double center = kac_lift(nu, rectangle<double>{{}, ctx.a, ctx.b});
      rec.close("measures.kac_identity", center * nu.expected_return_time(), 1.0, 1e-12,
                {{"kind", name}});
      rec.close("measures.kac_normalization", kac_lift(nu, rectangle<double>{{}, lo, hi}), 1.0,
                1e-12, {{"kind", name}});

      double worst = 0.0;
      std::size_t tested = 0;
      for (std::size_t c = 0; c < chain_cells.size(); ++c)
        for (int prefix = 0; prefix < 6; ++prefix) {
          std::vector<int> coins;
          if (prefix >= 2) coins.push_back(prefix % 2);
          if (prefix >= 4) coins.push_back(1 - prefix % 2);
          rectangle<double> e{coins, chain_cells[c].lo, chain_cells[c].hi};
          worst = std::max(worst, std::abs(kac_lift(nu, e) - kac_lift_preimage(nu, e)));
          ++tested;
        }
      if (spec.kind == induced_kind::lebesgue) {
        const counter_rng rng(opt.seed, 202);
        for (std::uint64_t k = 0; k < 100; ++k) {
          double y1 = lo + rng.uniform(3 * k) * (hi - lo);
          double y2 = lo + rng.uniform(3 * k + 1) * (hi - lo);
          if (y1 > y2) std::swap(y1, y2);
          std::vector<int> coins;
          if (rng.uniform(3 * k + 2) < 0.5) coins.push_back(static_cast<int>(k % 2));
          rectangle<double> e{coins, y1, y2};
          worst = std::max(worst, std::abs(kac_lift(nu, e) - kac_lift_preimage(nu, e)));
          ++tested;
        }
      }
      rec.bounded("measures.lifted_invariance", worst, 1e-10,
                  {{"kind", name}, {"rectangles", tested}});
    }
  });
  rec.guarded("measures.abramov", [&] {
    const auto parry = abramov_check<double>(n, abramov_kind::parry);
    rec.bounded("measures.abramov_parry", parry.deviation, 1e-12);
    const auto chain = build_markov_chain(n);
    rec.close("measures.abramov_parry_mu_center", parry.mu_center,
              chain.cd * ipow(chain.lambda.lambda, n), 1e-12);
    const auto mme = abramov_check<double>(n, abramov_kind::mme_lift);
    rec.greater("measures.mme_lift_below_parry", std::log(solve_lambda(n).lambda), mme.h_K);
  });
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"gls", "symbolic", "markov", "measures"};
  return names;
}

/// Runs `suite` ("all" or one of suite_names()) for every n in [n_min, n_max];
/// results are ordered by (n, suite).
inline std::vector<check_result> run(const std::string& suite, int n_min, int n_max,
                                     const options& opt = {}) {
  if (n_min < 3 || n_max < n_min) throw domain_error("verify: invalid n range");
  const auto& names = suite_names();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end())
    throw domain_error("verify: unknown suite " + suite);
  std::vector<check_result> out;
  for (int n = n_min; n <= n_max; ++n)
    for (const auto& s : names) {
      if (suite != "all" && suite != s) continue;
      if (s == "gls") gls_suite(n, opt, out);
      if (s == "symbolic") symbolic_suite(n, opt, out);
      if (s == "markov") markov_suite(n, opt, out);
      if (s == "measures") measures_suite(n, opt, out);
    }
  return out;
}

inline bool all_pass(const std::vector<check_result>& rs) {
  return std::all_of(rs.begin(), rs.end(), [](const check_result& r) { return r.pass; });
}

inline json report(const std::vector<check_result>& rs) {
  json checks = json::array();
  std::size_t failed = 0;
  for (const auto& r : rs) {
    checks.push_back(to_json(r));
    if (!r.pass) ++failed;
  }
  return {{"checks", checks},
          {"total", rs.size()},
          {"failed", failed},
          {"pass", failed == 0}};
}

}  // namespace rbeta::verify
