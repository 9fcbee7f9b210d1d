// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include "cli_runner.hpp"
#include "oracles.hpp"
#include "rbeta/algebra.hpp"
#include "rbeta/dynamics.hpp"
#include "rbeta/gls.hpp"
#include "rbeta/markov.hpp"
#include "rbeta/measures.hpp"
#include "rbeta/rng.hpp"
#include "rbeta/symbolic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace rbeta;

namespace {

struct outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(const char* id, const char* title, double budget_s, const std::function<outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < budget_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("%-4s %s  %s | %s | %.3fs (budget %gs%s)\n", id, pass ? "PASS" : "FAIL", title,
              o.detail.c_str(), secs, budget_s, in_time ? "" : ", exceeded");
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<symbolic_word> all_words(int n, int length) {
  const int q = alphabet_size(n);
  int total = 1;
  for (int i = 0; i < length; ++i) total *= q;
  std::vector<symbolic_word> out;
  for (int i = 0; i < total; ++i) {
    symbolic_word w{n, {}};
    for (int j = 0, r = i; j < length; ++j, r /= q) w.letters.push_back(letter_from_index(r % q, n));
    out.push_back(std::move(w));
  }
  return out;
}

// Expected return time of the Parry chain to the center cell: one step out,
// then the walk along the left or right chain back to the center.
double parry_expected_return(const markov_chain<double>& chain) {
  const std::size_t c = center_index(chain.n);
  double e = 0.0;
  for (std::size_t j = 0; j < chain.size(); ++j) {
    if (j == c) continue;
    const double steps_back = j < c ? static_cast<double>(c - j) : static_cast<double>(j - c);
    e += chain.transition[c][j] * (1.0 + steps_back);
  }
  return e;
}

}  // namespace

int main() {
  criterion("AC1", "root constants vs bisection oracle", 1.0, [] {
    const double beta = solve_beta(3).beta, lam = solve_lambda(3).lambda;
    const double ob = static_cast<double>(oracle::beta(3)), ol = static_cast<double>(oracle::lambda(3));
    const bool ok = std::abs(beta - 1.3247179572) <= 1e-9 && std::abs(lam - 1.7692923542) <= 1e-9 &&
                    std::abs(beta - ob) <= 1e-9 && std::abs(lam - ol) <= 1e-9;
    return outcome{ok, "beta3=" + fmt(beta) + " oracle=" + fmt(ob) + " lambda3=" + fmt(lam) +
                           " oracle=" + fmt(ol)};
  });

  criterion("AC2", "beta_n increasing below the golden ratio, 3<=n<=40", 1.0, [] {
    const double phi = (1 + std::sqrt(5.0)) / 2;
    bool ok = true;
    double prev = 0, gap_min = 1;
    for (int n = 3; n <= 40; ++n) {
      const double b = solve_beta(n).beta;
      ok = ok && b > prev && b < phi;
      prev = b;
      gap_min = std::min(gap_min, phi - b);
    }
    return outcome{ok, "beta40=" + fmt(prev) + " min(phi-beta)=" + fmt(gap_min)};
  });

  criterion("AC3", "return-time law, 1e6 induced steps, n in {3,4,5}", 30.0, [] {
    const std::size_t m = 1000000;
    bool ok = true;
    double worst = 0;
    for (int n : {3, 4, 5}) {
      const auto ctx = solve_beta(n);
      const auto hist = sample_return_times(ctx, m, 1000 + n);
      std::size_t inside = 0;
      for (int t = 2; t <= n; ++t) {
        inside += hist[t];
        const double q = std::pow(ctx.beta, -t);
        const double z = (static_cast<double>(hist[t]) / m - q) / std::sqrt(q * (1 - q) / m);
        worst = std::max(worst, std::abs(z));
      }
      ok = ok && inside == m;
    }
    return outcome{ok && worst <= 4.0, "max |z| = " + fmt(worst) + " (limit 4)"};
  });

  criterion("AC4", "cylinder invariance, depth<=3, n in {3,4}, p in {0.3,0.5}", 5.0, [] {
    double worst = 0;
    std::size_t count = 0;
    for (int n : {3, 4})
      for (double p : {0.3, 0.5}) {
        const auto ctx = solve_beta(n);
        for (int depth = 1; depth <= 3; ++depth)
          for (const auto& w : all_words(n, depth)) {
            cylinder_spec s;
            for (const auto& l : w.letters) {
              s.coins.push_back(l.coin);
              s.rts.push_back(l.rt);
            }
            worst = std::max(worst, gls_cylinder_check(s, p, ctx).deviation);
            ++count;
          }
      }
    return outcome{worst <= 1e-12, "max deviation " + fmt(worst) + " over " + std::to_string(count) + " rectangles"};
  });

  criterion("AC5", "full-shift decode and encode conjugacy", 10.0, [] {
    const auto ctx = solve_beta(3);
    double excess = 0;
    const auto words = all_words(3, 4);
    for (const auto& w : words) {
      const auto v = decode(w, ctx);
      excess = std::max({excess, ctx.a - (v.value + v.tail_bound), (v.value - v.tail_bound) - ctx.b});
    }
    std::size_t mismatches = 0;
    const counter_rng rng(55);
    for (std::uint64_t k = 0; k < 10000; ++k) {
      point_state<double> s{coin_stream::seeded(k), ctx.a + rng.uniform(k) * (ctx.b - ctx.a)};
      const auto w = encode(s, 20, ctx);
      const auto img = induced_step(s, ctx);
      if (!(encode(img.state, 19, ctx) == w.shifted())) ++mismatches;
    }
    return outcome{excess <= 0 && mismatches == 0,
                   std::to_string(words.size()) + " words, max excess " + fmt(std::max(excess, 0.0)) +
                       "; conjugacy mismatches " + std::to_string(mismatches) + "/10000"};
  });

  criterion("AC6", "S_3 as displayed; image construction matches rule, n=3..8", 1.0, [] {
    bool ok = build_adjacency(3) == oracle::s3();
    for (int n = 3; n <= 8; ++n) {
      const auto ctx = solve_beta(n);
      ok = ok && adjacency_from_images(build_partition(ctx), ctx) == build_adjacency(n);
    }
    return outcome{ok, ok ? "all matrices agree" : "mismatch"};
  });

  criterion("AC7", "eigen residuals and 1/(cd) formula, n<=30", 2.0, [] {
    double right = 0, left = 0, cd_rel = 0, right_abs = 0;
    for (int n = 3; n <= 30; ++n) {
      const auto pv = solve_lambda(n);
      const auto e = eigen_closed_form(pv);
      right = std::max(right, e.right_residual);
      left = std::max(left, e.left_residual);
      cd_rel = std::max(cd_rel, std::abs(e.inv_cd_closed - e.inv_cd_direct) / e.inv_cd_direct);
      right_abs = std::max(right_abs, e.right_residual * inf_norm<double>(e.v));
    }
    const bool ok = right <= 1e-10 && left <= 1e-10 && cd_rel <= 1e-12;
    return outcome{ok, "unit-norm residuals right " + fmt(right) + " left " + fmt(left) +
                           "; 1/(cd) relative gap " + fmt(cd_rel) + "; unscaled right residual " +
                           fmt(right_abs)};
  });

  criterion("AC8", "Parry chain entropy equals log lambda, n<=30", 2.0, [] {
    double worst = 0;
    for (int n = 3; n <= 30; ++n) {
      const auto chain = build_markov_chain(n);
      worst = std::max(worst, std::abs(markov_entropy<double>(chain.p, chain.transition) -
                                       std::log(chain.lambda.lambda)));
    }
    return outcome{worst <= 1e-10, "max |h - log lambda| = " + fmt(worst)};
  });

  criterion("AC9", "Abramov and Kac identities, n<=30", 2.0, [] {
    double abramov = 0, kac = 0, kac_lifts = 0;
    for (int n = 3; n <= 30; ++n) {
      const auto chain = build_markov_chain(n);
      const double lam = chain.lambda.lambda;
      abramov = std::max(abramov, std::abs(std::log(lam) - induced_parry_entropy<double>(n) * chain.cd *
                                                                std::pow(lam, n)));
      kac = std::max(kac, std::abs(chain.p[center_index(n)] * parry_expected_return(chain) - 1));
      const auto ctx = solve_beta(n);
      for (const auto& spec : {induced_measure_spec<double>::lebesgue(ctx, 0.5),
                               induced_measure_spec<double>::product(0.5, uniform_return_time_vector<double>(n))}) {
        induced_measure<double> nu(spec, ctx);
        kac_lifts = std::max(
            kac_lifts, std::abs(kac_lift(nu, rectangle<double>{{}, ctx.a, ctx.b}) * nu.expected_return_time() - 1));
      }
    }
    const bool ok = abramov <= 1e-12 && kac <= 1e-12 && kac_lifts <= 1e-12;
    return outcome{ok, "Abramov " + fmt(abramov) + "; Parry mu(center)*E[tau]-1 " + fmt(kac) +
                           "; lifted measures " + fmt(kac_lifts)};
  });

  criterion("AC10", "entropy inequality margin > 0, 3<=n<=50", 5.0, [] {
    const auto dbl = check_inequality<double>(3, 30);
    const auto ext = check_inequality<ext_real>(31, 50);
    bool ok = true;
    double min_margin = 1e9;
    for (const auto& r : dbl) min_margin = std::min(min_margin, r.margin);
    for (const auto& r : ext) min_margin = std::min(min_margin, to_double(r.margin));
    ok = min_margin > 0;
    const auto& r3 = dbl.front();
    const double h_oracle = static_cast<double>(oracle::induced_entropy_n3(oracle::lambda(3)));
    const double margin_oracle = std::log(4.0) - h_oracle;
    ok = ok && std::abs(r3.h_max - 1.3862943611) <= 1e-10 && std::abs(r3.h_induced - h_oracle) <= 1e-10 &&
         std::abs(r3.margin - margin_oracle) <= 1e-5;
    return outcome{ok, "min margin " + fmt(min_margin) + "; n=3 log4 " + fmt(r3.h_max) + " induced " +
                           fmt(r3.h_induced) + " margin " + fmt(r3.margin) + " (closed form " +
                           fmt(margin_oracle) + ", printed literal 0.0391148 differs by " +
                           fmt(std::abs(r3.margin - 0.0391148)) + ")"};
  });

  criterion("AC11", "empirical entropy of sampled sequences", 20.0, [] {
    const auto chain = build_markov_chain(3);
    const auto path = sample_parry_chain(chain, 1000000, 31);
    const double h = std::log(chain.lambda.lambda);
    const double est = empirical_entropy(path, 2, static_cast<int>(chain.size()), entropy_estimator::conditional);
    const double naive = empirical_entropy(path, 2, static_cast<int>(chain.size()), entropy_estimator::block);
    const auto uni = sample_uniform(alphabet_size(3), 1000000, 32);
    const double hu = empirical_entropy(uni, 2, alphabet_size(3), entropy_estimator::conditional);
    const double rel_p = std::abs(est - h) / h, rel_u = std::abs(hu - std::log(4.0)) / std::log(4.0);
    return outcome{rel_p <= 0.02 && rel_u <= 0.01,
                   "Parry H2-H1 " + fmt(est) + " vs " + fmt(h) + " (rel " + fmt(rel_p) + "; H2/2 = " +
                       fmt(naive) + "); uniform " + fmt(hu) + " (rel " + fmt(rel_u) + ")"};
  });

  criterion("AC12", "CLI output is byte-identical across runs", 30.0, [] {
    const std::string dir = "/tmp/rbeta_acceptance_";
    const std::vector<std::string> commands = {
        "constants --n 5 --format json",
        "simulate --n 4 --seed 9 --steps 500 --samples 2000 --letters 8 --out " + dir + "orbit.csv --words " +
            dir + "word.csv --summary " + dir + "summary.json",
        "markov --n 4",
        "parry --n-range 3..12",
        "verify --suite all --n 3..4",
        "entropy --n 3 --samples 100000",
    };
    std::size_t identical = 0;
    std::string bad;
    for (const auto& c : commands) {
      auto snapshot = [&] {
        auto r = cli::run(c);
        std::string files;
        if (c.rfind("simulate", 0) == 0)
          files = cli::read_file(dir + "orbit.csv") + cli::read_file(dir + "word.csv") +
                  cli::read_file(dir + "summary.json");
        return std::to_string(r.exit_code) + r.out + r.err + files;
      };
      const auto first = snapshot();
      const auto second = snapshot();
      if (first == second && first[0] == '0')
        ++identical;
      else
        bad += " [" + c + "]";
    }
    for (const char* f : {"orbit.csv", "word.csv", "summary.json"}) std::remove((dir + f).c_str());
    return outcome{identical == commands.size(),
                   std::to_string(identical) + "/" + std::to_string(commands.size()) + " commands identical" + bad};
  });

  std::printf("%s: %d criterion(s) failed\n", failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL", failures);
  return failures == 0 ? 0 : 1;
}
