// rbeta: command-line front end for the shrinking random beta-transformation
// toolkit. Exit codes: 0 success, 1 verification or runtime failure, 2 usage.

#include "rbeta/algebra.hpp"
#include "rbeta/dynamics.hpp"
#include "rbeta/gls.hpp"
#include "rbeta/io.hpp"
#include "rbeta/markov.hpp"
#include "rbeta/measures.hpp"
#include "rbeta/symbolic.hpp"
#include "rbeta/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>

namespace {

using rbeta::io::json;

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct run_config {
  std::string n_text = "3";
  int n = 3;
  std::string n_range;
  std::uint64_t seed = 1;
  std::size_t samples = 0;
  std::string precision = "double";
  std::string format;
  std::string log_base = "e";
  std::string out;
};

std::pair<int, int> parse_range(const std::string& text, int fallback) {
  if (text.empty()) return {fallback, fallback};
  static const std::regex re(R"(^\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw usage_error("expected n or A..B, got " + text);
  const long lo = std::stol(m[1]);
  const long hi = m[2].matched ? std::stol(m[2]) : lo;
  if (lo < 3 || hi < lo || hi > 1000) throw usage_error("n must satisfy 3 <= A <= B <= 1000");
  return {static_cast<int>(lo), static_cast<int>(hi)};
}

rbeta::io::log_base base_of(const run_config& cfg) {
  return cfg.log_base == "2" ? rbeta::io::log_base::bits : rbeta::io::log_base::natural;
}

/// Writes to --out when given, stdout otherwise.
class output {
 public:
  explicit output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw usage_error("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

void check_n(int n) {
  if (n < 3) throw usage_error("--n must be >= 3");
}

template <class Real>
int run_constants(const run_config& cfg) {
  using std::log;
  const auto ctx = rbeta::solve_beta<Real>(cfg.n);
  const auto pv = rbeta::solve_lambda<Real>(cfg.n);
  const auto e = rbeta::eigen_closed_form(pv);
  const double h_k = rbeta::to_double(log(pv.lambda));
  const double h_max = rbeta::to_double(rbeta::mme_entropy<Real>(cfg.n));
  const double h_ind = rbeta::to_double(rbeta::induced_parry_entropy<Real>(cfg.n));
  const auto base = base_of(cfg);

  std::vector<std::pair<std::string, double>> rows = {
      {"beta", rbeta::to_double(ctx.beta)},
      {"a", rbeta::to_double(ctx.a)},
      {"b", rbeta::to_double(ctx.b)},
      {"lambda", rbeta::to_double(pv.lambda)},
      {"cd", rbeta::to_double(e.cd)},
      {"h_K", rbeta::io::in_unit(h_k, base)},
      {"h_I_max", rbeta::io::in_unit(h_max, base)},
      {"h_I_induced", rbeta::io::in_unit(h_ind, base)},
      {"margin", rbeta::io::in_unit(h_max - h_ind, base)},
  };
  output out(cfg.out);
  if (cfg.format == "json") {
    json j = {{"n", cfg.n}, {"precision", cfg.precision}, {"log_base", cfg.log_base}};
    for (const auto& [k, v] : rows) j[k] = rbeta::io::round_sig(v);
    j["gls"] = {rbeta::io::partition_json(rbeta::greedy_breakpoints(ctx)),
                rbeta::io::partition_json(rbeta::lazy_breakpoints(ctx))};
    out.stream() << j.dump(2) << '\n';
  } else {
    out.stream() << "key,value\n" << "n," << cfg.n << '\n';
    for (const auto& [k, v] : rows) out.stream() << k << ',' << rbeta::io::format_number(v) << '\n';
  }
  return exit_ok;
}

struct simulate_args {
  std::size_t steps = 1000;
  std::optional<double> x0;
  double p = 0.5;
  std::string summary_path;
  std::string words_path;
  std::size_t letters = 0;
};

int run_simulate(const run_config& cfg, const simulate_args& sa) {
  const auto ctx = rbeta::solve_beta(cfg.n);
  if (!(sa.p > 0.0 && sa.p < 1.0)) throw usage_error("--p must lie in (0, 1)");
  const rbeta::counter_rng rng(cfg.seed, 3);
  const double x0 = sa.x0 ? *sa.x0 : ctx.a + rng.uniform(0) * (ctx.b - ctx.a);
  if (x0 < 0.0 || x0 > ctx.domain_max) throw usage_error("--x0 must lie in [0, 1/(beta-1)]");
  rbeta::point_state<double> start{rbeta::coin_stream::seeded(cfg.seed, sa.p), x0};

  const auto trace = rbeta::orbit(start, sa.steps, ctx);
  {
    output out(cfg.out);
    rbeta::io::write_orbit_csv(out.stream(), trace);
  }

  // Return times along the orbit: gaps between successive switch visits.
  std::map<int, std::size_t> along;
  std::optional<std::size_t> last;
  for (const auto& r : trace.rows)
    if (r.in_switch) {
      if (last) ++along[static_cast<int>(r.step - *last)];
      last = r.step;
    }

  json summary = {{"n", cfg.n}, {"seed", cfg.seed}, {"steps", sa.steps}, {"x0", rbeta::io::round_sig(x0)},
                  {"p", sa.p}};
  json orbit_hist = json::object();
  for (const auto& [t, c] : along) orbit_hist[std::to_string(t)] = c;
  summary["orbit_return_times"] = orbit_hist;

  if (cfg.samples > 0) {
    const auto hist = rbeta::sample_return_times(ctx, cfg.samples, cfg.seed, sa.p);
    json law = json::array();
    double worst_z = 0.0;
    for (int t = 2; t <= cfg.n; ++t) {
      const double expect = rbeta::ipow(ctx.beta, -t);
      const double freq = static_cast<double>(hist[t]) / static_cast<double>(cfg.samples);
      const double sigma = std::sqrt(expect * (1.0 - expect) / static_cast<double>(cfg.samples));
      const double z = (freq - expect) / sigma;
      worst_z = std::max(worst_z, std::abs(z));
      law.push_back({{"t", t},
                     {"count", hist[t]},
                     {"frequency", rbeta::io::round_sig(freq)},
                     {"expected", rbeta::io::round_sig(expect)},
                     {"z", rbeta::io::round_sig(z)}});
    }
    summary["induced_samples"] = cfg.samples;
    summary["return_time_law"] = law;
    summary["max_abs_z"] = rbeta::io::round_sig(worst_z);
  }

  if (sa.letters > 0 || !sa.words_path.empty()) {
    rbeta::point_state<double> s = start;
    if (!rbeta::in_switch(s.x, ctx)) s.x = ctx.a + rng.uniform(1) * (ctx.b - ctx.a);
    const auto word = rbeta::encode(s, sa.letters > 0 ? sa.letters : 20, ctx);
    if (!sa.words_path.empty()) {
      output wout(sa.words_path);
      rbeta::io::write_word_csv(wout.stream(), word);
    }
    summary["word"] = rbeta::io::word_json(word);
  }

  if (sa.summary_path.empty()) {
    std::cerr << summary.dump(2) << '\n';
  } else {
    output sout(sa.summary_path);
    sout.stream() << summary.dump(2) << '\n';
  }
  return exit_ok;
}

template <class Real>
int run_markov(const run_config& cfg) {
  const auto chain = rbeta::build_markov_chain<Real>(cfg.n);
  output out(cfg.out);
  out.stream() << rbeta::io::markov_json(chain, base_of(cfg)).dump(2) << '\n';
  return exit_ok;
}

template <class Real>
int run_parry(const run_config& cfg) {
  auto [lo, hi] = parse_range(cfg.n_range, cfg.n);
  const auto rows = rbeta::check_inequality<Real>(lo, hi);
  output out(cfg.out);
  if (cfg.format == "json")
    out.stream() << rbeta::io::inequality_json(rows, base_of(cfg)).dump(2) << '\n';
  else
    rbeta::io::write_inequality_csv(out.stream(), rows, base_of(cfg));
  return exit_ok;
}

int run_verify(const run_config& cfg, const std::string& suite, bool inject_fault) {
  auto [lo, hi] = parse_range(cfg.n_range, cfg.n);
  rbeta::verify::options opt;
  opt.seed = cfg.seed;
  if (cfg.samples > 0) opt.samples = cfg.samples;
  opt.corrupt_adjacency = inject_fault;
  const auto results = rbeta::verify::run(suite, lo, hi, opt);
  auto rep = rbeta::verify::report(results);
  rep["suite"] = suite;
  rep["n_range"] = {lo, hi};
  output out(cfg.out);
  out.stream() << rep.dump(2) << '\n';
  return rbeta::verify::all_pass(results) ? exit_ok : exit_failure;
}

int run_entropy(const run_config& cfg, const std::string& source, int block,
                const std::string& estimator) {
  const std::size_t steps = cfg.samples > 0 ? cfg.samples : 1000000;
  const auto est = estimator == "block" ? rbeta::entropy_estimator::block
                                        : rbeta::entropy_estimator::conditional;
  std::vector<int> sample;
  int alphabet = 0;
  double exact = 0.0;
  if (source == "parry") {
    const auto chain = rbeta::build_markov_chain(cfg.n);
    sample = rbeta::sample_parry_chain(chain, steps, cfg.seed);
    alphabet = static_cast<int>(chain.size());
    exact = std::log(chain.lambda.lambda);
  } else {
    alphabet = rbeta::alphabet_size(cfg.n);
    sample = rbeta::sample_uniform(alphabet, steps, cfg.seed);
    exact = rbeta::mme_entropy(cfg.n);
  }
  const double h = rbeta::empirical_entropy(sample, block, alphabet, est);
  const auto base = base_of(cfg);
  json j = {{"source", source},
            {"n", cfg.n},
            {"samples", steps},
            {"block", block},
            {"estimator", estimator},
            {"estimate", rbeta::io::round_sig(rbeta::io::in_unit(h, base))},
            {"exact", rbeta::io::round_sig(rbeta::io::in_unit(exact, base))},
            {"relative_error", rbeta::io::round_sig(std::abs(h - exact) / exact)}};
  output out(cfg.out);
  if (cfg.format == "csv") {
    out.stream() << "source,n,samples,block,estimator,estimate,exact,relative_error\n"
                 << source << ',' << cfg.n << ',' << steps << ',' << block << ',' << estimator
                 << ',' << rbeta::io::format_number(rbeta::io::in_unit(h, base)) << ','
                 << rbeta::io::format_number(rbeta::io::in_unit(exact, base)) << ','
                 << rbeta::io::format_number(std::abs(h - exact) / exact) << '\n';
  } else {
    out.stream() << j.dump(2) << '\n';
  }
  return exit_ok;
}

void add_common(CLI::App* cmd, run_config& cfg, bool with_range) {
  cmd->add_option("--n", cfg.n_text, with_range ? "n >= 3, or a range A..B" : "Family index n >= 3");
  if (with_range) cmd->add_option("--n-range", cfg.n_range, "Range A..B of n");
  cmd->add_option("--seed", cfg.seed, "Seed of the counter-based generator");
  cmd->add_option("--samples", cfg.samples, "Sample count");
  cmd->add_option("--precision", cfg.precision, "double or extended (113-bit)")
      ->check(CLI::IsMember({"double", "extended"}));
  cmd->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--log-base", cfg.log_base, "Entropy unit: e (nats) or 2 (bits)")
      ->check(CLI::IsMember({"e", "2", "bits", "natural"}));
  cmd->add_option("--out", cfg.out, "Output path (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shrinking random beta-transformation toolkit"};
  app.require_subcommand(1);

  run_config cfg;
  simulate_args sim;
  std::string suite = "all";
  bool inject_fault = false;
  std::string source = "parry";
  int block = 2;
  std::string estimator = "conditional";

  auto* constants = app.add_subcommand("constants", "beta, a, b, lambda, cd and entropies for one n");
  add_common(constants, cfg, false);

  auto* simulate = app.add_subcommand("simulate", "Orbit CSV of K and return-time statistics");
  add_common(simulate, cfg, false);
  simulate->add_option("--steps", sim.steps, "Number of K steps in the orbit dump");
  simulate->add_option("--x0", sim.x0, "Starting point (default: random in [a, b])");
  simulate->add_option("--p", sim.p, "Probability of coin 0");
  simulate->add_option("--summary", sim.summary_path, "Summary JSON path (default stderr)");
  simulate->add_option("--words", sim.words_path, "Write the symbolic word of the start as CSV");
  simulate->add_option("--letters", sim.letters, "Length of the symbolic word");

  auto* markov = app.add_subcommand("markov", "Markov partition, S_n, Perron data and Parry measure (JSON)");
  add_common(markov, cfg, false);

  auto* parry = app.add_subcommand("parry", "Entropy comparison table over a range of n");
  add_common(parry, cfg, true);

  auto* verify = app.add_subcommand("verify", "Run verification suites; JSON report");
  add_common(verify, cfg, true);
  verify->add_option("--suite", suite, "gls, symbolic, markov, measures or all")
      ->check(CLI::IsMember({"gls", "symbolic", "markov", "measures", "all"}));
  verify->add_flag("--inject-fault", inject_fault, "Corrupt S_n (negative control)")->group("");

  auto* entropy = app.add_subcommand("entropy", "Empirical block entropy of sampled sequences");
  add_common(entropy, cfg, false);
  entropy->add_option("--source", source, "parry or uniform")
      ->check(CLI::IsMember({"parry", "uniform"}));
  entropy->add_option("--block", block, "Block length");
  entropy->add_option("--estimator", estimator, "block (H_k/k) or conditional (H_k - H_{k-1})")
      ->check(CLI::IsMember({"block", "conditional"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  if (cfg.log_base == "bits") cfg.log_base = "2";
  if (cfg.log_base == "natural") cfg.log_base = "e";
  const bool extended = cfg.precision == "extended";

  try {
    {
      const auto [lo, hi] = parse_range(cfg.n_text, 3);
      if (lo != hi && !(*parry || *verify)) throw usage_error("--n takes a single value here");
      cfg.n = lo;
      if (cfg.n_range.empty() && lo != hi) cfg.n_range = cfg.n_text;
    }
    check_n(cfg.n);
    if (*constants) {
      if (cfg.format.empty()) cfg.format = "csv";
      return extended ? run_constants<rbeta::ext_real>(cfg) : run_constants<double>(cfg);
    }
    if (*simulate) return run_simulate(cfg, sim);
    if (*markov) return extended ? run_markov<rbeta::ext_real>(cfg) : run_markov<double>(cfg);
    if (*parry) {
      if (cfg.format.empty()) cfg.format = "csv";
      return extended ? run_parry<rbeta::ext_real>(cfg) : run_parry<double>(cfg);
    }
    if (*verify) return run_verify(cfg, suite, inject_fault);
    if (*entropy) {
      if (block < 1) throw usage_error("--block must be >= 1");
      return run_entropy(cfg, source, block, estimator);
    }
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return exit_usage;
  } catch (const rbeta::domain_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_failure;
  }
  return exit_usage;
}
