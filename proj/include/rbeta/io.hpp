#pragma once

// CSV and JSON forms of orbits, partitions, words, chains and sweep tables.
// Floating values are written with 12 significant digits.

#include "rbeta/dynamics.hpp"
#include "rbeta/error.hpp"
#include "rbeta/gls.hpp"
#include "rbeta/markov.hpp"
#include "rbeta/symbolic.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace rbeta::io {

using json = nlohmann::json;

inline constexpr int significant_digits = 12;

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant_digits, v);
  return buf;
}

/// v rounded to 12 significant digits, so JSON output is stable and short.
inline double round_sig(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format_number(v).c_str(), nullptr);
}

template <class Real>
json number(const Real& v) {
  return round_sig(to_double(v));
}

template <class Real>
json numbers(const std::vector<Real>& v) {
  json arr = json::array();
  for (const auto& e : v) arr.push_back(number(e));
  return arr;
}

inline const char* orbit_csv_header = "step,x,digit,in_switch,coin_cursor";

template <class Real>
void write_orbit_csv(std::ostream& os, const orbit_trace<Real>& tr) {
  os << orbit_csv_header << '\n';
  for (const auto& r : tr.rows)
    os << r.step << ',' << format_number(to_double(r.x)) << ',' << r.digit << ','
       << (r.in_switch ? 1 : 0) << ',' << r.coin_cursor << '\n';
}

template <class Real>
json partition_json(const gls_partition<Real>& part) {
  return {{"side", to_string(part.side)},
          {"breakpoints", numbers(part.breakpoints)},
          {"slopes", numbers(part.slopes)},
          {"return_times", part.return_times}};
}

inline void write_word_csv(std::ostream& os, const symbolic_word& w) {
  for (const auto& l : w.letters) os << l.coin << ',' << l.rt << '\n';
}

inline symbolic_word read_word_csv(std::istream& is, int n) {
  symbolic_word w{n, {}};
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw domain_error("word CSV: expected \"coin,rt\"");
    w.letters.push_back({std::stoi(line.substr(0, comma)), std::stoi(line.substr(comma + 1))});
  }
  w.validate();
  return w;
}

inline json word_json(const symbolic_word& w) {
  json arr = json::array();
  for (const auto& l : w.letters) arr.push_back({l.coin, l.rt});
  return arr;
}

inline symbolic_word word_from_json(const json& arr, int n) {
  symbolic_word w{n, {}};
  for (const auto& pair : arr) {
    if (!pair.is_array() || pair.size() != 2) throw domain_error("word JSON: expected [coin, rt]");
    w.letters.push_back({pair[0].get<int>(), pair[1].get<int>()});
  }
  w.validate();
  return w;
}

/// Entropy unit: natural log, or bits (divide by log 2).
enum class log_base { natural, bits };

inline double in_unit(double nats, log_base base) {
  return base == log_base::bits ? nats / std::log(2.0) : nats;
}

template <class Real>
json markov_json(const markov_chain<Real>& chain, log_base base = log_base::natural) {
  using std::log;
  json cells = json::array();
  for (const auto& c : chain.cells)
    cells.push_back({{"lo", number(c.lo)}, {"hi", number(c.hi)}, {"label", c.label}});
  json trans = json::array();
  for (const auto& row : chain.transition) trans.push_back(numbers(row));
  const int n = chain.n;
  const double h_k = to_double(log(chain.lambda.lambda));
  const double h_induced = to_double(induced_parry_entropy<Real>(n));
  const double h_max = to_double(mme_entropy<Real>(n));
  return {{"n", n},
          {"lambda", number(chain.lambda.lambda)},
          {"cells", cells},
          {"adjacency", chain.adjacency},
          {"u", numbers(chain.u)},
          {"v", numbers(chain.v)},
          {"cd", number(chain.cd)},
          {"p", numbers(chain.p)},
          {"P_trans", trans},
          {"h_K", round_sig(in_unit(h_k, base))},
          {"h_I_induced", round_sig(in_unit(h_induced, base))},
          {"h_I_max", round_sig(in_unit(h_max, base))},
          {"margin", round_sig(in_unit(h_max - h_induced, base))}};
}

inline const char* inequality_csv_header = "n,lambda,h_max,h_induced,margin";

template <class Real>
void write_inequality_csv(std::ostream& os, const std::vector<inequality_row<Real>>& rows,
                          log_base base = log_base::natural) {
  os << inequality_csv_header << '\n';
  for (const auto& r : rows)
    os << r.n << ',' << format_number(to_double(r.lambda)) << ','
       << format_number(in_unit(to_double(r.h_max), base)) << ','
       << format_number(in_unit(to_double(r.h_induced), base)) << ','
       << format_number(in_unit(to_double(r.margin), base)) << '\n';
}

template <class Real>
json inequality_json(const std::vector<inequality_row<Real>>& rows,
                     log_base base = log_base::natural) {
  json arr = json::array();
  for (const auto& r : rows)
    arr.push_back({{"n", r.n},
                   {"lambda", number(r.lambda)},
                   {"h_max", round_sig(in_unit(to_double(r.h_max), base))},
                   {"h_induced", round_sig(in_unit(to_double(r.h_induced), base))},
                   {"margin", round_sig(in_unit(to_double(r.margin), base))}});
  return arr;
}

}  // namespace rbeta::io
