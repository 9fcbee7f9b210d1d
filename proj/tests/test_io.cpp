#include "rbeta/io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

using namespace rbeta;

TEST(Format, TwelveSignificantDigits) {
  EXPECT_EQ(io::format_number(1.324717957244746), "1.32471795724");
  EXPECT_EQ(io::format_number(0.0), "0");
  EXPECT_EQ(io::format_number(1e-20), "1e-20");
  EXPECT_EQ(io::round_sig(2.0 / 3.0), 0.666666666667);
}

TEST(OrbitCsv, HeaderAndRows) {
  const auto ctx = solve_beta(3);
  const auto tr = orbit(point_state<double>{coin_stream::seeded(1), 1.5}, 3, ctx);
  std::ostringstream os;
  io::write_orbit_csv(os, tr);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "step,x,digit,in_switch,coin_cursor");
  std::getline(is, line);
  EXPECT_EQ(line.substr(0, 6), "0,1.5,");
  int rows = 1;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 3);
}

TEST(OrbitCsv, EmptyOrbitIsHeaderOnly) {
  const auto ctx = solve_beta(3);
  std::ostringstream os;
  io::write_orbit_csv(os, orbit(point_state<double>{coin_stream::seeded(1), 1.5}, 0, ctx));
  EXPECT_EQ(os.str(), "step,x,digit,in_switch,coin_cursor\n");
}

TEST(WordIo, CsvRoundTrip) {
  const symbolic_word w{4, {{1, 3}, {0, 2}, {0, 4}}};
  std::stringstream ss;
  io::write_word_csv(ss, w);
  EXPECT_EQ(ss.str(), "1,3\n0,2\n0,4\n");
  EXPECT_EQ(io::read_word_csv(ss, 4), w);
  std::istringstream bad("1;3\n");
  EXPECT_THROW(io::read_word_csv(bad, 4), domain_error);
  std::istringstream out_of_range("1,5\n");
  EXPECT_THROW(io::read_word_csv(out_of_range, 4), domain_error);
}

TEST(WordIo, JsonRoundTrip) {
  const symbolic_word w{3, {{1, 3}, {0, 2}}};
  const auto j = io::word_json(w);
  EXPECT_EQ(j.dump(), "[[1,3],[0,2]]");
  EXPECT_EQ(io::word_from_json(j, 3), w);
  EXPECT_THROW(io::word_from_json(io::json::parse("[[1]]"), 3), domain_error);
}

TEST(PartitionJson, Fields) {
  const auto j = io::partition_json(greedy_breakpoints(solve_beta(4)));
  EXPECT_EQ(j["side"], "greedy");
  EXPECT_EQ(j["breakpoints"].size(), 4u);
  EXPECT_EQ(j["slopes"].size(), 3u);
  EXPECT_EQ(j["return_times"], io::json::parse("[4,3,2]"));
}

TEST(MarkovJson, Fields) {
  const auto j = io::markov_json(build_markov_chain(3));
  for (const char* k : {"n", "lambda", "cells", "adjacency", "u", "v", "cd", "p", "P_trans", "h_K",
                        "h_I_induced", "h_I_max", "margin"})
    EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["cells"].size(), 5u);
  EXPECT_EQ(j["cells"][2]["label"], "C");
  EXPECT_DOUBLE_EQ(j["lambda"].get<double>(), 1.76929235424);
  const auto bits = io::markov_json(build_markov_chain(3), io::log_base::bits);
  EXPECT_NEAR(bits["h_K"].get<double>(), j["h_K"].get<double>() / std::log(2.0), 1e-11);
}

TEST(InequalityTable, CsvAndJson) {
  const auto rows = check_inequality<double>(3, 5);
  std::ostringstream os;
  io::write_inequality_csv(os, rows);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "n,lambda,h_max,h_induced,margin");
  std::getline(is, line);
  EXPECT_EQ(line, "3,1.76929235424,1.38629436112,1.34719740892,0.0390969522003");
  const auto j = io::inequality_json(rows);
  EXPECT_EQ(j.size(), 3u);
  EXPECT_EQ(j[2]["n"], 5);
}
