#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "json.hpp"
#include "semirel/report.hpp"

using namespace semirel;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\n') {
      out.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  if (start < text.size()) out.push_back(text.substr(start));
  return out;
}

std::size_t fields(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

RunConfig fast_config() {
  auto c = RunConfig::table1();
  c.solvers = {true, false, true};
  c.levels = {0, 3};
  return c;
}

}  // namespace

TEST(RunConfig, DefaultsMatchTheComparisonTable) {
  const auto c = RunConfig::table1();
  EXPECT_EQ(c.beta, 1.0);
  EXPECT_EQ(c.units.hbar, 1.0);
  EXPECT_EQ(c.units.c, 1.0);
  ASSERT_EQ(c.systems.size(), 4u);
  EXPECT_EQ(c.systems[1].mu, 5.0);
  EXPECT_EQ(c.systems[1].m1, 100.0);
  EXPECT_EQ(c.systems[3].mu, 1.0);
  EXPECT_EQ(c.systems[3].m1, 10.0);
  EXPECT_EQ(c.levels, (std::vector<int>{0, 10, 20}));
  EXPECT_TRUE(c.solvers.wp && c.solvers.exact && c.solvers.nr);
  EXPECT_NO_THROW(c.validate());
}

TEST(RunConfig, Validation) {
  auto c = RunConfig::table1();
  c.levels = {10, 0};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = RunConfig::table1();
  c.systems.clear();
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = RunConfig::table1();
  c.solvers = {false, false, false};
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = RunConfig::table1();
  c.accuracy = 1e-9;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(RunConfig, JsonOverridesAndEcho) {
  const auto c = parse_run_config(R"({
    "potential": {"kind": "harmonic", "beta": 2.0},
    "units": {"c": 3.0},
    "systems": [{"mu": 1, "m1": 4}],
    "levels": [1, 2],
    "solvers": ["wp"],
    "integration": {"rel_tol": 1e-10, "length_scale": 2.0},
    "output": {"format": "json", "path": "out.json"}
  })");
  EXPECT_EQ(c.beta, 2.0);
  EXPECT_EQ(c.units.c, 3.0);
  EXPECT_EQ(c.units.hbar, 1.0);
  ASSERT_EQ(c.systems.size(), 1u);
  EXPECT_EQ(c.systems[0].m1, 4.0);
  EXPECT_EQ(c.levels, (std::vector<int>{1, 2}));
  EXPECT_TRUE(c.solvers.wp);
  EXPECT_FALSE(c.solvers.exact);
  EXPECT_EQ(c.integration.rel_tol, 1e-10);
  EXPECT_EQ(c.integration.length_scale, 2.0);
  EXPECT_EQ(c.format, OutputFormat::json);
  EXPECT_EQ(c.output_path, "out.json");

  const auto again = parse_run_config(run_config_json(c), RunConfig::table1());
  EXPECT_EQ(run_config_json(again), run_config_json(c));
}

TEST(RunConfig, JsonErrors) {
  EXPECT_THROW(parse_run_config("{"), std::invalid_argument);
  EXPECT_THROW(parse_run_config("[]"), std::invalid_argument);
  EXPECT_THROW(parse_run_config(R"({"solvers": ["dirac"]})"), std::invalid_argument);
  EXPECT_THROW(parse_run_config(R"({"potential": {"kind": "quartic"}})"), std::invalid_argument);
  EXPECT_THROW(parse_run_config(R"({"levels": [3, 1]})"), std::invalid_argument);
  EXPECT_THROW(parse_run_config(R"({"beta": "one"})"), std::invalid_argument);
}

TEST(ComparisonRow, Deltas) {
  ComparisonRow r{0, 5, 10, 10, 0.222686, 0.2226, std::nullopt, {}, {}};
  r.update_deltas();
  ASSERT_TRUE(r.wp_rel_delta);
  EXPECT_NEAR(*r.wp_rel_delta, -3.862e-4, 1e-6);
  EXPECT_FALSE(r.nr_rel_delta);
  r.eps_nr = 0.224;
  r.update_deltas();
  EXPECT_NEAR(*r.nr_rel_delta, 0.224 / 0.222686 - 1.0, 1e-15);
}

TEST(ComparisonRow, DeltaRecomputesProperty) {
  semirel::testing::Gen g(61);
  for (int i = 0; i < semirel::testing::kCases; ++i) {
    ComparisonRow r;
    r.eps_exact = g.log_uniform(0.01, 50);
    r.eps_wp = *r.eps_exact * g.uniform(0.9, 1.1);
    r.update_deltas();
    EXPECT_NEAR(*r.wp_rel_delta, *r.eps_wp / *r.eps_exact - 1.0, 1e-12);
  }
}

TEST(FormatNumber, FullPrecisionRoundTrip) {
  semirel::testing::Gen g(62);
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(10.0), "10");
  for (int i = 0; i < semirel::testing::kCases; ++i) {
    const double x = (g.coin() ? 1 : -1) * g.log_uniform(1e-12, 1e12);
    EXPECT_EQ(std::strtod(format_number(x).c_str(), nullptr), x);
  }
}

TEST(Csv, OneRowFormat) {
  ComparisonRow r{0, 5, 10, 10, 0.222686, std::nullopt, 0.5 / std::sqrt(5.0), {}, {}};
  r.update_deltas();
  const auto text = render_csv(std::vector<ComparisonRow>{r});
  EXPECT_EQ(text.find('\r'), std::string::npos);
  EXPECT_EQ(text.back(), '\n');
  const auto ls = lines(text);
  ASSERT_EQ(ls.size(), 2u);
  EXPECT_EQ(ls[0], csv_header);
  EXPECT_EQ(fields(ls[0]), 9u);
  EXPECT_EQ(fields(ls[1]), 9u);
  EXPECT_EQ(ls[1].rfind("0,5,10,10,0.222686,,", 0), 0u) << ls[1];
  EXPECT_NE(ls[1].find("0.22360679774997896"), std::string::npos);
}

TEST(Csv, RoundTripProperty) {
  semirel::testing::Gen g(63);
  for (int i = 0; i < 50; ++i) {
    std::vector<ComparisonRow> rows(static_cast<std::size_t>(g.integer(1, 12)));
    for (auto& r : rows) {
      r.n = g.integer(0, 40);
      r.mu = g.log_uniform(0.1, 10);
      r.m1 = r.mu * (1 + g.log_uniform(0.01, 100));
      r.m2 = g.log_uniform(0.1, 100);
      if (g.coin()) r.eps_exact = g.log_uniform(1e-3, 100);
      if (g.coin()) r.eps_wp = g.log_uniform(1e-3, 100);
      if (g.coin()) r.eps_nr = g.log_uniform(1e-3, 100);
      r.update_deltas();
    }
    const auto parsed = parse_csv(render_csv(rows));
    ASSERT_EQ(parsed.size(), rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) EXPECT_EQ(parsed[k], rows[k]) << "row " << k;
  }
}

TEST(Csv, ParseErrors) {
  EXPECT_THROW(parse_csv("nope\n"), std::invalid_argument);
  EXPECT_THROW(parse_csv(std::string(csv_header) + "\n1,2,3\n"), std::invalid_argument);
  EXPECT_THROW(parse_csv(std::string(csv_header) + "\nx,5,10,10,,,,,\n"), std::invalid_argument);
  EXPECT_THROW(parse_csv(std::string(csv_header) + "\n0,5,10,10,abc,,,,\n"), std::invalid_argument);
}

TEST(Table, DeterministicAcrossRunsAndThreadCounts) {
  auto config = fast_config();
  config.threads = 1;
  const auto serial = render_csv(reproduce_table1(config).rows);
  config.threads = 4;
  const auto parallel = render_csv(reproduce_table1(config).rows);
  const auto again = render_csv(reproduce_table1(config).rows);
  EXPECT_EQ(serial, parallel);
  EXPECT_EQ(parallel, again);
}

TEST(Table, RowOrderAndColumns) {
  const auto config = fast_config();
  const auto report = reproduce_table1(config);
  ASSERT_EQ(report.rows.size(), 8u);
  EXPECT_TRUE(report.all_ok());
  EXPECT_EQ(report.rows[0].n, 0);
  EXPECT_EQ(report.rows[1].n, 3);
  EXPECT_EQ(report.rows[2].m1, 100.0);
  EXPECT_NEAR(report.rows[2].m2, 100.0 / 19.0, 1e-14);
  for (const auto& r : report.rows) {
    EXPECT_TRUE(r.eps_wp.has_value());
    EXPECT_TRUE(r.eps_nr.has_value());
    EXPECT_FALSE(r.eps_exact.has_value());
    EXPECT_FALSE(r.wp_rel_delta.has_value());
  }
}

TEST(Table, FailuresAreRecordedPerCell) {
  auto config = RunConfig::table1();
  config.systems = {{1.0, 2.0}};
  config.levels = {0, 20};
  config.solvers = {true, false, true};
  config.integration.x_max = 6.0;  // too short for n = 20
  const auto report = reproduce_table1(config);
  ASSERT_EQ(report.rows.size(), 2u);
  EXPECT_FALSE(report.all_ok());
  EXPECT_TRUE(report.rows[0].eps_wp.has_value());
  EXPECT_FALSE(report.rows[1].eps_wp.has_value());
  EXPECT_TRUE(report.rows[1].eps_nr.has_value());
  bool found = false;
  for (const auto& cell : report.cells) {
    if (cell.row == 1 && cell.solver == "wp") {
      EXPECT_FALSE(cell.ok);
      EXPECT_FALSE(cell.message.empty());
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Json, RowsAndMetadata) {
  const auto config = fast_config();
  const auto report = reproduce_table1(config);
  const auto doc = nlohmann::json::parse(render_json(report, config));
  ASSERT_TRUE(doc.contains("rows"));
  ASSERT_TRUE(doc.contains("metadata"));
  EXPECT_EQ(doc["rows"].size(), report.rows.size());
  const auto& first = doc["rows"][0];
  for (const char* key : {"n", "mu", "m1", "m2", "eps_exact", "eps_wp", "eps_nr", "wp_rel_delta",
                          "nr_rel_delta"})
    EXPECT_TRUE(first.contains(key)) << key;
  EXPECT_TRUE(first["eps_exact"].is_null());
  EXPECT_EQ(first["eps_wp"].get<double>(), *report.rows[0].eps_wp);
  EXPECT_EQ(doc["metadata"]["tool"], "semirel");
  EXPECT_TRUE(doc["metadata"].contains("version"));
  EXPECT_EQ(doc["metadata"]["config"]["levels"], nlohmann::json({0, 3}));
  EXPECT_EQ(doc["metadata"]["diagnostics"].size(), report.cells.size());
}

TEST(Console, RoundedView) {
  ComparisonRow r{20, 5, 10, 10, 8.515499, 8.5115428, 9.16787, {}, {}};
  const auto text = render_console(std::vector<ComparisonRow>{r});
  EXPECT_NE(text.find("8.515499"), std::string::npos);
  EXPECT_NE(text.find("9.17"), std::string::npos);
}

TEST(Threads, ResolveFromEnvironment) {
  EXPECT_EQ(resolve_thread_count(3), 3u);
  ::setenv("SEMIREL_THREADS", "2", 1);
  EXPECT_EQ(resolve_thread_count(0), 2u);
  ::setenv("SEMIREL_THREADS", "0", 1);
  EXPECT_GE(resolve_thread_count(0), 1u);
  ::setenv("SEMIREL_THREADS", "junk", 1);
  EXPECT_GE(resolve_thread_count(0), 1u);
  ::unsetenv("SEMIREL_THREADS");
  EXPECT_GE(resolve_thread_count(0), 1u);
}
