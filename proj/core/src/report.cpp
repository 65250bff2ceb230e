#include "semirel/report.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#ifndef SEMIREL_VERSION
#define SEMIREL_VERSION "0.0.0"
#endif

namespace semirel {

using json = nlohmann::json;

OutputFormat parse_output_format(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw std::invalid_argument("unknown output format '" + std::string(name) + "'");
}

RunConfig RunConfig::table1() {
  RunConfig c;
  c.systems = {{5.0, 10.0}, {5.0, 100.0}, {1.0, 2.0}, {1.0, 10.0}};
  c.levels = {0, 10, 20};
  return c;
}

void RunConfig::validate() const {
  if (!(std::isfinite(beta) && beta > 0.0))
    throw std::invalid_argument("config: beta must be finite and positive");
  units.validate();
  if (systems.empty()) throw std::invalid_argument("config: systems must not be empty");
  for (const auto& s : systems) partner_mass(s.mu, s.m1);
  if (levels.empty()) throw std::invalid_argument("config: levels must not be empty");
  if (!std::is_sorted(levels.begin(), levels.end()) || levels.front() < 0)
    throw std::invalid_argument("config: levels must be non-negative and sorted ascending");
  if (!solvers.any()) throw std::invalid_argument("config: select at least one solver");
  if (!(accuracy >= 1e-7))
    throw std::invalid_argument("config: accuracy must be at least 1e-7");
  integration.validate();
}

namespace {

template <class T>
void read(const json& j, const char* key, T& out) {
  if (const auto it = j.find(key); it != j.end() && !it->is_null()) out = it->get<T>();
}

}  // namespace

RunConfig parse_run_config(std::string_view json_text, RunConfig base) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  RunConfig c = std::move(base);
  try {
    read(j, "beta", c.beta);
    if (const auto it = j.find("potential"); it != j.end()) {
      const auto kind = it->value("kind", std::string("harmonic"));
      if (kind != "harmonic")
        throw std::invalid_argument("config: the comparison table supports harmonic wells only");
      read(*it, "beta", c.beta);
    }
    if (const auto it = j.find("units"); it != j.end()) {
      read(*it, "hbar", c.units.hbar);
      read(*it, "c", c.units.c);
    }
    if (const auto it = j.find("systems"); it != j.end()) {
      c.systems.clear();
      for (const auto& s : *it) c.systems.push_back({s.at("mu").get<double>(), s.at("m1").get<double>()});
    }
    read(j, "levels", c.levels);
    if (const auto it = j.find("solvers"); it != j.end()) {
      c.solvers = {false, false, false};
      for (const auto& s : *it) {
        const auto name = s.get<std::string>();
        if (name == "wp") c.solvers.wp = true;
        else if (name == "exact") c.solvers.exact = true;
        else if (name == "nr") c.solvers.nr = true;
        else throw std::invalid_argument("config: unknown solver '" + name + "'");
      }
    }
    read(j, "accuracy", c.accuracy);
    read(j, "threads", c.threads);
    if (const auto it = j.find("integration"); it != j.end()) {
      auto& ic = c.integration;
      read(*it, "rel_tol", ic.rel_tol);
      read(*it, "abs_tol", ic.abs_tol);
      read(*it, "h_init", ic.h_init);
      read(*it, "h_max", ic.h_max);
      read(*it, "termination_ratio", ic.termination_ratio);
      read(*it, "forbidden_margin", ic.forbidden_margin);
      read(*it, "x_max", ic.x_max);
      read(*it, "length_scale", ic.length_scale);
      read(*it, "amplitude_factor", ic.amplitude_factor);
    }
    if (const auto it = j.find("output"); it != j.end()) {
      if (const auto f = it->find("format"); f != it->end())
        c.format = parse_output_format(f->get<std::string>());
      read(*it, "path", c.output_path);
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

namespace {

json config_to_json(const RunConfig& c) {
  json systems = json::array();
  for (const auto& s : c.systems) systems.push_back({{"mu", s.mu}, {"m1", s.m1}});
  json solvers = json::array();
  if (c.solvers.wp) solvers.push_back("wp");
  if (c.solvers.exact) solvers.push_back("exact");
  if (c.solvers.nr) solvers.push_back("nr");
  const auto& ic = c.integration;
  return {
      {"potential", {{"kind", "harmonic"}, {"beta", c.beta}}},
      {"beta", c.beta},
      {"units", {{"hbar", c.units.hbar}, {"c", c.units.c}}},
      {"systems", systems},
      {"levels", c.levels},
      {"solvers", solvers},
      {"accuracy", c.accuracy},
      {"threads", c.threads},
      {"integration",
       {{"rel_tol", ic.rel_tol},
        {"abs_tol", ic.abs_tol},
        {"h_init", ic.h_init},
        {"h_max", ic.h_max},
        {"termination_ratio", ic.termination_ratio},
        {"forbidden_margin", ic.forbidden_margin},
        {"x_max", ic.x_max},
        {"length_scale", ic.length_scale},
        {"amplitude_factor", ic.amplitude_factor}}},
      {"output",
       {{"format", c.format == OutputFormat::csv ? "csv" : "json"}, {"path", c.output_path}}},
  };
}

}  // namespace

std::string run_config_json(const RunConfig& config) { return config_to_json(config).dump(2); }

void ComparisonRow::update_deltas() {
  wp_rel_delta.reset();
  nr_rel_delta.reset();
  if (eps_exact && *eps_exact != 0.0) {
    if (eps_wp) wp_rel_delta = *eps_wp / *eps_exact - 1.0;
    if (eps_nr) nr_rel_delta = *eps_nr / *eps_exact - 1.0;
  }
}

bool ComparisonReport::all_ok() const noexcept {
  return std::all_of(cells.begin(), cells.end(), [](const CellDiagnostic& c) { return c.ok; });
}

unsigned resolve_thread_count(int configured) {
  if (configured > 0) return static_cast<unsigned>(configured);
  if (const char* env = std::getenv("SEMIREL_THREADS")) {
    int value = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec == std::errc() && ptr == s.data() + s.size() && value > 0)
      return static_cast<unsigned>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ComparisonReport reproduce_table1(const RunConfig& config) {
  config.validate();
  const std::size_t n_levels = config.levels.size();
  ComparisonReport report;
  std::vector<TwoBodySystem> systems;
  for (const auto& label : config.systems) {
    systems.push_back(TwoBodySystem::from_reduced(label.mu, label.m1, config.units));
    for (int n : config.levels) {
      ComparisonRow row;
      row.n = n;
      row.mu = label.mu;
      row.m1 = label.m1;
      row.m2 = systems.back().m2();
      report.rows.push_back(row);
    }
  }

  // One task per (system, solver); every task writes disjoint rows.
  std::vector<std::vector<CellDiagnostic>> task_cells;
  std::vector<std::function<void(std::vector<CellDiagnostic>&)>> tasks;
  const Potential well = Potential::harmonic(config.beta);
  for (std::size_t s = 0; s < systems.size(); ++s) {
    const std::size_t first = s * n_levels;
    if (config.solvers.nr) {
      tasks.emplace_back([&, first, s](std::vector<CellDiagnostic>& cells) {
        for (std::size_t k = 0; k < n_levels; ++k) {
          report.rows[first + k].eps_nr = nr_harmonic_spectrum(
              config.systems[s].mu, config.beta, config.levels[k], config.units);
          cells.push_back({first + k, "nr", true, "analytic", 0.0, 0.0, 0});
        }
      });
    }
    if (config.solvers.exact) {
      tasks.emplace_back([&, first, s](std::vector<CellDiagnostic>& cells) {
        const TwoBodySystem& system = systems[s];
        try {
          ExactOptions options;
          options.accuracy = config.accuracy;
          const auto result = exact_salpeter_levels(system, config.beta, config.levels, options);
          for (std::size_t k = 0; k < n_levels; ++k) {
            const auto& level = result.levels[k];
            if (result.converged) report.rows[first + k].eps_exact = level.eps;
            cells.push_back({first + k, "exact", result.converged,
                             result.converged ? "converged" : result.message, level.residual,
                             level.bracket, level.evaluations});
          }
        } catch (const std::exception& e) {
          for (std::size_t k = 0; k < n_levels; ++k)
            cells.push_back({first + k, "exact", false, e.what(), 0.0, 0.0, 0});
        }
      });
    }
    if (config.solvers.wp) {
      tasks.emplace_back([&, first, s](std::vector<CellDiagnostic>& cells) {
        const TwoBodySystem& system = systems[s];
        const auto outcomes = solve_spectrum(EquationMode::wp, system, well, config.levels,
                                             config.integration, config.quantization);
        for (std::size_t k = 0; k < n_levels; ++k) {
          const auto& o = outcomes[k];
          if (o.ok()) {
            report.rows[first + k].eps_wp = o.level->eps;
            cells.push_back({first + k, "wp", true, "converged", o.level->residual,
                             o.level->bracket, o.level->evaluations});
          } else {
            cells.push_back({first + k, "wp", false, o.error, 0.0, 0.0, 0});
          }
        }
      });
    }
  }

  task_cells.resize(tasks.size());
  const unsigned workers =
      std::min<unsigned>(resolve_thread_count(config.threads), static_cast<unsigned>(tasks.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) tasks[i](task_cells[i]);
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  for (auto& row : report.rows) row.update_deltas();
  for (auto& cells : task_cells)
    report.cells.insert(report.cells.end(), cells.begin(), cells.end());
  std::stable_sort(report.cells.begin(), report.cells.end(),
                   [](const CellDiagnostic& a, const CellDiagnostic& b) { return a.row < b.row; });
  return report;
}

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  if (ec != std::errc()) throw std::runtime_error("format_number: conversion failed");
  return {buf, ptr};
}

namespace {

void put(std::string& out, const std::optional<double>& v) {
  out += ',';
  if (v) out += format_number(*v);
}

}  // namespace

std::string render_csv(std::span<const ComparisonRow> rows) {
  std::string out(csv_header);
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.n);
    out += ',' + format_number(r.mu);
    out += ',' + format_number(r.m1);
    out += ',' + format_number(r.m2);
    put(out, r.eps_exact);
    put(out, r.eps_wp);
    put(out, r.eps_nr);
    put(out, r.wp_rel_delta);
    put(out, r.nr_rel_delta);
    out += '\n';
  }
  return out;
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string render_json(const ComparisonReport& report, const RunConfig& config) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"n", r.n},
                    {"mu", r.mu},
                    {"m1", r.m1},
                    {"m2", r.m2},
                    {"eps_exact", optional_number(r.eps_exact)},
                    {"eps_wp", optional_number(r.eps_wp)},
                    {"eps_nr", optional_number(r.eps_nr)},
                    {"wp_rel_delta", optional_number(r.wp_rel_delta)},
                    {"nr_rel_delta", optional_number(r.nr_rel_delta)}});
  }
  json diagnostics = json::array();
  for (const auto& c : report.cells) {
    diagnostics.push_back({{"row", c.row},
                           {"solver", c.solver},
                           {"ok", c.ok},
                           {"message", c.message},
                           {"residual", c.residual},
                           {"bracket", c.bracket},
                           {"evaluations", c.evaluations}});
  }
  json doc = {{"rows", rows},
              {"metadata",
               {{"tool", "semirel"},
                {"version", SEMIREL_VERSION},
                {"config", config_to_json(config)},
                {"diagnostics", diagnostics}}}};
  return doc.dump(2) + "\n";
}

std::string render(const ComparisonReport& report, const RunConfig& config, OutputFormat format) {
  return format == OutputFormat::csv ? render_csv(report.rows) : render_json(report, config);
}

std::string render_console(std::span<const ComparisonRow> rows) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%4s  %-12s  %12s  %10s  %8s\n", "n", "mu, m1", "eps_R",
                "eps_WP", "eps_NR");
  out << line;
  auto cell = [](const std::optional<double>& v, const char* fmt) {
    char buf[32];
    if (!v) return std::string("-");
    std::snprintf(buf, sizeof buf, fmt, *v);
    return std::string(buf);
  };
  for (const auto& r : rows) {
    char label[32];
    std::snprintf(label, sizeof label, "%g, %g", r.mu, r.m1);
    std::snprintf(line, sizeof line, "%4d  %-12s  %12s  %10s  %8s\n", r.n, label,
                  cell(r.eps_exact, "%.6f").c_str(), cell(r.eps_wp, "%.4g").c_str(),
                  cell(r.eps_nr, "%.3g").c_str());
    out << line;
  }
  return out.str();
}

namespace {

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::invalid_argument("csv: bad number '" + std::string(s) + "'");
  return v;
}

std::optional<double> parse_optional(std::string_view s) {
  if (s.empty()) return std::nullopt;
  return parse_double(s);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::vector<ComparisonRow> parse_csv(std::string_view text) {
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines.front() != csv_header)
    throw std::invalid_argument("csv: missing or unexpected header");
  std::vector<ComparisonRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != 9)
      throw std::invalid_argument("csv: expected 9 fields on line " + std::to_string(i + 1));
    ComparisonRow r;
    int n = 0;
    const auto [ptr, ec] = std::from_chars(f[0].data(), f[0].data() + f[0].size(), n);
    if (ec != std::errc() || ptr != f[0].data() + f[0].size())
      throw std::invalid_argument("csv: bad level index '" + std::string(f[0]) + "'");
    r.n = n;
    r.mu = parse_double(f[1]);
    r.m1 = parse_double(f[2]);
    r.m2 = parse_double(f[3]);
    r.eps_exact = parse_optional(f[4]);
    r.eps_wp = parse_optional(f[5]);
    r.eps_nr = parse_optional(f[6]);
    r.wp_rel_delta = parse_optional(f[7]);
    r.nr_rel_delta = parse_optional(f[8]);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace semirel
