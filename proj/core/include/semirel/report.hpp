#pragma once

// Table-style comparison of the WP, exact and analytic NR spectra for the
// harmonic well V = beta x^2 / 2, with CSV and JSON emitters.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semirel/exact.hpp"
#include "semirel/milne.hpp"
#include "semirel/spectrum.hpp"
#include "semirel/two_body.hpp"

namespace semirel {

/// A system as labelled in the comparison table: reduced mass and first mass.
struct SystemLabel {
  double mu = 0.0;
  double m1 = 0.0;
};

enum class OutputFormat { csv, json };

OutputFormat parse_output_format(std::string_view name);

struct SolverSelection {
  bool wp = true;
  bool exact = true;
  bool nr = true;

  bool any() const noexcept { return wp || exact || nr; }
};

struct RunConfig {
  double beta = 1.0;
  UnitSystem units;
  std::vector<SystemLabel> systems;
  std::vector<int> levels;
  SolverSelection solvers;
  double accuracy = 1e-6;  ///< refinement target of the momentum-space solver
  IntegrationConfig integration;
  QuantizationOptions quantization;
  OutputFormat format = OutputFormat::csv;
  std::string output_path;  ///< empty: standard output
  int threads = 0;          ///< 0: SEMIREL_THREADS, then hardware concurrency

  /// beta = 1, hbar = c = 1, systems (5,10) (5,100) (1,2) (1,10), levels 0 10 20.
  static RunConfig table1();

  void validate() const;
};

/// Applies the fields present in a JSON RunConfig document on top of `base`.
RunConfig parse_run_config(std::string_view json_text, RunConfig base = RunConfig::table1());

std::string run_config_json(const RunConfig& config);

struct ComparisonRow {
  int n = 0;
  double mu = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  std::optional<double> eps_exact;
  std::optional<double> eps_wp;
  std::optional<double> eps_nr;
  std::optional<double> wp_rel_delta;  ///< eps_wp / eps_exact - 1
  std::optional<double> nr_rel_delta;  ///< eps_nr / eps_exact - 1

  /// Fills the two relative deltas from the energies that are present.
  void update_deltas();

  friend bool operator==(const ComparisonRow&, const ComparisonRow&) = default;
};

/// Outcome of one solver for one row.
struct CellDiagnostic {
  std::size_t row = 0;
  std::string solver;
  bool ok = false;
  std::string message;
  double residual = 0.0;
  double bracket = 0.0;
  int evaluations = 0;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  std::vector<CellDiagnostic> cells;

  bool all_ok() const noexcept;
};

/// One row per (system, n), system-major. Solver failures are recorded per cell.
ComparisonReport reproduce_table1(const RunConfig& config);

/// Thread count: explicit value if > 0, else SEMIREL_THREADS if set and > 0,
/// else the hardware concurrency.
unsigned resolve_thread_count(int configured);

inline constexpr std::string_view csv_header =
    "n,mu,m1,m2,eps_exact,eps_wp,eps_nr,wp_rel_delta,nr_rel_delta";

/// 17 significant digits, locale independent ("." decimal separator).
std::string format_number(double value);

std::string render_csv(std::span<const ComparisonRow> rows);
std::string render_json(const ComparisonReport& report, const RunConfig& config);
std::string render(const ComparisonReport& report, const RunConfig& config, OutputFormat format);

/// Fixed-width human-readable table.
std::string render_console(std::span<const ComparisonRow> rows);

/// Inverse of render_csv. Throws std::invalid_argument on malformed input.
std::vector<ComparisonRow> parse_csv(std::string_view text);

}  // namespace semirel
