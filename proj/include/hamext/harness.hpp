#pragma once

// Long-time energy experiments on the perturbed oscillator: fixed-step
// trajectories, a fine reference run, block-maximum smoothing of
// |H_k - H_ex|, and the method ranking table.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hamext/integrators.hpp"

namespace hamext {

struct ExperimentConfig {
  std::size_t n = 4;
  double epsilon = 0.1;
  double alpha = 0.123;
  Vector q0{1.0, 2.0, 3.0, 4.0};
  Vector p0{4.0, 1.0, 2.0, 3.0};
  double t0 = 0.0;
  double h = 0.3;
  double t_end = 50000.0;
  std::vector<std::string> method_ids;
  std::string reference_method = "lie_gauss";
  double reference_h = 0.02;
  std::size_t block_size = 500;

  /// Ranking experiment: alpha = 0.123, eps = 0.1, h = 0.3 on [0, 50000],
  /// reference lie_gauss at h = 0.02, every ranked method.
  static ExperimentConfig ranking();
  /// Long-time run: alpha = 0.1, eps = 0.3, h = 0.3, lie_gauss against
  /// itself at h = 0.03.
  static ExperimentConfig long_time();

  /// Throws ConfigError on inconsistent values.
  void validate() const;

  /// Number of steps of size h covering [t0, t_end]. A non-integer ratio is
  /// rounded up, so the run ends at t0 + steps*h >= t_end.
  [[nodiscard]] std::size_t step_count() const;
  /// h / reference_h, which must be a positive integer.
  [[nodiscard]] std::size_t reference_ratio() const;

  [[nodiscard]] PerturbedOscillator oscillator() const;
  /// (q0, p0, t0) with u0 = -H(q0, p0, t0).
  [[nodiscard]] ExtendedPoint initial_point() const;
};

/// Sets one field from its textual form; used for config files and CLI
/// overrides alike. Vectors and lists are comma separated.
void set_config_value(ExperimentConfig &config, std::string_view key, std::string_view value);

/// Parses `key = value` lines; `#` starts a comment. Unknown keys throw.
[[nodiscard]] ExperimentConfig parse_config(std::istream &in,
                                            ExperimentConfig base = ExperimentConfig{});
[[nodiscard]] ExperimentConfig load_config(const std::string &path,
                                           ExperimentConfig base = ExperimentConfig{});
void write_config(std::ostream &out, const ExperimentConfig &config);

struct EnergySeries {
  std::vector<double> times;
  std::vector<double> h_values;
  /// Present when the method updates u.
  std::optional<std::vector<double>> u_values;
  std::optional<std::vector<double>> k_values;
  std::vector<double> h_reference;

  [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
  /// |H_k - H_ex|; requires the reference column.
  [[nodiscard]] std::vector<double> energy_errors() const;
};

struct SmoothedErrorSeries {
  std::vector<double> block_times;
  std::vector<double> block_max_errors;

  [[nodiscard]] double max_error() const;
};

/// Fixed-step run from the config's initial point; no reference column.
[[nodiscard]] EnergySeries run_trajectory(const ExperimentConfig &config,
                                          std::string_view method_id);

/// H of the reference method at reference_h, sampled at the coarse times.
[[nodiscard]] std::vector<double> run_reference(const ExperimentConfig &config);

/// Per-block maxima of |H_k - H_ex| over consecutive runs of block_size
/// samples; the last block may be shorter.
[[nodiscard]] SmoothedErrorSeries smooth_max_error(const EnergySeries &series,
                                                   std::size_t block_size);
[[nodiscard]] SmoothedErrorSeries smooth_block_max(std::span<const double> times,
                                                   std::span<const double> errors,
                                                   std::size_t block_size);

/// Peak-to-peak size of the fast energy oscillation of the reference over
/// the first two fast periods after t0 (quadratic trend removed).
[[nodiscard]] double phase_ceiling(std::span<const double> times,
                                   std::span<const double> h_reference);

enum class Tier { Top, Middle, Bottom };
[[nodiscard]] std::string_view to_string(Tier tier);
/// [0, 0.9c) top, [0.9c, 2c) middle, [2c, inf) bottom.
[[nodiscard]] Tier classify_tier(double max_error, double ceiling);

struct TableRow {
  MethodDescriptor descriptor;
  std::optional<double> max_error;
  std::optional<Tier> tier;
  SmoothedErrorSeries smoothed;
  std::string error;
};

struct TableResult {
  double phase_ceiling;
  std::vector<TableRow> rows;

  [[nodiscard]] const TableRow &row(std::string_view id) const;
};

/// Runs every configured method (all ranked methods when the list is empty)
/// against one reference. Method failures become row-level errors. Rows are
/// ordered top tier first, then by increasing error.
[[nodiscard]] TableResult table_one(const ExperimentConfig &config,
                                    std::ostream *progress = nullptr);

/// Shortest round-trip decimal form.
[[nodiscard]] std::string format_double(double v);

/// Header `t,H,u,K,H_ref`; missing columns are left empty.
void write_series_csv(std::ostream &out, const EnergySeries &series);
void write_smoothed_csv(std::ostream &out, const SmoothedErrorSeries &series);
void write_table_csv(std::ostream &out, const TableResult &table);
void write_table_text(std::ostream &out, const TableResult &table);

}  // namespace hamext
