// Command-line front end: energy runs, the ranking table, structural checks
// and convergence orders.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hamext/errors.hpp"
#include "hamext/harness.hpp"
#include "hamext/verify.hpp"

using namespace hamext;

namespace {

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out;
  bool strict = false;
};

void add_common(CLI::App *cmd, Common &c) {
  cmd->add_option("-c,--config", c.config_path, "Config file of key = value lines")
      ->check(CLI::ExistingFile);
  cmd->add_option("-s,--set", c.overrides, "Override a config key, e.g. --set h=0.1")
      ->take_all();
  cmd->add_option("-o,--out", c.out, "Write CSV output to this file");
  cmd->add_flag("--strict", c.strict, "Exit nonzero when a method fails or a check disagrees");
}

ExperimentConfig build_config(const Common &c, ExperimentConfig base) {
  ExperimentConfig config = c.config_path.empty() ? base : load_config(c.config_path, base);
  for (const auto &kv : c.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    set_config_value(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  config.validate();
  return config;
}

// Writes to the --out file, or stdout when none was given.
template <class Fn>
void emit(const std::string &path, Fn &&write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  write(f);
}

std::vector<Method> selected_methods(const std::vector<std::string> &ids) {
  std::vector<Method> out;
  if (ids.empty())
    for (MethodId id : all_method_ids()) out.push_back(make_method(id));
  else
    for (const auto &id : ids) out.push_back(make_method(id));
  return out;
}

int cmd_run(const Common &c, const std::string &method, bool reference, std::size_t smooth) {
  ExperimentConfig config = build_config(c, ExperimentConfig::ranking());
  EnergySeries s = run_trajectory(config, method);
  if (reference || smooth > 0) s.h_reference = run_reference(config);
  if (smooth > 0) {
    const SmoothedErrorSeries sm = smooth_max_error(s, smooth);
    emit(c.out, [&](std::ostream &o) { write_smoothed_csv(o, sm); });
    std::cerr << method << ": max smoothed energy error " << format_double(sm.max_error())
              << '\n';
  } else {
    emit(c.out, [&](std::ostream &o) { write_series_csv(o, s); });
  }
  return 0;
}

int cmd_table(const Common &c, bool quiet) {
  ExperimentConfig config = build_config(c, ExperimentConfig::ranking());
  const TableResult table = table_one(config, quiet ? nullptr : &std::cerr);
  write_table_text(std::cout, table);
  if (!c.out.empty()) emit(c.out, [&](std::ostream &o) { write_table_csv(o, table); });
  bool failed = false;
  for (const auto &r : table.rows) failed |= !r.error.empty();
  return c.strict && failed ? 1 : 0;
}

int cmd_verify(const Common &c, const std::vector<std::string> &ids, double h) {
  ExperimentConfig config = build_config(c, ExperimentConfig::ranking());
  const LinearHamiltonianProblem prob = config.oscillator().problem();
  const ExtendedPoint z = config.initial_point();
  const Matrix a = prob.coefficient(config.t0);

  int disagreements = 0;
  std::ostringstream csv;
  csv << "method,properties,symplectic_residual,w_residual,extended_residual,symmetry_defect,"
         "exactness_error\n";
  std::cout << std::left << std::setw(26) << "method" << std::setw(6) << "flags" << std::setw(12)
            << "Y_y" << std::setw(12) << "W" << std::setw(12) << "extended" << std::setw(12)
            << "symmetry" << "exactness\n";
  for (const Method &m : selected_methods(ids)) {
    const MethodDescriptor &d = m.descriptor();
    const CanonicityReport cr = check_canonicity(m, prob, z, h);
    const double sym = check_symmetry(m, prob, z, h);
    const double ex = check_exponential_exactness(m, a, z.y, config.t0, h);

    auto cell = [](std::optional<double> v) {
      std::ostringstream s;
      if (v) s << std::scientific << std::setprecision(2) << *v;
      else s << "-";
      return s.str();
    };
    std::cout << std::left << std::setw(26) << d.id << std::setw(6) << d.properties()
              << std::setw(12) << cell(cr.symplectic_residual_yy) << std::setw(12)
              << cell(cr.w_condition_residual) << std::setw(12) << cell(cr.extended_residual)
              << std::setw(12) << cell(sym) << cell(ex) << '\n';
    csv << d.id << ',' << d.properties() << ',' << format_double(cr.symplectic_residual_yy) << ','
        << (cr.w_condition_residual ? format_double(*cr.w_condition_residual) : "") << ','
        << (cr.extended_residual ? format_double(*cr.extended_residual) : "") << ','
        << format_double(sym) << ',' << format_double(ex) << '\n';

    if (d.canonical != (cr.symplectic_residual_yy <= 1e-6)) ++disagreements;
    if (d.symmetric != (sym <= 1e-10)) ++disagreements;
  }
  if (!c.out.empty()) emit(c.out, [&](std::ostream &o) { o << csv.str(); });
  if (disagreements > 0)
    std::cerr << disagreements << " flag/measurement disagreement(s)\n";
  return c.strict && disagreements > 0 ? 1 : 0;
}

int cmd_convergence(const Common &c, const std::vector<std::string> &ids, double h0,
                    double t_end) {
  ExperimentConfig base = ExperimentConfig::ranking();
  base.epsilon = 0.8;
  base.alpha = 2.0;
  ExperimentConfig config = build_config(c, base);
  const LinearHamiltonianProblem prob = config.oscillator().problem();
  const ExtendedPoint z = config.initial_point();

  int off = 0;
  std::ostringstream csv;
  csv << "method,expected_order,measured_order,error_h0,error_h0_2,error_h0_4\n";
  std::cout << std::left << std::setw(26) << "method" << std::setw(10) << "expected"
            << "measured\n";
  for (const Method &m : selected_methods(ids)) {
    try {
      const OrderEstimate e = estimate_order(m, prob, z, t_end, h0);
      std::cout << std::left << std::setw(26) << m.id() << std::setw(10) << m.descriptor().order
                << std::fixed << std::setprecision(3) << e.measured_order << std::defaultfloat
                << '\n';
      csv << m.id() << ',' << m.descriptor().order << ',' << format_double(e.measured_order);
      for (double err : e.errors) csv << ',' << format_double(err);
      csv << '\n';
      if (std::abs(e.measured_order - m.descriptor().order) > 0.2) ++off;
    } catch (const Error &e) {
      std::cout << std::left << std::setw(26) << m.id() << "error: " << e.what() << '\n';
      ++off;
    }
  }
  if (!c.out.empty()) emit(c.out, [&](std::ostream &o) { o << csv.str(); });
  return c.strict && off > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Integrators in extended phase space for y' = A(t) y"};
  app.require_subcommand(1);

  Common run_opts, table_opts, verify_opts, conv_opts;
  std::string run_method = "lie_gauss";
  bool run_reference_col = false;
  std::size_t run_smooth = 0;
  auto *run = app.add_subcommand("run", "Integrate one method and write the energy series");
  add_common(run, run_opts);
  run->add_option("-m,--method", run_method, "Method id")->capture_default_str();
  run->add_flag("--reference", run_reference_col, "Add the H_ref column");
  run->add_option("--smooth", run_smooth, "Write block maxima of |H - H_ref| over N samples");

  bool table_quiet = false;
  auto *table = app.add_subcommand("table", "Rank methods by maximum smoothed energy error");
  add_common(table, table_opts);
  table->add_flag("-q,--quiet", table_quiet, "No progress messages");

  std::vector<std::string> verify_methods;
  double verify_h = 0.3;
  auto *verify = app.add_subcommand("verify", "Canonicity, symmetry and exactness checks");
  add_common(verify, verify_opts);
  verify->add_option("-m,--methods", verify_methods, "Method ids (default: all)");
  verify->add_option("--step", verify_h, "Step size")->capture_default_str();

  std::vector<std::string> conv_methods;
  double conv_h0 = 0.025, conv_t_end = 10.0;
  auto *conv = app.add_subcommand("convergence", "Measured convergence orders");
  add_common(conv, conv_opts);
  conv->add_option("-m,--methods", conv_methods, "Method ids (default: all)");
  conv->add_option("--h0", conv_h0, "Coarsest step size")->capture_default_str();
  conv->add_option("--t-end", conv_t_end, "End of the interval")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_opts, run_method, run_reference_col, run_smooth);
    if (*table) return cmd_table(table_opts, table_quiet);
    if (*verify) return cmd_verify(verify_opts, verify_methods, verify_h);
    if (*conv) return cmd_convergence(conv_opts, conv_methods, conv_h0, conv_t_end);
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
