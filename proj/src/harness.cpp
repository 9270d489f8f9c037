#include "hamext/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "hamext/errors.hpp"

namespace hamext {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    const std::string_view item = trim(s.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
    throw ConfigError("config key '" + std::string(key) + "': cannot parse '" +
                      std::string(text) + "' as a number");
  return v;
}

std::size_t parse_count(std::string_view key, std::string_view text) {
  text = trim(text);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ConfigError("config key '" + std::string(key) + "': cannot parse '" +
                      std::string(text) + "' as a non-negative integer");
  return v;
}

Vector parse_vector(std::string_view key, std::string_view text) {
  Vector v;
  for (std::string_view item : split_list(text)) v.push_back(parse_double(key, item));
  return v;
}

std::string join(const std::vector<std::string> &items) {
  std::string s;
  for (std::size_t i = 0; i < items.size(); ++i) s += (i ? "," : "") + items[i];
  return s;
}

std::string join(const Vector &items) {
  std::string s;
  for (std::size_t i = 0; i < items.size(); ++i) s += (i ? "," : "") + format_double(items[i]);
  return s;
}

}  // namespace

ExperimentConfig ExperimentConfig::ranking() {
  ExperimentConfig c;
  for (MethodId id : table_method_ids()) c.method_ids.emplace_back(to_string(id));
  return c;
}

ExperimentConfig ExperimentConfig::long_time() {
  ExperimentConfig c;
  c.alpha = 0.1;
  c.epsilon = 0.3;
  c.t_end = 3000.0;
  c.method_ids = {"lie_gauss"};
  c.reference_h = 0.03;
  return c;
}

void ExperimentConfig::validate() const {
  if (n == 0) throw ConfigError("n must be positive");
  if (q0.size() != n || p0.size() != n)
    throw ConfigError("q0 and p0 must have n = " + std::to_string(n) + " components");
  if (!(h > 0.0)) throw ConfigError("h must be positive");
  if (!(reference_h > 0.0)) throw ConfigError("reference_h must be positive");
  if (!(t_end > t0)) throw ConfigError("t_end must exceed t0");
  if (block_size == 0) throw ConfigError("block_size must be positive");
  (void)reference_ratio();
  auto check_id = [](const std::string &id) {
    try {
      (void)method_id_from_string(id);
    } catch (const InvalidArgument &e) {
      throw ConfigError(e.what());
    }
  };
  check_id(reference_method);
  for (const auto &id : method_ids) check_id(id);
}

std::size_t ExperimentConfig::step_count() const {
  const double ratio = (t_end - t0) / h;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, ratio))
    return static_cast<std::size_t>(rounded);
  return static_cast<std::size_t>(std::ceil(ratio));
}

std::size_t ExperimentConfig::reference_ratio() const {
  const double ratio = h / reference_h;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio)
    throw ConfigError("h / reference_h must be a positive integer");
  return static_cast<std::size_t>(rounded);
}

PerturbedOscillator ExperimentConfig::oscillator() const {
  return PerturbedOscillator{n, epsilon, alpha};
}

ExtendedPoint ExperimentConfig::initial_point() const {
  return hamext::initial_point(oscillator().problem(), PhasePoint(q0, p0), t0);
}

void set_config_value(ExperimentConfig &c, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "n") c.n = parse_count(key, value);
  else if (key == "epsilon") c.epsilon = parse_double(key, value);
  else if (key == "alpha") c.alpha = parse_double(key, value);
  else if (key == "q0") c.q0 = parse_vector(key, value);
  else if (key == "p0") c.p0 = parse_vector(key, value);
  else if (key == "t0") c.t0 = parse_double(key, value);
  else if (key == "h") c.h = parse_double(key, value);
  else if (key == "t_end") c.t_end = parse_double(key, value);
  else if (key == "reference_h") c.reference_h = parse_double(key, value);
  else if (key == "block_size") c.block_size = parse_count(key, value);
  else if (key == "reference_method") c.reference_method = std::string(value);
  else if (key == "methods") {
    c.method_ids.clear();
    for (std::string_view id : split_list(value)) c.method_ids.emplace_back(id);
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

ExperimentConfig parse_config(std::istream &in, ExperimentConfig base) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos)
      view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    try {
      set_config_value(base, view.substr(0, eq), view.substr(eq + 1));
    } catch (const ConfigError &e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

ExperimentConfig load_config(const std::string &path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, std::move(base));
}

void write_config(std::ostream &out, const ExperimentConfig &c) {
  out << "n = " << c.n << '\n'
      << "epsilon = " << format_double(c.epsilon) << '\n'
      << "alpha = " << format_double(c.alpha) << '\n'
      << "q0 = " << join(c.q0) << '\n'
      << "p0 = " << join(c.p0) << '\n'
      << "t0 = " << format_double(c.t0) << '\n'
      << "h = " << format_double(c.h) << '\n'
      << "t_end = " << format_double(c.t_end) << '\n'
      << "methods = " << join(c.method_ids) << '\n'
      << "reference_method = " << c.reference_method << '\n'
      << "reference_h = " << format_double(c.reference_h) << '\n'
      << "block_size = " << c.block_size << '\n';
}

std::vector<double> EnergySeries::energy_errors() const {
  if (h_reference.size() != h_values.size())
    throw DimensionError("energy_errors: reference column missing or misaligned");
  std::vector<double> err(h_values.size());
  for (std::size_t k = 0; k < err.size(); ++k) err[k] = std::abs(h_values[k] - h_reference[k]);
  return err;
}

double SmoothedErrorSeries::max_error() const {
  if (block_max_errors.empty()) throw EmptyInput("max_error: no blocks");
  return *std::max_element(block_max_errors.begin(), block_max_errors.end());
}

EnergySeries run_trajectory(const ExperimentConfig &config, std::string_view method_id) {
  config.validate();
  const Method method = make_method(method_id);
  const LinearHamiltonianProblem prob = config.oscillator().problem();
  const std::size_t steps = config.step_count();
  const bool with_u = method.descriptor().updates_u;
  const StepOptions opts{.update_u = with_u};

  EnergySeries s;
  s.times.reserve(steps + 1);
  s.h_values.reserve(steps + 1);
  if (with_u) {
    s.u_values.emplace().reserve(steps + 1);
    s.k_values.emplace().reserve(steps + 1);
  }
  ExtendedPoint z = config.initial_point();
  auto record = [&] {
    const double h = hamiltonian(prob, z.y, z.t);
    s.times.push_back(z.t);
    s.h_values.push_back(h);
    if (with_u) {
      s.u_values->push_back(z.u);
      s.k_values->push_back(h + z.u);
    }
  };
  record();
  for (std::size_t k = 0; k < steps; ++k) {
    try {
      z = method.step(prob, z, config.h, opts).z_next;
    } catch (const Error &e) {
      throw Error(std::string(method.id()) + ": step " + std::to_string(k) + " at t = " +
                  format_double(z.t) + " failed: " + e.what());
    }
    record();
  }
  return s;
}

std::vector<double> run_reference(const ExperimentConfig &config) {
  config.validate();
  const Method method = make_method(config.reference_method);
  const LinearHamiltonianProblem prob = config.oscillator().problem();
  const std::size_t steps = config.step_count();
  const std::size_t ratio = config.reference_ratio();
  const StepOptions opts{.update_u = false};

  std::vector<double> h_ref;
  h_ref.reserve(steps + 1);
  ExtendedPoint z = config.initial_point();
  h_ref.push_back(hamiltonian(prob, z.y, z.t));
  for (std::size_t k = 0; k < steps; ++k) {
    for (std::size_t j = 0; j < ratio; ++j) {
      try {
        z = method.step(prob, z, config.reference_h, opts).z_next;
      } catch (const Error &e) {
        throw Error("reference " + method.id() + ": failed at t = " + format_double(z.t) +
                    ": " + e.what());
      }
    }
    h_ref.push_back(hamiltonian(prob, z.y, z.t));
  }
  return h_ref;
}

SmoothedErrorSeries smooth_block_max(std::span<const double> times,
                                     std::span<const double> errors, std::size_t block_size) {
  if (errors.empty()) throw EmptyInput("smooth_max_error: empty series");
  if (times.size() != errors.size())
    throw DimensionError("smooth_max_error: times and errors differ in length");
  if (block_size == 0) throw InvalidArgument("smooth_max_error: block_size must be positive");
  SmoothedErrorSeries out;
  for (std::size_t start = 0; start < errors.size(); start += block_size) {
    const std::size_t stop = std::min(errors.size(), start + block_size);
    double m = 0.0;
    for (std::size_t k = start; k < stop; ++k) m = std::max(m, std::abs(errors[k]));
    out.block_times.push_back(times[start]);
    out.block_max_errors.push_back(m);
  }
  return out;
}

SmoothedErrorSeries smooth_max_error(const EnergySeries &series, std::size_t block_size) {
  if (series.size() == 0) throw EmptyInput("smooth_max_error: empty series");
  const std::vector<double> err = series.energy_errors();
  return smooth_block_max(series.times, err, block_size);
}

double phase_ceiling(std::span<const double> times, std::span<const double> h_reference) {
  if (times.size() != h_reference.size())
    throw DimensionError("phase_ceiling: length mismatch");
  if (times.empty()) throw EmptyInput("phase_ceiling: empty series");
  // The energy of a unit-frequency oscillator exchanges between q and p
  // with period pi; two such periods are fitted.
  const double t_start = times.front();
  const double window = 2.0 * std::numbers::pi;
  std::vector<double> ts, hs;
  for (std::size_t k = 0; k < times.size() && times[k] <= t_start + window; ++k) {
    ts.push_back(times[k] - t_start);
    hs.push_back(h_reference[k]);
  }
  if (ts.size() < 4) throw EmptyInput("phase_ceiling: fewer than four samples in the window");

  // Least-squares quadratic trend via normal equations.
  Matrix normal(3);
  Vector rhs(3, 0.0);
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double basis[3] = {1.0, ts[k], ts[k] * ts[k]};
    for (int i = 0; i < 3; ++i) {
      rhs[i] += basis[i] * hs[k];
      for (int j = 0; j < 3; ++j) normal(i, j) += basis[i] * basis[j];
    }
  }
  const Vector coef = LuDecomposition(normal).solve(rhs);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double r = hs[k] - (coef[0] + coef[1] * ts[k] + coef[2] * ts[k] * ts[k]);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return hi - lo;
}

std::string_view to_string(Tier tier) {
  switch (tier) {
    case Tier::Top: return "top";
    case Tier::Middle: return "middle";
    case Tier::Bottom: return "bottom";
  }
  return "?";
}

Tier classify_tier(double max_error, double ceiling) {
  if (max_error < 0.9 * ceiling) return Tier::Top;
  if (max_error < 2.0 * ceiling) return Tier::Middle;
  return Tier::Bottom;
}

const TableRow &TableResult::row(std::string_view id) const {
  for (const auto &r : rows)
    if (r.descriptor.id == id) return r;
  throw InvalidArgument("TableResult: no row for '" + std::string(id) + "'");
}

TableResult table_one(const ExperimentConfig &config_in, std::ostream *progress) {
  ExperimentConfig config = config_in;
  if (config.method_ids.empty())
    for (MethodId id : table_method_ids()) config.method_ids.emplace_back(to_string(id));
  config.validate();

  if (progress) *progress << "reference " << config.reference_method << " h=" << config.reference_h << std::endl;
  const std::vector<double> h_ref = run_reference(config);

  TableResult table{};
  bool have_times = false;
  for (const auto &id : config.method_ids) {
    TableRow row{make_method(id).descriptor(), std::nullopt, std::nullopt, {}, {}};
    if (progress) *progress << "method " << id << std::endl;
    try {
      EnergySeries s = run_trajectory(config, id);
      s.h_reference = h_ref;
      if (!have_times) {
        table.phase_ceiling = phase_ceiling(s.times, h_ref);
        have_times = true;
      }
      row.smoothed = smooth_max_error(s, config.block_size);
      row.max_error = row.smoothed.max_error();
    } catch (const Error &e) {
      row.error = e.what();
    }
    table.rows.push_back(std::move(row));
  }
  if (!have_times) throw Error("table_one: every method failed");
  for (auto &row : table.rows)
    if (row.max_error) row.tier = classify_tier(*row.max_error, table.phase_ceiling);

  std::stable_sort(table.rows.begin(), table.rows.end(), [](const TableRow &a, const TableRow &b) {
    if (a.max_error.has_value() != b.max_error.has_value()) return a.max_error.has_value();
    if (!a.max_error) return false;
    if (*a.tier != *b.tier) return *a.tier < *b.tier;
    return *a.max_error < *b.max_error;
  });
  return table;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc{} ? ptr : buf);
}

void write_series_csv(std::ostream &out, const EnergySeries &s) {
  const bool with_ref = s.h_reference.size() == s.size();
  out << "t,H,u,K,H_ref\n";
  for (std::size_t k = 0; k < s.size(); ++k) {
    out << format_double(s.times[k]) << ',' << format_double(s.h_values[k]) << ',';
    if (s.u_values) out << format_double((*s.u_values)[k]);
    out << ',';
    if (s.k_values) out << format_double((*s.k_values)[k]);
    out << ',';
    if (with_ref) out << format_double(s.h_reference[k]);
    out << '\n';
  }
}

void write_smoothed_csv(std::ostream &out, const SmoothedErrorSeries &s) {
  out << "t,max_energy_error\n";
  for (std::size_t k = 0; k < s.block_times.size(); ++k)
    out << format_double(s.block_times[k]) << ',' << format_double(s.block_max_errors[k])
        << '\n';
}

void write_table_csv(std::ostream &out, const TableResult &table) {
  out << "method,order,properties,max_energy_error,tier,error\n";
  for (const auto &r : table.rows) {
    out << r.descriptor.id << ',' << r.descriptor.order << ',' << r.descriptor.properties()
        << ',';
    if (r.max_error) out << format_double(*r.max_error);
    out << ',';
    if (r.tier) out << to_string(*r.tier);
    out << ',';
    if (!r.error.empty()) {
      std::string quoted = r.error;
      std::replace(quoted.begin(), quoted.end(), '"', '\'');
      out << '"' << quoted << '"';
    }
    out << '\n';
  }
}

void write_table_text(std::ostream &out, const TableResult &table) {
  std::ostringstream body;
  body << std::left << std::setw(26) << "method" << std::setw(7) << "order" << std::setw(12)
       << "properties" << std::setw(18) << "max energy error" << "tier\n";
  std::optional<Tier> last;
  for (const auto &r : table.rows) {
    if (r.tier && last && *r.tier != *last) body << std::string(70, '-') << '\n';
    if (r.tier) last = r.tier;
    body << std::left << std::setw(26) << r.descriptor.id << std::setw(7) << r.descriptor.order
         << std::setw(12) << (r.descriptor.properties().empty() ? "-" : r.descriptor.properties());
    if (r.max_error) {
      std::ostringstream v;
      v << std::scientific << std::setprecision(2) << *r.max_error;
      body << std::setw(18) << v.str() << to_string(*r.tier) << '\n';
    } else {
      body << "failed: " << r.error << '\n';
    }
  }
  out << body.str();
  out << "phase ceiling: " << std::scientific << std::setprecision(3) << table.phase_ceiling
      << std::defaultfloat << '\n';
}

}  // namespace hamext
