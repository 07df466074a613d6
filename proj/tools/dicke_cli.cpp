// dicke_cli.cpp: command-line front end. Parses flat key = value configs
// with command-line overrides, dispatches to the shared library through the
// C API, and emits CSV tables (header row, 17-significant-digit floats,
// comma separator, '#'-prefixed metadata).
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "dicke.h"

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Every key of a run, with defaults. g and task have no default: g must be
// set explicitly, task comes from the subcommand.
struct RunConfig {
  std::string task;
  double omega0 = 0.1;
  double omega = 1.0;
  double kappa = 1.0;
  double g = 0.0;
  bool g_set = false;
  int n_atoms = 16;
  std::string mode = "full";
  std::string out = "-";
  int workers = 1;
  double t_final = 100.0;
  int n_samples = 201;
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double tilt = 1e-3;
  std::string sweep_axis = "g_sqrt_n";
  double sweep_start = 0.05;
  double sweep_stop = 0.6;
  double sweep_step = 0.0125;
  int oracle_n_max = 0;
  int oracle_n_max_cap = 256;
  double oracle_tol = 1e-8;
  int use_exact_rates = 1;
  std::string dump_generator;

  void set(const std::string& key, const std::string& value);
  std::vector<std::pair<std::string, std::string>> echo() const;
};

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    if (!std::isfinite(v)) throw std::invalid_argument("not finite");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid value '" + value + "' for key '" + key + "'");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid integer '" + value + "' for key '" + key + "'");
  }
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "task") task = value;
  else if (key == "omega0") omega0 = parse_double(key, value);
  else if (key == "omega") omega = parse_double(key, value);
  else if (key == "kappa") kappa = parse_double(key, value);
  else if (key == "g") { g = parse_double(key, value); g_set = true; }
  else if (key == "n_atoms") n_atoms = parse_int(key, value);
  else if (key == "mode") mode = value;
  else if (key == "out") out = value;
  else if (key == "workers") workers = parse_int(key, value);
  else if (key == "t_final") t_final = parse_double(key, value);
  else if (key == "n_samples") n_samples = parse_int(key, value);
  else if (key == "rel_tol") rel_tol = parse_double(key, value);
  else if (key == "abs_tol") abs_tol = parse_double(key, value);
  else if (key == "tilt") tilt = parse_double(key, value);
  else if (key == "sweep_axis") sweep_axis = value;
  else if (key == "sweep_start") sweep_start = parse_double(key, value);
  else if (key == "sweep_stop") sweep_stop = parse_double(key, value);
  else if (key == "sweep_step") sweep_step = parse_double(key, value);
  else if (key == "oracle_n_max") oracle_n_max = parse_int(key, value);
  else if (key == "oracle_n_max_cap") oracle_n_max_cap = parse_int(key, value);
  else if (key == "oracle_tol") oracle_tol = parse_double(key, value);
  else if (key == "use_exact_rates") use_exact_rates = parse_int(key, value);
  else if (key == "dump_generator") dump_generator = value;
  else throw ConfigError("unknown key '" + key + "'");
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  return {
      {"task", task},
      {"omega0", format_double(omega0)},
      {"omega", format_double(omega)},
      {"kappa", format_double(kappa)},
      {"g", format_double(g)},
      {"n_atoms", std::to_string(n_atoms)},
      {"mode", mode},
      {"out", out},
      {"workers", std::to_string(workers)},
      {"t_final", format_double(t_final)},
      {"n_samples", std::to_string(n_samples)},
      {"rel_tol", format_double(rel_tol)},
      {"abs_tol", format_double(abs_tol)},
      {"tilt", format_double(tilt)},
      {"sweep_axis", sweep_axis},
      {"sweep_start", format_double(sweep_start)},
      {"sweep_stop", format_double(sweep_stop)},
      {"sweep_step", format_double(sweep_step)},
      {"oracle_n_max", std::to_string(oracle_n_max)},
      {"oracle_n_max_cap", std::to_string(oracle_n_max_cap)},
      {"oracle_tol", format_double(oracle_tol)},
      {"use_exact_rates", std::to_string(use_exact_rates)},
      {"dump_generator", dump_generator},
  };
}

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected 'key = value'");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    config.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

dk_mode mode_from_name(const std::string& name) {
  if (name == "full") return DK_MODE_FULL;
  if (name == "secular") return DK_MODE_SECULAR;
  if (name == "large-detuning") return DK_MODE_LARGE_DETUNING;
  if (name == "secular-large-detuning") return DK_MODE_SECULAR_LARGE_DETUNING;
  throw ConfigError("unknown mode '" + name +
                    "' (full, secular, large-detuning, secular-large-detuning)");
}

dk_params params_of(const RunConfig& config) {
  dk_params p;
  p.omega0 = config.omega0;
  p.omega = config.omega;
  p.kappa = config.kappa;
  p.g = config.g;
  p.n_atoms = config.n_atoms;
  return p;
}

void check_status(dk_status status, const std::string& what) {
  if (status == DK_OK) return;
  const std::string msg = what + ": " + dk_status_name(status) + " (" +
                          dk_error_message() + ")";
  if (status == DK_ERR_INVALID_ARGUMENT || status == DK_ERR_UNSUPPORTED)
    throw ConfigError(msg);
  throw NumericalError(msg);
}

// ---- table assembly -------------------------------------------------

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  // Failed sweep rows: marker comments emitted in place of the row.
  std::map<size_t, std::string> failed_rows;
};

std::string timestamp_utc() {
  char buf[32];
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc;
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

void write_table(const RunConfig& config, const ResultTable& table) {
  std::ostringstream body;
  body << "## dicke " << dk_version() << "\n";
  body << "## timestamp " << timestamp_utc() << "\n";
  for (const auto& [key, value] : config.echo())
    body << "# " << key << " = " << value << "\n";
  for (size_t c = 0; c < table.columns.size(); ++c)
    body << table.columns[c] << (c + 1 < table.columns.size() ? "," : "");
  body << "\n";
  size_t row_index = 0;
  for (const auto& row : table.rows) {
    if (auto it = table.failed_rows.find(row_index); it != table.failed_rows.end())
      body << "# row " << row_index << " failed: " << it->second << "\n";
    else {
      for (size_t c = 0; c < row.size(); ++c) {
        if (!std::isfinite(row[c]))
          throw NumericalError("non-finite value in column '" +
                               table.columns[c] + "'");
        body << format_double(row[c]) << (c + 1 < row.size() ? "," : "");
      }
      body << "\n";
    }
    ++row_index;
  }

  if (config.out == "-") {
    std::cout << body.str();
    return;
  }
  std::ofstream out(config.out, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file '" + config.out + "'");
  out << body.str();
  if (!out.good()) throw NumericalError("write failed: " + config.out);
}

// ---- tasks ----------------------------------------------------------

ResultTable run_evolve(const RunConfig& config) {
  const dk_params p = params_of(config);
  dk_evolve_opts opts;
  dk_evolve_opts_init(&opts);
  opts.t_final = config.t_final;
  opts.n_samples = config.n_samples;
  opts.rel_tol = config.rel_tol;
  opts.abs_tol = config.abs_tol;
  opts.tilt = config.tilt;

  dk_evolution* evo = nullptr;
  check_status(dk_evolve(&p, mode_from_name(config.mode), &opts, &evo), "evolve");
  const size_t len = dk_evolution_length(evo);

  ResultTable table;
  table.columns = {"t", "sx", "sy", "sz", "sz2", "purity", "min_eig", "trace_err"};
  const dk_series series[] = {DK_SERIES_TIME, DK_SERIES_SX, DK_SERIES_SY,
                              DK_SERIES_SZ, DK_SERIES_SZ2, DK_SERIES_PURITY,
                              DK_SERIES_MIN_EIG, DK_SERIES_TRACE_ERR};
  std::vector<std::vector<double>> data(8, std::vector<double>(len));
  for (int c = 0; c < 8; ++c)
    check_status(dk_evolution_series(evo, series[c], data[c].data(), len),
                 "evolution series");
  const bool flagged = dk_evolution_trace_flagged(evo) != 0;
  dk_evolution_free(evo);
  if (flagged)
    std::cerr << "warning: trace error exceeded 1e-7 along the trajectory\n";

  table.rows.resize(len, std::vector<double>(8));
  for (size_t r = 0; r < len; ++r)
    for (int c = 0; c < 8; ++c) table.rows[r][c] = data[c][r];
  return table;
}

std::vector<double> steady_row(const RunConfig& config, const dk_params& p,
                               dk_mode mode) {
  dk_steady_result res;
  check_status(dk_steady_state(&p, mode, &res), "steady state");
  if (res.degenerate)
    std::cerr << "warning: degenerate null space (g = 0); returned the "
                 "maximally mixed representative\n";
  if (!config.dump_generator.empty())
    check_status(dk_generator_dump(&p, mode, config.dump_generator.c_str()),
                 "generator dump");
  const double spin = 0.5 * p.n_atoms;
  return {res.sx,     res.sy,      res.sz,       res.sz / spin, res.sz2,
          res.purity, res.min_eig, res.residual, double(res.degenerate)};
}

ResultTable run_steady(const RunConfig& config) {
  ResultTable table;
  table.columns = {"sx",     "sy",      "sz",       "sz_scaled", "sz2",
                   "purity", "min_eig", "residual", "degenerate"};
  table.rows.push_back(
      steady_row(config, params_of(config), mode_from_name(config.mode)));
  return table;
}

std::vector<double> sweep_grid(const RunConfig& config) {
  if (!(config.sweep_step > 0.0)) throw ConfigError("sweep_step must be > 0");
  if (config.sweep_stop < config.sweep_start)
    throw ConfigError("empty sweep range (sweep_stop < sweep_start)");
  std::vector<double> grid;
  const long count =
      std::lround(std::floor((config.sweep_stop - config.sweep_start) /
                                 config.sweep_step +
                             1e-9)) +
      1;
  for (long k = 0; k < count; ++k)
    grid.push_back(config.sweep_start + double(k) * config.sweep_step);
  return grid;
}

dk_params params_at(const RunConfig& config, double axis_value) {
  dk_params p = params_of(config);
  if (config.sweep_axis == "g_sqrt_n")
    p.g = axis_value / std::sqrt(double(p.n_atoms));
  else if (config.sweep_axis == "omega0")
    p.omega0 = axis_value;
  else if (config.sweep_axis == "kappa")
    p.kappa = axis_value;
  else if (config.sweep_axis == "n_atoms") {
    const long n = std::lround(axis_value);
    if (std::abs(axis_value - double(n)) > 1e-9 || n < 1)
      throw ConfigError("n_atoms sweep requires positive integer grid points");
    p.n_atoms = int(n);
    // Hold g sqrt(N) fixed at the configured value (thermodynamic-limit
    // convention), so the N sweep probes finite-size convergence.
    p.g = config.g * std::sqrt(double(config.n_atoms) / double(n));
  } else
    throw ConfigError("unknown sweep_axis '" + config.sweep_axis +
                      "' (g_sqrt_n, omega0, kappa, n_atoms)");
  return p;
}

// Order-preserving parallel map over grid points.
template <class Fn>
ResultTable parallel_rows(const RunConfig& config, const std::vector<double>& grid,
                          Fn&& point_row) {
  ResultTable table;
  table.rows.resize(grid.size());
  std::vector<std::string> errors(grid.size());
  std::atomic<size_t> cursor{0};
  const int workers =
      std::max(1, std::min<int>(config.workers, int(grid.size())));
  auto work = [&] {
    for (;;) {
      const size_t k = cursor.fetch_add(1);
      if (k >= grid.size()) break;
      try {
        table.rows[k] = point_row(grid[k]);
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (size_t k = 0; k < grid.size(); ++k)
    if (!errors[k].empty()) table.failed_rows[k] = errors[k];
  return table;
}

ResultTable run_sweep(const RunConfig& config, bool& any_failed) {
  const std::vector<double> grid = sweep_grid(config);
  const dk_mode mode = mode_from_name(config.mode);

  ResultTable table = parallel_rows(config, grid, [&](double v) {
    const dk_params p = params_at(config, v);
    dk_steady_result res;
    check_status(dk_steady_state(&p, mode, &res), "steady state");
    double sz_sc = 0.0;
    check_status(dk_semiclassical_steady_sz(&p, &sz_sc), "semiclassical sz");
    const double spin = 0.5 * p.n_atoms;
    return std::vector<double>{v,
                               p.g,
                               double(p.n_atoms),
                               res.sz / spin,
                               sz_sc,
                               res.sx,
                               res.purity,
                               res.min_eig,
                               res.residual};
  });
  table.columns = {"axis_value",
                   "g",
                   "n_atoms",
                   "sz_scaled",
                   "sz_scaled_semiclassical",
                   "sx",
                   "purity",
                   "min_eig",
                   "residual"};
  any_failed = !table.failed_rows.empty();
  return table;
}

ResultTable run_stability(const RunConfig& config) {
  const dk_params p = params_of(config);
  dk_fixed_point points[4];
  size_t count = 0;
  check_status(dk_fixed_points(&p, config.use_exact_rates, points, 4, &count),
               "fixed points");

  ResultTable table;
  table.columns = {"kind",    "stability", "sx",      "sy",      "sz",
                   "cf1_re",  "cf1_im",    "cf2_re",  "cf2_im",  "jac1_re",
                   "jac1_im", "jac2_re",   "jac2_im", "jac3_re", "jac3_im",
                   "max_rel_dev"};
  for (size_t k = 0; k < count && k < 4; ++k) {
    dk_stability_report rep;
    check_status(dk_stability(&p, &points[k], config.use_exact_rates, &rep),
                 "stability");
    table.rows.push_back({double(rep.kind), double(rep.stability),
                          points[k].sx, points[k].sy, points[k].sz,
                          rep.closed_re[0], rep.closed_im[0], rep.closed_re[1],
                          rep.closed_im[1], rep.jac_re[0], rep.jac_im[0],
                          rep.jac_re[1], rep.jac_im[1], rep.jac_re[2],
                          rep.jac_im[2], rep.max_rel_deviation});
  }
  return table;
}

ResultTable run_oracle_compare(const RunConfig& config, bool& any_failed) {
  if (config.sweep_axis != "g_sqrt_n")
    throw ConfigError("oracle-compare sweeps over g_sqrt_n only");
  const std::vector<double> grid = sweep_grid(config);
  const dk_mode mode = mode_from_name(config.mode);

  ResultTable table = parallel_rows(config, grid, [&](double v) {
    const dk_params p = params_at(config, v);
    dk_oracle_opts opts;
    dk_oracle_opts_init(&opts);
    opts.n_max_initial = config.oracle_n_max;
    opts.n_max_cap = config.oracle_n_max_cap;
    opts.shift_tol = config.oracle_tol;
    dk_oracle_steady oracle;
    check_status(dk_oracle_steady_state(&p, &opts, &oracle), "oracle");
    dk_steady_result redfield;
    check_status(dk_steady_state(&p, mode, &redfield), "steady state");
    return std::vector<double>{v,
                               oracle.sz,
                               redfield.sz,
                               std::abs(oracle.sz - redfield.sz),
                               oracle.photons,
                               oracle.x_quad,
                               double(oracle.n_max)};
  });
  table.columns = {"g_sqrt_n", "sz_oracle", "sz_redfield", "abs_diff",
                   "photons",  "x_quad",    "n_max"};
  any_failed = !table.failed_rows.empty();
  return table;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven-dissipative Dicke model: atom-only Redfield simulations"};
  app.require_subcommand(1);

  struct CommonArgs {
    std::string config_path;
    std::vector<std::string> sets;
    std::string out;
    int workers = 0;
    std::string mode;
  };
  CommonArgs args;

  const std::vector<std::pair<std::string, std::string>> tasks = {
      {"evolve", "integrate the master equation and tabulate observables"},
      {"steady", "steady-state observables of the chosen mode"},
      {"sweep", "steady-state sweep along g_sqrt_n / omega0 / kappa / n_atoms"},
      {"stability", "semiclassical fixed points and stability eigenvalues"},
      {"oracle-compare", "atom+cavity oracle vs atom-only steady states"},
  };
  for (const auto& [name, description] : tasks) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", args.config_path, "flat key = value config file");
    sub->add_option("--set", args.sets, "override KEY=VALUE (repeatable)");
    sub->add_option("--out", args.out, "output CSV path ('-' = stdout)");
    sub->add_option("--workers", args.workers, "parallel sweep workers");
    sub->add_option("--mode", args.mode,
                    "full | secular | large-detuning | secular-large-detuning");
  }

  CLI11_PARSE(app, argc, argv);

  RunConfig config;
  try {
    if (!args.config_path.empty()) apply_config_file(config, args.config_path);
    for (const std::string& kv : args.sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw ConfigError("--set expects KEY=VALUE, got '" + kv + "'");
      config.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!args.mode.empty()) config.mode = args.mode;
    if (!args.out.empty()) config.out = args.out;
    if (args.workers > 0) config.workers = args.workers;
    config.task = app.get_subcommands().front()->get_name();

    if (!config.g_set)
      throw ConfigError("g must be set (config file or --set g=VALUE)");
    if (config.n_atoms < 1) throw ConfigError("n_atoms must be >= 1");
    if (config.workers < 1) throw ConfigError("workers must be >= 1");
    mode_from_name(config.mode);

    bool any_failed = false;
    ResultTable table;
    if (config.task == "evolve") table = run_evolve(config);
    else if (config.task == "steady") table = run_steady(config);
    else if (config.task == "sweep") table = run_sweep(config, any_failed);
    else if (config.task == "stability") table = run_stability(config);
    else if (config.task == "oracle-compare")
      table = run_oracle_compare(config, any_failed);

    write_table(config, table);
    if (any_failed) {
      std::cerr << "error: one or more sweep rows failed (markers in output)\n";
      return 2;
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
