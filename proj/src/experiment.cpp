// SPDX-License-Identifier: Apache-2.0
#include "aircomp/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "aircomp/digital.hpp"
#include "aircomp/parallel.hpp"
#include "aircomp/results_io.hpp"

namespace aircomp {
namespace {

constexpr std::string_view kSchemeNames[] = {"Lagrange-SCA", "Lagrange-BCD", "FD", "FD-ZF"};
constexpr std::string_view kSweepNames[] = {"N_r", "N_rf", "K", "L", "SNR_dB"};

bool is_hybrid(Scheme s) { return s == Scheme::kLagrangeSca || s == Scheme::kLagrangeBcd; }

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto end = comma == std::string_view::npos ? s.size() : comma;
    std::string item = trim(s.substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Real parse_real(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  Real v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty())
    throw ConfigError("key '" + key + "': not a number: '" + text + "'");
  return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty())
    throw ConfigError("key '" + key + "': not an integer: '" + text + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const long long v = parse_integer(key, text);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ConfigError("key '" + key + "': out of range");
  return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + text + "'");
}

int as_count(Real value, std::string_view what) {
  if (value != std::floor(value) || value < 1 || value > std::numeric_limits<int>::max())
    throw ConfigError(std::string(what) + " sweep value must be a positive integer");
  return static_cast<int>(value);
}

struct CellOutcome {
  Real mse = std::numeric_limits<Real>::quiet_NaN();
  Real outer_iters = 0;
  Real wall_time = 0;
  bool ok = false;
};

CellOutcome run_scheme(Scheme scheme, const ExperimentSpec& spec, const SystemConfig& cfg,
                       const ChannelSet& ch, const BeamformingState* hybrid_init) {
  CellOutcome out;
  const SolveTrace* trace = nullptr;
  HybridResult hybrid;
  FullyDigitalResult digital;
  DriverConfig dcfg = spec.driver;

  switch (scheme) {
    case Scheme::kLagrangeSca:
    case Scheme::kLagrangeBcd:
      dcfg.analog_solver = scheme == Scheme::kLagrangeSca ? AnalogSolver::kSca : AnalogSolver::kBcd;
      hybrid = solve_hybrid(cfg, ch, *hybrid_init, dcfg);
      trace = &hybrid.trace;
      break;
    case Scheme::kFd:
      if (spec.fixed_tx) {
        const auto start = std::chrono::steady_clock::now();
        const TxBeamformerSet tx = initial_tx(cfg);
        out.mse = compute_mse(cfg, ch, tx, solve_fully_digital_mmse(cfg, ch, tx));
        out.wall_time =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.ok = std::isfinite(out.mse);
        if (!spec.record_timing) out.wall_time = 0;
        return out;
      }
      digital = solve_fd(cfg, ch, initial_tx(cfg), dcfg);
      trace = &digital.trace;
      break;
    case Scheme::kFdZf:
      digital = solve_fd_zf(cfg, ch, initial_tx(cfg), dcfg);
      trace = &digital.trace;
      break;
  }
  if (trace->termination == Termination::kAbortedNonfinite) return out;
  out.mse = trace->final_value();
  out.outer_iters = trace->iterations;
  out.wall_time = spec.record_timing ? trace->wall_time : 0;
  out.ok = std::isfinite(out.mse);
  return out;
}

}  // namespace

std::string_view to_string(SweepVariable v) { return kSweepNames[static_cast<int>(v)]; }
std::string_view to_string(Scheme s) { return kSchemeNames[static_cast<int>(s)]; }

SweepVariable parse_sweep_variable(std::string_view text) {
  for (int i = 0; i < 5; ++i)
    if (text == kSweepNames[i]) return static_cast<SweepVariable>(i);
  throw ConfigError("unknown sweep variable '" + std::string(text) +
                    "' (expected N_r, N_rf, K, L or SNR_dB)");
}

Scheme parse_scheme(std::string_view text) {
  for (int i = 0; i < 4; ++i)
    if (text == kSchemeNames[i]) return static_cast<Scheme>(i);
  throw ConfigError("unknown scheme '" + std::string(text) +
                    "' (expected Lagrange-SCA, Lagrange-BCD, FD or FD-ZF)");
}

SystemConfig ExperimentSpec::config_at(Real value) const {
  SystemConfig cfg = fixed;
  Real snr = snr_db;
  switch (sweep_variable) {
    case SweepVariable::kNr: cfg.rx_antennas = as_count(value, "N_r"); break;
    case SweepVariable::kNrf: cfg.rf_chains = as_count(value, "N_rf"); break;
    case SweepVariable::kK: cfg.devices = as_count(value, "K"); break;
    case SweepVariable::kL: cfg.functions = as_count(value, "L"); break;
    case SweepVariable::kSnrDb: snr = value; break;
  }
  if (nt_equals_l) cfg.tx_antennas = cfg.functions;
  cfg.power = power_from_snr_db(snr, cfg.noise_var, cfg.path_loss);
  return cfg;
}

void ExperimentSpec::validate() const {
  if (sweep_values.empty()) throw ConfigError("sweep_values must not be empty");
  for (std::size_t i = 1; i < sweep_values.size(); ++i)
    if (!(sweep_values[i] > sweep_values[i - 1]))
      throw ConfigError("sweep_values must be strictly increasing");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (schemes.empty()) throw ConfigError("schemes must not be empty");
  bool hybrid = false;
  for (Scheme s : schemes) {
    hybrid = hybrid || is_hybrid(s);
    if (fixed_tx && s != Scheme::kFd) throw ConfigError("fixed_tx applies to the FD scheme only");
  }
  for (std::size_t i = 0; i < schemes.size(); ++i)
    for (std::size_t j = i + 1; j < schemes.size(); ++j)
      if (schemes[i] == schemes[j]) throw ConfigError("schemes must not repeat");
  for (Real v : sweep_values) {
    const SystemConfig cfg = config_at(v);
    if (hybrid)
      cfg.validate();
    else
      cfg.validate_fully_digital();
  }
  driver.validate();
}

const ExperimentRow& ExperimentResult::row(Scheme scheme, Real sweep_value) const {
  for (const auto& r : rows)
    if (r.scheme == scheme && r.sweep_value == sweep_value) return r;
  throw std::out_of_range("no result row for " + std::string(to_string(scheme)) + " at " +
                          format_real(sweep_value));
}

ExperimentResult run_experiment(const ExperimentSpec& spec, int threads) {
  spec.validate();
  const std::size_t n_values = spec.sweep_values.size();
  const std::size_t n_trials = static_cast<std::size_t>(spec.trials);
  const std::size_t n_schemes = spec.schemes.size();
  bool needs_state = false;
  for (Scheme s : spec.schemes) needs_state = needs_state || is_hybrid(s);

  // outcomes[(cell * n_schemes) + scheme], cell = value * n_trials + trial
  std::vector<CellOutcome> outcomes(n_values * n_trials * n_schemes);
  parallel_for(n_values * n_trials, threads, [&](std::size_t cell) {
    const std::size_t s = cell / n_trials;
    const std::size_t t = cell % n_trials;
    const SystemConfig cfg = spec.config_at(spec.sweep_values[s]);
    const TrialSeeds seeds = trial_seeds(spec.base_seed, s, t);
    const ChannelSet ch = generate_rayleigh_channels(cfg, seeds.channel, true);
    BeamformingState init;
    if (needs_state) init = init_state(cfg, seeds.init);
    for (std::size_t m = 0; m < n_schemes; ++m) {
      try {
        outcomes[cell * n_schemes + m] =
            run_scheme(spec.schemes[m], spec, cfg, ch, needs_state ? &init : nullptr);
      } catch (const std::exception&) {
        outcomes[cell * n_schemes + m] = CellOutcome{};
      }
    }
  });

  ExperimentResult res;
  res.sweep_variable = spec.sweep_variable;
  res.base_seed = spec.base_seed;
  res.trials = spec.trials;
  for (std::size_t m = 0; m < n_schemes; ++m) {
    for (std::size_t s = 0; s < n_values; ++s) {
      ExperimentRow row;
      row.scheme = spec.schemes[m];
      row.sweep_value = spec.sweep_values[s];
      row.samples.resize(n_trials);
      Real sum = 0, sum_iters = 0, sum_time = 0;
      for (std::size_t t = 0; t < n_trials; ++t) {
        const CellOutcome& o = outcomes[(s * n_trials + t) * n_schemes + m];
        row.samples[t] = o.ok ? o.mse : std::numeric_limits<Real>::quiet_NaN();
        if (!o.ok) {
          ++row.excluded;
          continue;
        }
        ++row.trials;
        sum += o.mse;
        sum_iters += o.outer_iters;
        sum_time += o.wall_time;
      }
      if (row.trials > 0) {
        const Real n = row.trials;
        row.mean_mse = sum / n;
        row.mean_outer_iters = sum_iters / n;
        row.mean_wall_time = sum_time / n;
        if (row.trials > 1) {
          Real ss = 0;
          for (Real v : row.samples)
            if (!std::isnan(v)) ss += (v - row.mean_mse) * (v - row.mean_mse);
          row.std_error = std::sqrt(ss / (n - 1) / n);
        }
      } else {
        row.mean_mse = row.std_error = std::numeric_limits<Real>::quiet_NaN();
      }
      res.rows.push_back(std::move(row));
    }
  }
  return res;
}

ExperimentSpec parse_spec(std::string_view text) {
  ExperimentSpec spec;
  spec.fixed = SystemConfig{};
  bool have_sweep_var = false;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    DriverConfig& d = spec.driver;
    SystemConfig& f = spec.fixed;
    try {
      if (key == "name") spec.name = value;
      else if (key == "sweep_variable") {
        spec.sweep_variable = parse_sweep_variable(value);
        have_sweep_var = true;
      } else if (key == "sweep_values") {
        spec.sweep_values.clear();
        for (const auto& item : split_list(value)) spec.sweep_values.push_back(parse_real(key, item));
      } else if (key == "schemes") {
        spec.schemes.clear();
        for (const auto& item : split_list(value)) spec.schemes.push_back(parse_scheme(item));
      } else if (key == "K") f.devices = parse_int(key, value);
      else if (key == "N_t") f.tx_antennas = parse_int(key, value);
      else if (key == "N_r") f.rx_antennas = parse_int(key, value);
      else if (key == "N_rf") f.rf_chains = parse_int(key, value);
      else if (key == "L") f.functions = parse_int(key, value);
      else if (key == "SNR_dB") spec.snr_db = parse_real(key, value);
      else if (key == "sigma2") f.noise_var = parse_real(key, value);
      else if (key == "beta") f.path_loss = parse_real(key, value);
      else if (key == "trials") spec.trials = parse_int(key, value);
      else if (key == "base_seed") {
        const long long s = parse_integer(key, value);
        if (s < 0) throw ConfigError("key 'base_seed': must be >= 0");
        spec.base_seed = static_cast<std::uint64_t>(s);
      } else if (key == "nt_equals_l") spec.nt_equals_l = parse_bool(key, value);
      else if (key == "fixed_tx") spec.fixed_tx = parse_bool(key, value);
      else if (key == "record_timing") spec.record_timing = parse_bool(key, value);
      else if (key == "outer_eps") d.outer_eps = parse_real(key, value);
      else if (key == "outer_max_iters") d.outer_max_iters = parse_int(key, value);
      else if (key == "tau") d.sca.tau = parse_real(key, value);
      else if (key == "sca_eps") d.sca.eps = parse_real(key, value);
      else if (key == "sca_max_iters") d.sca.max_iters = parse_int(key, value);
      else if (key == "sca_backtrack") d.sca.backtrack = parse_bool(key, value);
      else if (key == "bcd_eps") d.bcd.eps = parse_real(key, value);
      else if (key == "bcd_max_sweeps") d.bcd.max_sweeps = parse_int(key, value);
      else if (key == "zf_receive_steps") d.zf_receive_steps = parse_int(key, value);
      else throw ConfigError("unknown key '" + key + "'");
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_sweep_var) throw ConfigError("missing key 'sweep_variable'");
  spec.validate();
  return spec;
}

ExperimentSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_spec(text.str());
}

std::string format_spec(const ExperimentSpec& spec) {
  std::ostringstream os;
  const auto list = [](const auto& items, auto fmt) {
    std::string s;
    for (std::size_t i = 0; i < items.size(); ++i) s += (i ? "," : "") + fmt(items[i]);
    return s;
  };
  const auto boolean = [](bool b) { return b ? "true" : "false"; };
  const SystemConfig& f = spec.fixed;
  const DriverConfig& d = spec.driver;
  os << "name = " << spec.name << "\n"
     << "sweep_variable = " << to_string(spec.sweep_variable) << "\n"
     << "sweep_values = " << list(spec.sweep_values, format_real) << "\n"
     << "schemes = "
     << list(spec.schemes, [](Scheme s) { return std::string(to_string(s)); }) << "\n"
     << "K = " << f.devices << "\n"
     << "N_t = " << f.tx_antennas << "\n"
     << "N_r = " << f.rx_antennas << "\n"
     << "N_rf = " << f.rf_chains << "\n"
     << "L = " << f.functions << "\n"
     << "SNR_dB = " << format_real(spec.snr_db) << "\n"
     << "sigma2 = " << format_real(f.noise_var) << "\n"
     << "beta = " << format_real(f.path_loss) << "\n"
     << "trials = " << spec.trials << "\n"
     << "base_seed = " << spec.base_seed << "\n"
     << "nt_equals_l = " << boolean(spec.nt_equals_l) << "\n"
     << "fixed_tx = " << boolean(spec.fixed_tx) << "\n"
     << "record_timing = " << boolean(spec.record_timing) << "\n"
     << "outer_eps = " << format_real(d.outer_eps) << "\n"
     << "outer_max_iters = " << d.outer_max_iters << "\n"
     << "tau = " << format_real(d.sca.tau) << "\n"
     << "sca_eps = " << format_real(d.sca.eps) << "\n"
     << "sca_max_iters = " << d.sca.max_iters << "\n"
     << "sca_backtrack = " << boolean(d.sca.backtrack) << "\n"
     << "bcd_eps = " << format_real(d.bcd.eps) << "\n"
     << "bcd_max_sweeps = " << d.bcd.max_sweeps << "\n"
     << "zf_receive_steps = " << d.zf_receive_steps << "\n";
  return os.str();
}

std::vector<std::string> figure_names() {
  return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"};
}

ExperimentSpec figure_preset(std::string_view name) {
  ExperimentSpec spec;
  spec.name = std::string(name);
  spec.trials = 100;
  spec.fixed.devices = 50;
  spec.fixed.rx_antennas = 64;
  spec.fixed.rf_chains = 10;
  spec.fixed.functions = 10;
  spec.fixed.tx_antennas = 10;
  spec.snr_db = 10;
  const std::vector<Scheme> all = {Scheme::kLagrangeSca, Scheme::kLagrangeBcd, Scheme::kFd,
                                   Scheme::kFdZf};
  spec.schemes = all;

  if (name == "fig2") {
    spec.sweep_variable = SweepVariable::kNr;
    spec.sweep_values = {64, 128, 256, 512};
    spec.fixed.devices = 20;
    spec.fixed.functions = 2;
    spec.fixed.tx_antennas = 2;
    spec.fixed.rf_chains = 2;
    spec.schemes = {Scheme::kFd};
    spec.fixed_tx = true;
    spec.trials = 500;
  } else if (name == "fig3") {
    spec.sweep_variable = SweepVariable::kNr;
    spec.sweep_values = {64, 128, 256};
  } else if (name == "fig4" || name == "fig5") {
    // Single operating point of the convergence figures.
    spec.sweep_variable = SweepVariable::kNrf;
    spec.sweep_values = {16};
    spec.schemes = {name == "fig4" ? Scheme::kLagrangeSca : Scheme::kLagrangeBcd};
  } else if (name == "fig6") {
    spec.sweep_variable = SweepVariable::kK;
    spec.sweep_values = {30, 40, 50, 60, 70, 80};
    spec.fixed.rf_chains = 16;
  } else if (name == "fig7") {
    spec.sweep_variable = SweepVariable::kL;
    spec.sweep_values = {2, 4, 6, 8, 10};
  } else if (name == "fig8") {
    spec.sweep_variable = SweepVariable::kNrf;
    spec.sweep_values = {10, 12, 14, 16, 18, 20};
  } else if (name == "fig9") {
    spec.sweep_variable = SweepVariable::kSnrDb;
    spec.sweep_values = {0, 5, 10, 15, 20};
  } else {
    throw ConfigError("unknown figure '" + std::string(name) + "' (expected fig2 ... fig9)");
  }
  spec.validate();
  return spec;
}

int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("AIRCOMP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 1024) return static_cast<int>(v);
  }
  return 1;
}

}  // namespace aircomp
