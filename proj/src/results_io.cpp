// SPDX-License-Identifier: Apache-2.0
#include "aircomp/results_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

namespace aircomp {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

nlohmann::ordered_json spec_json(const ExperimentSpec& spec) {
  nlohmann::ordered_json j;
  j["name"] = spec.name;
  j["sweep_variable"] = std::string(to_string(spec.sweep_variable));
  j["sweep_values"] = spec.sweep_values;
  std::vector<std::string> schemes;
  for (Scheme s : spec.schemes) schemes.emplace_back(to_string(s));
  j["schemes"] = schemes;
  j["K"] = spec.fixed.devices;
  j["N_t"] = spec.fixed.tx_antennas;
  j["N_r"] = spec.fixed.rx_antennas;
  j["N_rf"] = spec.fixed.rf_chains;
  j["L"] = spec.fixed.functions;
  j["SNR_dB"] = spec.snr_db;
  j["sigma2"] = spec.fixed.noise_var;
  j["beta"] = spec.fixed.path_loss;
  j["trials"] = spec.trials;
  j["base_seed"] = spec.base_seed;
  j["nt_equals_l"] = spec.nt_equals_l;
  j["fixed_tx"] = spec.fixed_tx;
  j["record_timing"] = spec.record_timing;
  j["outer_eps"] = spec.driver.outer_eps;
  j["outer_max_iters"] = spec.driver.outer_max_iters;
  j["tau"] = spec.driver.sca.tau;
  j["sca_eps"] = spec.driver.sca.eps;
  j["sca_max_iters"] = spec.driver.sca.max_iters;
  j["sca_backtrack"] = spec.driver.sca.backtrack;
  j["bcd_eps"] = spec.driver.bcd.eps;
  j["bcd_max_sweeps"] = spec.driver.bcd.max_sweeps;
  j["zf_receive_steps"] = spec.driver.zf_receive_steps;
  return j;
}

}  // namespace

std::string tool_version() { return AIRCOMP_VERSION; }

std::string format_real(Real value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_results_csv(const ExperimentResult& res, std::ostream& out) {
  const std::string var(to_string(res.sweep_variable));
  out << kResultsHeader << '\n';
  for (const auto& r : res.rows) {
    out << to_string(r.scheme) << ',' << var << ',' << format_real(r.sweep_value) << ','
        << format_real(r.mean_mse) << ',' << format_real(r.std_error) << ','
        << format_real(r.mean_outer_iters) << ',' << format_real(r.mean_wall_time) << ','
        << r.trials << ',' << r.excluded << '\n';
  }
}

std::filesystem::path manifest_path(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  return p.replace_extension(".manifest");
}

void write_results(const ExperimentResult& res, const ExperimentSpec& spec,
                   const std::filesystem::path& path) {
  const auto fail = [](const std::filesystem::path& p, const std::string& what) {
    throw std::system_error(errno ? errno : EIO, std::generic_category(),
                            what + " '" + p.string() + "'");
  };
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(path, "cannot open for writing");
    write_results_csv(res, out);
    if (!out.flush()) fail(path, "write failed");
  }

  nlohmann::ordered_json m;
  m["tool"] = "aircomp";
  m["version"] = tool_version();
  m["results"] = path.filename().string();
  m["spec"] = spec_json(spec);
  m["seed_range"] = {{"base_seed", res.base_seed},
                     {"sweep_indices", res.rows.empty() ? 0 : spec.sweep_values.size()},
                     {"trials_per_point", res.trials}};
  const auto mpath = manifest_path(path);
  std::ofstream out(mpath, std::ios::binary | std::ios::trunc);
  if (!out) fail(mpath, "cannot open for writing");
  out << m.dump(2) << '\n';
  if (!out.flush()) fail(mpath, "write failed");
}

std::vector<CsvRow> read_results_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open results '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader)
    throw std::runtime_error("'" + path.string() + "': missing or unexpected header");
  std::vector<CsvRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 9)
      throw std::runtime_error("'" + path.string() + "' line " + std::to_string(line_no) +
                               ": expected 9 fields");
    CsvRow r;
    r.scheme = f[0];
    r.sweep_var = f[1];
    r.sweep_value = std::strtod(f[2].c_str(), nullptr);
    r.mean_mse = std::strtod(f[3].c_str(), nullptr);
    r.std_error = std::strtod(f[4].c_str(), nullptr);
    r.mean_outer_iters = std::strtod(f[5].c_str(), nullptr);
    r.mean_wall_time = std::strtod(f[6].c_str(), nullptr);
    r.trials = std::stoi(f[7]);
    r.excluded = std::stoi(f[8]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace aircomp
