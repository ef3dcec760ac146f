#include "semcom/config_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace semcom {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& value, const std::string& key, int line) {
  const std::string v = trim(value);
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
    throw ConfigError(ConfigErrorKind::kParse,
                      "invalid number '" + value + "' for key " + key, line);
  return out;
}

long long parse_int(const std::string& value, const std::string& key, int line) {
  const double d = parse_double(value, key, line);
  const long long i = static_cast<long long>(d);
  if (static_cast<double>(i) != d)
    throw ConfigError(ConfigErrorKind::kParse,
                      "expected integer for key " + key, line);
  return i;
}

std::uint64_t parse_u64(const std::string& value, const std::string& key,
                        int line) {
  const std::string v = trim(value);
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
    throw ConfigError(ConfigErrorKind::kParse,
                      "invalid unsigned integer '" + value + "' for key " + key,
                      line);
  return out;
}

std::vector<std::string> split(const std::string& value, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(trim(item));
  return parts;
}

Point parse_center(const std::string& value, const std::string& key, int line) {
  const auto parts = split(value, ',');
  if (parts.size() != 2)
    throw ConfigError(ConfigErrorKind::kParse,
                      "expected 'x,y' for key " + key, line);
  return {parse_double(parts[0], key, line), parse_double(parts[1], key, line)};
}

std::vector<std::string> parse_pool(const std::string& value,
                                    const std::string& key, int line) {
  auto parts = split(value, ',');
  if (parts.empty() || (parts.size() == 1 && parts[0].empty()))
    throw ConfigError(ConfigErrorKind::kParse,
                      "expected a comma-separated list for key " + key, line);
  return parts;
}

// models.arch.<ARCH>.flops | models.arch.<ARCH>.cider.<L_p>
bool apply_arch_key(ScenarioConfig& config, const std::string& key,
                    const std::string& value, int line) {
  constexpr const char* kPrefix = "models.arch.";
  if (key.rfind(kPrefix, 0) != 0) return false;
  const std::string rest = key.substr(std::string(kPrefix).size());
  const auto flops_pos = rest.rfind(".flops");
  if (flops_pos != std::string::npos && flops_pos + 6 == rest.size()) {
    const std::string arch = rest.substr(0, flops_pos);
    if (arch.empty()) return false;
    config.model_table[arch].flops = parse_double(value, key, line);
    return true;
  }
  const auto cider_pos = rest.find(".cider.");
  if (cider_pos != std::string::npos && cider_pos > 0) {
    const std::string arch = rest.substr(0, cider_pos);
    const std::string lp = rest.substr(cider_pos + 7);
    const int prompt_bits = static_cast<int>(parse_int(lp, key, line));
    config.model_table[arch].cider_by_prompt_bits[prompt_bits] =
        parse_double(value, key, line);
    return true;
  }
  return false;
}

}  // namespace

void apply_config_key(ScenarioConfig& c, const std::string& key,
                      const std::string& value, int line) {
  auto as_int = [&] { return static_cast<int>(parse_int(value, key, line)); };
  auto as_double = [&] { return parse_double(value, key, line); };

  if (key == "scenario.pairs") c.n_pairs = as_int();
  else if (key == "scenario.servers") c.n_servers = as_int();
  else if (key == "scenario.server_capacity") c.server_capacity = as_int();
  else if (key == "scenario.trials") c.trials = as_int();
  else if (key == "scenario.seed") c.seed = parse_u64(value, key, line);
  else if (key == "scenario.slj_restarts") c.slj_restarts = as_int();
  else if (key == "radio.bandwidth_hz") c.bandwidth_hz = as_double();
  else if (key == "radio.noise_psd_dbm_per_hz") c.noise_psd_dbm_per_hz = as_double();
  else if (key == "radio.tx_power_max_dbm") c.tx_power_max_dbm = as_double();
  else if (key == "radio.server_power_max_dbm") c.server_power_max_dbm = as_double();
  else if (key == "radio.rate_exponent_cap") c.rate_exponent_cap = as_double();
  else if (key == "pathloss.reference_distance_m")
    c.pathloss.reference_distance_m = as_double();
  else if (key == "pathloss.exponent") c.pathloss.exponent = as_double();
  else if (key == "geometry.servers.center")
    c.server_disc.center = parse_center(value, key, line);
  else if (key == "geometry.servers.radius_m") c.server_disc.radius_m = as_double();
  else if (key == "geometry.tx.center") c.tx_disc.center = parse_center(value, key, line);
  else if (key == "geometry.tx.radius_m") c.tx_disc.radius_m = as_double();
  else if (key == "geometry.rx.center") c.rx_disc.center = parse_center(value, key, line);
  else if (key == "geometry.rx.radius_m") c.rx_disc.radius_m = as_double();
  else if (key == "compute.intensity_cycles_per_flop") c.intensity_cpf = as_double();
  else if (key == "compute.kappa_eff") c.kappa_eff = as_double();
  else if (key == "compute.device_energy_budget_j")
    c.device_energy_budget_j = as_double();
  else if (key == "compute.f_local_min_hz") c.f_local_min_hz = as_double();
  else if (key == "compute.f_local_max_hz") c.f_local_max_hz = as_double();
  else if (key == "compute.f_edge_min_hz") c.f_edge_min_hz = as_double();
  else if (key == "compute.f_edge_max_hz") c.f_edge_max_hz = as_double();
  else if (key == "compute.f_local_hz") {
    c.f_local_min_hz = as_double();
    c.f_local_max_hz = c.f_local_min_hz;
  } else if (key == "compute.f_edge_hz") {
    c.f_edge_min_hz = as_double();
    c.f_edge_max_hz = c.f_edge_min_hz;
  } else if (key == "task.source_bits") c.source_bits = as_double();
  else if (key == "task.prompt_bits") c.prompt_bits = as_int();
  else if (key == "models.device_pool") c.device_pool = parse_pool(value, key, line);
  else if (key == "models.edge_pool") c.edge_pool = parse_pool(value, key, line);
  else if (key == "solver.phi_tolerance") c.solver.phi_tolerance = as_double();
  else if (key == "solver.dual_tolerance") c.solver.dual_tolerance = as_double();
  else if (key == "solver.max_iterations")
    c.solver.max_iterations = as_int();
  else if (key == "solver.scalar_search_tolerance")
    c.solver.scalar_search_tolerance = as_double();
  else if (!apply_arch_key(c, key, value, line))
    throw ConfigError(ConfigErrorKind::kUnknownKey, "unknown key '" + key + "'",
                      line);
}

ScenarioConfig parse_config_text(const std::string& text) {
  ScenarioConfig config;
  std::stringstream ss(text);
  std::string raw;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError(ConfigErrorKind::kParse,
                        "expected 'key = value' on line " + std::to_string(line),
                        line);
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      throw ConfigError(ConfigErrorKind::kParse,
                        "empty key on line " + std::to_string(line), line);
    apply_config_key(config, key, value, line);
  }
  const std::string error = validate_config(config);
  if (!error.empty()) throw ConfigError(ConfigErrorKind::kRange, error);
  return config;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError(ConfigErrorKind::kMissingFile,
                      "cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::vector<std::pair<std::string, std::string>> echo_config(
    const ScenarioConfig& c) {
  std::vector<std::pair<std::string, std::string>> pairs;
  auto put = [&](std::string key, std::string value) {
    pairs.emplace_back(std::move(key), std::move(value));
  };
  auto join = [](const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) out += ',';
      out += items[i];
    }
    return out;
  };
  put("scenario.pairs", std::to_string(c.n_pairs));
  put("scenario.servers", std::to_string(c.n_servers));
  put("scenario.server_capacity", std::to_string(c.server_capacity));
  put("scenario.trials", std::to_string(c.trials));
  put("scenario.seed", std::to_string(c.seed));
  put("scenario.slj_restarts", std::to_string(c.slj_restarts));
  put("radio.bandwidth_hz", format_double(c.bandwidth_hz));
  put("radio.noise_psd_dbm_per_hz", format_double(c.noise_psd_dbm_per_hz));
  put("radio.tx_power_max_dbm", format_double(c.tx_power_max_dbm));
  put("radio.server_power_max_dbm", format_double(c.server_power_max_dbm));
  put("radio.rate_exponent_cap", format_double(c.rate_exponent_cap));
  put("pathloss.reference_distance_m",
      format_double(c.pathloss.reference_distance_m));
  put("pathloss.exponent", format_double(c.pathloss.exponent));
  put("geometry.servers.center", format_double(c.server_disc.center.x) + "," +
                                     format_double(c.server_disc.center.y));
  put("geometry.servers.radius_m", format_double(c.server_disc.radius_m));
  put("geometry.tx.center", format_double(c.tx_disc.center.x) + "," +
                                format_double(c.tx_disc.center.y));
  put("geometry.tx.radius_m", format_double(c.tx_disc.radius_m));
  put("geometry.rx.center", format_double(c.rx_disc.center.x) + "," +
                                format_double(c.rx_disc.center.y));
  put("geometry.rx.radius_m", format_double(c.rx_disc.radius_m));
  put("compute.intensity_cycles_per_flop", format_double(c.intensity_cpf));
  put("compute.kappa_eff", format_double(c.kappa_eff));
  put("compute.device_energy_budget_j", format_double(c.device_energy_budget_j));
  put("compute.f_local_min_hz", format_double(c.f_local_min_hz));
  put("compute.f_local_max_hz", format_double(c.f_local_max_hz));
  put("compute.f_edge_min_hz", format_double(c.f_edge_min_hz));
  put("compute.f_edge_max_hz", format_double(c.f_edge_max_hz));
  put("task.source_bits", format_double(c.source_bits));
  put("task.prompt_bits", std::to_string(c.prompt_bits));
  put("models.device_pool", join(c.device_pool));
  put("models.edge_pool", join(c.edge_pool));
  for (const auto& [arch, spec] : c.model_table) {
    put("models.arch." + arch + ".flops", format_double(spec.flops));
    for (const auto& [lp, cider] : spec.cider_by_prompt_bits)
      put("models.arch." + arch + ".cider." + std::to_string(lp),
          format_double(cider));
  }
  put("solver.phi_tolerance", format_double(c.solver.phi_tolerance));
  put("solver.dual_tolerance", format_double(c.solver.dual_tolerance));
  put("solver.max_iterations", std::to_string(c.solver.max_iterations));
  put("solver.scalar_search_tolerance",
      format_double(c.solver.scalar_search_tolerance));
  return pairs;
}

ScenarioConfig config_from_pairs(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  ScenarioConfig config;
  for (const auto& [key, value] : pairs) apply_config_key(config, key, value);
  const std::string error = validate_config(config);
  if (!error.empty()) throw ConfigError(ConfigErrorKind::kRange, error);
  return config;
}

}  // namespace semcom
