#include "khopnet/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <variant>

#include "khopnet/error.hpp"
#include "khopnet/format.hpp"

namespace khopnet {

namespace {

using Field = std::variant<double*, int*, std::uint64_t*, bool*>;

std::vector<std::pair<std::string, Field>> fields(SimConfig& c) {
  auto& t = c.protocol.timers;
  auto& th = c.protocol.thresholds;
  auto& w = c.protocol.weights;
  return {
      {"seed", &c.seed},
      {"duration", &c.duration},
      {"per_hop_latency", &c.per_hop_latency},
      {"energy.tx_per_byte", &c.energy.tx_per_byte},
      {"energy.rx_per_byte", &c.energy.rx_per_byte},
      {"energy.idle_per_second", &c.energy.idle_per_second},
      {"battery_capacity", &c.battery_capacity},
      {"weights.w1", &w.w1},
      {"weights.w2", &w.w2},
      {"weights.w3", &w.w3},
      {"weights.w4", &w.w4},
      {"weights.w5", &w.w5},
      {"timers.refresh", &t.refresh},
      {"timers.reply_wait", &t.reply_wait},
      {"timers.higher_wait", &t.higher_wait},
      {"timers.serve_slot", &t.serve_slot},
      {"timers.cooldown", &t.cooldown},
      {"timers.join_wait", &t.join_wait},
      {"thresholds.ns_threshold", &th.ns_threshold},
      {"thresholds.join_energy", &th.join_energy},
      {"thresholds.battery_quit", &th.battery_quit},
      {"thresholds.max_hops", &th.max_hops},
      {"radio.range", &c.radio.range},
      {"mobility_step", &c.mobility_step},
      {"boot_window", &c.boot_window},
      {"election_backoff", &c.election_backoff},
      {"head_tick", &c.head_tick},
      {"boot_join", &c.boot_join},
  };
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool assign(const Field& field, std::string_view value) {
  return std::visit(
      [&](auto* target) {
        using T = std::remove_pointer_t<decltype(target)>;
        if constexpr (std::is_same_v<T, bool>) {
          if (value == "true" || value == "1") *target = true;
          else if (value == "false" || value == "0") *target = false;
          else return false;
          return true;
        } else if constexpr (std::is_same_v<T, double>) {
          auto v = parse_double(value);
          if (!v) return false;
          *target = *v;
          return true;
        } else {
          auto v = parse_int<T>(value);
          if (!v) return false;
          *target = *v;
          return true;
        }
      },
      field);
}

void validate(const SimConfig& c) {
  if (!(c.duration >= 0.0)) throw Error("duration must be non-negative");
  if (!(c.per_hop_latency >= 0.0)) throw Error("per_hop_latency must be non-negative");
  if (c.energy.tx_per_byte < 0 || c.energy.rx_per_byte < 0 || c.energy.idle_per_second < 0) {
    throw Error("energy coefficients must be non-negative");
  }
  const auto& w = c.protocol.weights;
  if (w.w1 < 0 || w.w2 < 0 || w.w3 < 0 || w.w4 < 0 || w.w5 < 0) {
    throw Error("priority weights must be non-negative");
  }
  if (c.protocol.thresholds.max_hops < 0) throw Error("thresholds.max_hops must be >= 0");
  if (!(c.battery_capacity > 0.0)) throw Error("battery_capacity must be positive");
}

}  // namespace

SimConfig parse_config(std::string_view text, SimConfig base) {
  auto table = fields(base);
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    auto it = std::find_if(table.begin(), table.end(), [&](auto& f) { return f.first == key; });
    if (it == table.end()) throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
    if (!assign(it->second, value)) {
      throw ParseError(line_no, "bad value '" + std::string(value) + "' for " + std::string(key));
    }
  }
  validate(base);
  return base;
}

std::string emit_config(const SimConfig& cfg) {
  SimConfig copy = cfg;
  std::string out;
  for (const auto& [key, field] : fields(copy)) {
    out += key + " = ";
    std::visit(
        [&](auto* v) {
          using T = std::remove_pointer_t<decltype(v)>;
          if constexpr (std::is_same_v<T, bool>) out += *v ? "true" : "false";
          else if constexpr (std::is_same_v<T, double>) out += format_shortest(*v);
          else out += std::to_string(*v);
        },
        field);
    out += '\n';
  }
  return out;
}

std::vector<std::string> config_keys() {
  SimConfig scratch;
  std::vector<std::string> keys;
  for (const auto& f : fields(scratch)) keys.push_back(f.first);
  return keys;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

SimConfig load_config(const std::optional<std::string>& path) {
  std::string resolved;
  if (path && !path->empty()) {
    resolved = *path;
  } else if (const char* env = std::getenv("KHOPNET_CONFIG"); env && *env) {
    resolved = env;
  } else {
    return SimConfig{};
  }
  return parse_config(read_file(resolved));
}

}  // namespace khopnet
