#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "khopnet/engine.hpp"

namespace khopnet {

/// Reads flat `key = value` text onto `base`. Keys use dotted names such as
/// `timers.refresh` or `weights.w4`; '#' starts a comment. Unknown keys and
/// bad values throw ParseError.
SimConfig parse_config(std::string_view text, SimConfig base = {});

/// Every key with its current value, one per line, in a stable order.
std::string emit_config(const SimConfig& cfg);

/// All recognised keys.
std::vector<std::string> config_keys();

/// Loads `path`, falling back to $KHOPNET_CONFIG when `path` is empty.
/// Returns defaults when neither is set. Throws FileNotFound.
SimConfig load_config(const std::optional<std::string>& path);

std::string read_file(const std::string& path);

}  // namespace khopnet
