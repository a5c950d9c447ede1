#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "graphpae/evalkit.hpp"
#include "graphpae/trainer.hpp"

namespace graphpae {

/// Every configurable value of a run: training, encoder, data and probe.
struct FullConfig {
  std::string preset;
  RunConfig run;
  ProbeConfig probe;
};

using KeyValues = std::map<std::string, std::string>;

/// Every accepted key, e.g. "mask_ratio", "encoder.layers", "probe.lr".
const std::vector<std::string>& config_keys();

/// Flat `key=value` lines; '#' starts a comment. ParseError with line number
/// on a line without '=', ArgumentError on an unknown or repeated key.
KeyValues parse_config_text(std::string_view text, const std::string& source);
KeyValues read_config_file(const std::filesystem::path& path);

/// Applies values on top of `cfg`. ArgumentError for unknown keys or values
/// that do not parse.
void apply_config(FullConfig& cfg, const KeyValues& values);

/// `PAE_<KEY>` variables (key upper-cased, '.' as '_') from "NAME=value"
/// entries. ArgumentError for a PAE_ variable that names no key.
KeyValues env_overrides(std::span<const std::string> environment);
std::vector<std::string> current_environment();

/// File, then flags, then environment; a `preset` key anywhere selects the
/// base configuration before the other keys are applied.
FullConfig resolve_config(const std::optional<std::filesystem::path>& file, const KeyValues& flags,
                          std::span<const std::string> environment);

/// Effective configuration as `key=value` lines in config_keys() order.
std::string render_config(const FullConfig& cfg);

}  // namespace graphpae
