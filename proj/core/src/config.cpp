#include "graphpae/config.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

#include "graphpae/errors.hpp"
#include "text.hpp"

extern char** environ;

namespace graphpae {
namespace {

struct Field {
  const char* key;
  std::function<void(FullConfig&, std::string_view)> set;
  std::function<std::string(const FullConfig&)> get;
};

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* expected) {
  throw ArgumentError("config key '" + std::string(key) + "': '" + std::string(value) +
                      "' is not " + expected);
}

double to_double(std::string_view key, std::string_view v) {
  double out;
  if (!detail::parse_double(v, out)) bad_value(key, v, "a number");
  return out;
}

std::size_t to_count(std::string_view key, std::string_view v) {
  std::size_t out;
  if (!detail::parse_int(v, out)) bad_value(key, v, "a non-negative integer");
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad_value(key, v, "a boolean (true/false)");
}

std::string num(double v) { return detail::format_double(v); }
std::string num(std::size_t v) { return std::to_string(v); }
std::string flag(bool v) { return v ? "true" : "false"; }

#define GP_DOUBLE(KEY, MEMBER)                                                        \
  Field {                                                                             \
    KEY, [](FullConfig& c, std::string_view v) { c.MEMBER = to_double(KEY, v); },     \
        [](const FullConfig& c) { return num(c.MEMBER); }                             \
  }
#define GP_COUNT(KEY, MEMBER)                                                         \
  Field {                                                                             \
    KEY, [](FullConfig& c, std::string_view v) { c.MEMBER = to_count(KEY, v); },      \
        [](const FullConfig& c) { return num(static_cast<std::size_t>(c.MEMBER)); }   \
  }
#define GP_BOOL(KEY, MEMBER)                                                          \
  Field {                                                                             \
    KEY, [](FullConfig& c, std::string_view v) { c.MEMBER = to_bool(KEY, v); },       \
        [](const FullConfig& c) { return flag(c.MEMBER); }                            \
  }
#define GP_STRING(KEY, MEMBER)                                                        \
  Field {                                                                             \
    KEY, [](FullConfig& c, std::string_view v) { c.MEMBER = std::string(v); },        \
        [](const FullConfig& c) { return c.MEMBER; }                                  \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      GP_STRING("preset", preset),
      GP_COUNT("epochs", run.epochs),
      GP_DOUBLE("mask_ratio", run.mask_ratio),
      GP_DOUBLE("noise_scale", run.noise_scale),
      GP_DOUBLE("loss_alpha", run.loss_alpha),
      GP_DOUBLE("sce_gamma", run.sce_gamma),
      GP_COUNT("k", run.k),
      GP_DOUBLE("lr", run.lr),
      GP_DOUBLE("weight_decay", run.weight_decay),
      Field{"seed", [](FullConfig& c, std::string_view v) {
              std::uint64_t s;
              if (!detail::parse_int(v, s)) bad_value("seed", v, "a non-negative integer");
              c.run.seed = s;
            },
            [](const FullConfig& c) { return std::to_string(c.run.seed); }},
      GP_COUNT("batch_size", run.batch_size),
      Field{"pooling", [](FullConfig& c, std::string_view v) { c.run.pooling = parse_pooling(std::string(v)); },
            [](const FullConfig& c) { return to_string(c.run.pooling); }},
      Field{"task", [](FullConfig& c, std::string_view v) { c.run.task = parse_task_kind(std::string(v)); },
            [](const FullConfig& c) { return to_string(c.run.task); }},
      GP_BOOL("keep_self_loops", run.keep_self_loops),
      GP_COUNT("checkpoint_every", run.checkpoint_every),
      GP_COUNT("encoder.layers", run.encoder.layers),
      GP_COUNT("encoder.hidden", run.encoder.hidden),
      Field{"encoder.attention",
            [](FullConfig& c, std::string_view v) { c.run.encoder.attention = parse_attention_kind(std::string(v)); },
            [](const FullConfig& c) { return to_string(c.run.encoder.attention); }},
      GP_COUNT("encoder.heads", run.encoder.heads),
      GP_COUNT("encoder.rbf_count", run.encoder.rbf_count),
      Field{"encoder.rbf_sigma",
            [](FullConfig& c, std::string_view v) {
              if (v.empty() || v == "auto") {
                c.run.encoder.rbf_sigma.reset();
              } else {
                c.run.encoder.rbf_sigma = to_double("encoder.rbf_sigma", v);
              }
            },
            [](const FullConfig& c) {
              return c.run.encoder.rbf_sigma ? num(*c.run.encoder.rbf_sigma) : std::string("auto");
            }},
      Field{"encoder.rbf_centers",
            [](FullConfig& c, std::string_view v) {
              c.run.encoder.rbf_centers.clear();
              if (v.empty() || v == "auto") return;
              for (auto part : detail::split_on(v, ',')) {
                c.run.encoder.rbf_centers.push_back(to_double("encoder.rbf_centers", part));
              }
            },
            [](const FullConfig& c) {
              if (c.run.encoder.rbf_centers.empty()) return std::string("auto");
              std::string out;
              for (double x : c.run.encoder.rbf_centers) out += (out.empty() ? "" : ",") + num(x);
              return out;
            }},
      GP_DOUBLE("encoder.node_dropout", run.encoder.node_dropout),
      GP_DOUBLE("encoder.edge_dropout", run.encoder.edge_dropout),
      GP_COUNT("encoder.edge_vocab", run.encoder.edge_vocab),
      GP_BOOL("encoder.inter_layer_relu", run.encoder.inter_layer_relu),
      GP_STRING("data.edges", run.data.edges),
      GP_STRING("data.features", run.data.features),
      GP_STRING("data.labels", run.data.labels),
      GP_STRING("data.split", run.data.split),
      GP_STRING("data.manifest", run.data.manifest),
      Field{"probe.kind", [](FullConfig& c, std::string_view v) { c.probe.kind = parse_probe_kind(std::string(v)); },
            [](const FullConfig& c) { return to_string(c.probe.kind); }},
      Field{"probe.metric", [](FullConfig& c, std::string_view v) { c.probe.metric = parse_metric(std::string(v)); },
            [](const FullConfig& c) { return to_string(c.probe.metric); }},
      GP_DOUBLE("probe.lr", probe.lr),
      GP_COUNT("probe.epochs", probe.epochs),
      GP_DOUBLE("probe.weight_decay", probe.weight_decay),
      GP_COUNT("probe.patience", probe.patience),
      GP_BOOL("probe.standardize", probe.standardize),
      GP_COUNT("probe.seeds", probe.seeds),
  };
  return table;
}

#undef GP_DOUBLE
#undef GP_COUNT
#undef GP_BOOL
#undef GP_STRING

const Field* find_field(std::string_view key) {
  for (const auto& f : fields())
    if (key == f.key) return &f;
  return nullptr;
}

std::string env_name(std::string_view key) {
  std::string out = "PAE_";
  for (char ch : key) out += (ch == '.' || ch == '-') ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return out;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : fields()) k.emplace_back(f.key);
    return k;
  }();
  return keys;
}

KeyValues parse_config_text(std::string_view text, const std::string& source) {
  KeyValues out;
  std::size_t lineno = 0, start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    const auto line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    ++lineno;
    const auto body = detail::trim(detail::strip_comment(line));
    if (!body.empty()) {
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) detail::parse_fail(source, lineno, "expected key=value");
      const std::string key(detail::trim(body.substr(0, eq)));
      if (!find_field(key)) {
        throw ArgumentError(source + ":" + std::to_string(lineno) + ": unknown config key '" + key + "'");
      }
      if (!out.emplace(key, std::string(detail::trim(body.substr(eq + 1)))).second) {
        throw ArgumentError(source + ":" + std::to_string(lineno) + ": key '" + key + "' repeated");
      }
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

KeyValues read_config_file(const std::filesystem::path& path) {
  auto in = detail::open_text(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string());
}

void apply_config(FullConfig& cfg, const KeyValues& values) {
  for (const auto& [key, value] : values) {
    const Field* f = find_field(key);
    if (!f) throw ArgumentError("unknown config key '" + key + "'");
    f->set(cfg, value);
  }
}

KeyValues env_overrides(std::span<const std::string> environment) {
  KeyValues out;
  for (const auto& entry : environment) {
    if (entry.rfind("PAE_", 0) != 0) continue;
    const auto eq = entry.find('=');
    const std::string name = entry.substr(0, eq);
    const std::string value = eq == std::string::npos ? std::string() : entry.substr(eq + 1);
    const auto& keys = config_keys();
    auto it = std::find_if(keys.begin(), keys.end(), [&](const std::string& k) { return env_name(k) == name; });
    if (it == keys.end()) throw ArgumentError("environment variable " + name + " names no config key");
    out[*it] = value;
  }
  return out;
}

std::vector<std::string> current_environment() {
  std::vector<std::string> out;
  for (char** e = environ; e && *e; ++e) out.emplace_back(*e);
  return out;
}

FullConfig resolve_config(const std::optional<std::filesystem::path>& file, const KeyValues& flags,
                          std::span<const std::string> environment) {
  KeyValues merged = file ? read_config_file(*file) : KeyValues{};
  for (const auto& [k, v] : flags) {
    if (!find_field(k)) throw ArgumentError("unknown config key '" + k + "'");
    merged[k] = v;
  }
  for (const auto& [k, v] : env_overrides(environment)) merged[k] = v;

  FullConfig cfg;
  if (auto it = merged.find("preset"); it != merged.end() && !it->second.empty()) {
    cfg.preset = it->second;
    cfg.run = preset(it->second);
    if (cfg.run.task != TaskKind::kNodeClassification) {
      cfg.probe.metric = Metric::kRocAuc;
    }
  }
  merged.erase("preset");
  apply_config(cfg, merged);
  return cfg;
}

std::string render_config(const FullConfig& cfg) {
  std::string out;
  for (const auto& f : fields()) out += std::string(f.key) + "=" + f.get(cfg) + "\n";
  return out;
}

}  // namespace graphpae
