#include "sv2svt/pipeline_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include "sv2svt/error.hpp"
#include "sv2svt/hashing.hpp"
#include "sv2svt/subprocess.hpp"

namespace sv2svt {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_value(std::size_t line, std::string_view key, std::string_view expected) {
  throw ConfigError("line " + std::to_string(line) + ": " + std::string(key) + " must be " +
                    std::string(expected));
}

bool parse_bool(std::string_view v, bool& out) {
  if (v == "true" || v == "yes" || v == "1") {
    out = true;
  } else if (v == "false" || v == "no" || v == "0") {
    out = false;
  } else {
    return false;
  }
  return true;
}

double parse_positive(std::size_t line, std::string_view key, std::string_view v) {
  const std::string s(v);
  char* end = nullptr;
  const double d = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(d) || d <= 0.0) {
    bad_value(line, key, "a positive number");
  }
  return d;
}

int parse_int(std::size_t line, std::string_view key, std::string_view v, int min) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty() || out < min) {
    bad_value(line, key, "an integer >= " + std::to_string(min));
  }
  return out;
}

fs::path resolve(const fs::path& base, std::string_view v) {
  fs::path p(v);
  return p.is_relative() ? (base / p).lexically_normal() : p;
}

// {name} tokens in a command template.
std::vector<std::string> placeholders_in(std::string_view command) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while ((pos = command.find('{', pos)) != std::string_view::npos) {
    const auto close = command.find('}', pos);
    if (close == std::string_view::npos) break;
    const auto name = command.substr(pos + 1, close - pos - 1);
    if (!name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
          return (c >= 'a' && c <= 'z') || c == '_';
        })) {
      out.emplace_back(command.substr(pos, close - pos + 1));
    }
    pos = close + 1;
  }
  return out;
}

}  // namespace

std::string_view to_string(Stage stage) noexcept {
  switch (stage) {
    case Stage::kTranscribe: return "transcribe";
    case Stage::kAlign: return "align";
    case Stage::kVme: return "vme";
    case Stage::kTranslate: return "translate";
    case Stage::kSegment: return "segment";
    case Stage::kReadings: return "readings";
  }
  return "?";
}

std::optional<Stage> parse_stage(std::string_view name) noexcept {
  for (Stage s : kAllStages) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

bool stage_required(Stage stage) noexcept {
  return stage != Stage::kSegment && stage != Stage::kReadings;
}

std::vector<std::string_view> required_placeholders(Stage stage) {
  switch (stage) {
    case Stage::kSegment: return {};
    case Stage::kTranslate: return {"{input}", "{output}", "{target_syllables}"};
    default: return {"{input}", "{output}"};
  }
}

std::vector<std::string_view> allowed_placeholders(Stage stage) {
  auto out = required_placeholders(stage);
  if (stage == Stage::kAlign) out.push_back("{audio}");
  return out;
}

const std::optional<StageAdapter>& PipelineConfig::adapter(Stage stage) const {
  return adapters[static_cast<std::size_t>(stage)];
}

std::optional<StageAdapter>& PipelineConfig::adapter(Stage stage) {
  return adapters[static_cast<std::size_t>(stage)];
}

PipelineConfig parse_config(std::string_view text, const fs::path& base_dir) {
  PipelineConfig config;
  config.base_dir = base_dir;
  config.work_dir = resolve(base_dir, "work");
  std::vector<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const auto line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" +
                        std::string(key) + "'");
    }
    seen.emplace_back(key);

    if (key.starts_with("adapter.")) {
      const auto rest = key.substr(8);
      const auto dot = rest.find('.');
      const auto stage = parse_stage(rest.substr(0, dot));
      const auto field = dot == std::string_view::npos ? std::string_view{} : rest.substr(dot + 1);
      if (!stage || (field != "command" && field != "timeout_s")) {
        throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" +
                          std::string(key) + "'");
      }
      auto& slot = config.adapter(*stage);
      if (!slot) slot = StageAdapter{*stage, "", 300.0};
      if (field == "command") {
        slot->command = std::string(value);
      } else {
        slot->timeout_s = parse_positive(line_no, key, value);
      }
    } else if (key == "work_dir") {
      config.work_dir = resolve(base_dir, value);
    } else if (key == "source_language") {
      config.source_language = std::string(value);
    } else if (key == "target_language") {
      config.target_language = std::string(value);
    } else if (key == "tempo_bpm") {
      config.tempo_bpm = parse_positive(line_no, key, value);
    } else if (key == "tick_resolution") {
      config.tick_resolution = parse_int(line_no, key, value, 1);
    } else if (key == "oov") {
      if (value == "error") {
        config.oov = OovPolicy::kError;
      } else if (value == "skip") {
        config.oov = OovPolicy::kSkip;
      } else {
        bad_value(line_no, key, "error or skip");
      }
    } else if (key == "allow_overflow") {
      if (!parse_bool(value, config.allow_overflow)) bad_value(line_no, key, "true or false");
    } else if (key == "smoothing_window") {
      config.smoothing_window = parse_int(line_no, key, value, 1);
      if (config.smoothing_window % 2 == 0) bad_value(line_no, key, "odd");
    } else if (key == "dictionary") {
      config.dictionary = resolve(base_dir, value);
    } else if (key == "reading_dictionary") {
      config.reading_dictionary = resolve(base_dir, value);
    } else if (key == "ust") {
      if (!parse_bool(value, config.write_ust)) bad_value(line_no, key, "true or false");
    } else if (key == "ust_encoding") {
      if (value == "utf-8") {
        config.ust_encoding = UstEncoding::kUtf8;
      } else if (value == "shift_jis") {
        config.ust_encoding = UstEncoding::kShiftJis;
      } else {
        bad_value(line_no, key, "utf-8 or shift_jis");
      }
    } else {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) +
                        "'");
    }
  }
  for (const auto& a : config.adapters) {
    if (a && a->command.empty()) {
      throw ConfigError("adapter." + std::string(to_string(a->stage)) + ".command is missing");
    }
  }
  return config;
}

PipelineConfig load_config(const fs::path& file) {
  std::string text;
  try {
    text = read_file(file);
  } catch (const ValidationError&) {
    throw ConfigError("cannot read config '" + file.string() + "'");
  }
  const auto base = fs::absolute(file).parent_path();
  auto config = parse_config(text, base);
  if (const char* env = std::getenv("SV2SVT_WORKDIR"); env != nullptr && *env != '\0') {
    config.work_dir = fs::absolute(env).lexically_normal();
  }
  return config;
}

void validate_config(const PipelineConfig& config) {
  if (config.source_language != "en") {
    throw ConfigError("source_language must be en, got '" + config.source_language + "'");
  }
  if (config.target_language != "ja") {
    throw ConfigError("target_language must be ja, got '" + config.target_language + "'");
  }
  for (Stage stage : kAllStages) {
    const auto& adapter = config.adapter(stage);
    const std::string name(to_string(stage));
    if (!adapter) {
      if (stage_required(stage)) throw ConfigError("adapter." + name + ".command is missing");
      continue;
    }
    const auto words = split_command(adapter->command);
    if (words.empty()) throw ConfigError("adapter." + name + ".command is empty");
    for (auto ph : required_placeholders(stage)) {
      if (adapter->command.find(ph) == std::string::npos) {
        throw ConfigError("adapter." + name + ".command lacks " + std::string(ph));
      }
    }
    const auto allowed = allowed_placeholders(stage);
    for (const auto& ph : placeholders_in(adapter->command)) {
      if (std::find(allowed.begin(), allowed.end(), ph) == allowed.end()) {
        throw ConfigError("adapter." + name + ".command has unknown placeholder " + ph);
      }
    }
    if (!find_executable(words.front(), config.base_dir)) {
      throw ConfigError("adapter." + name + ": executable '" + words.front() + "' not found");
    }
  }
  std::error_code ec;
  if (config.dictionary.empty()) throw ConfigError("dictionary is missing");
  if (!fs::is_regular_file(config.dictionary, ec)) {
    throw ConfigError("dictionary '" + config.dictionary.string() + "' not found");
  }
  if (config.reading_dictionary && !fs::is_regular_file(*config.reading_dictionary, ec)) {
    throw ConfigError("reading_dictionary '" + config.reading_dictionary->string() +
                      "' not found");
  }
}

std::vector<std::string> expand_command(
    const PipelineConfig& config, const StageAdapter& adapter,
    const std::vector<std::pair<std::string, std::string>>& values) {
  auto words = split_command(adapter.command);
  if (words.empty()) throw ConfigError("adapter command is empty");
  const auto exe = find_executable(words.front(), config.base_dir);
  if (!exe) throw ConfigError("executable '" + words.front() + "' not found");
  words.front() = exe->string();
  for (std::size_t i = 1; i < words.size(); ++i) {
    for (const auto& [name, value] : values) {
      const std::string token = "{" + name + "}";
      std::size_t at = 0;
      while ((at = words[i].find(token, at)) != std::string::npos) {
        words[i].replace(at, token.size(), value);
        at += value.size();
      }
    }
  }
  return words;
}

}  // namespace sv2svt
