#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sv2svt/phonology.hpp"
#include "sv2svt/ust.hpp"

namespace sv2svt {

enum class Stage { kTranscribe, kAlign, kVme, kTranslate, kSegment, kReadings };

inline constexpr std::array<Stage, 6> kAllStages = {Stage::kTranscribe, Stage::kAlign,
                                                    Stage::kVme,        Stage::kTranslate,
                                                    Stage::kSegment,    Stage::kReadings};

std::string_view to_string(Stage stage) noexcept;
std::optional<Stage> parse_stage(std::string_view name) noexcept;

/// Segment and readings may be left unconfigured; the others may not.
bool stage_required(Stage stage) noexcept;

/// Placeholders a stage's command must contain.
std::vector<std::string_view> required_placeholders(Stage stage);
/// Placeholders a stage's command may contain.
std::vector<std::string_view> allowed_placeholders(Stage stage);

struct StageAdapter {
  Stage stage = Stage::kTranscribe;
  std::string command;  // template, split like a shell command line
  double timeout_s = 300.0;
};

struct PipelineConfig {
  std::array<std::optional<StageAdapter>, kAllStages.size()> adapters;
  std::filesystem::path base_dir;  // relative paths resolve against this
  std::filesystem::path work_dir = "work";
  std::string source_language = "en";
  std::string target_language = "ja";
  double tempo_bpm = 120.0;
  int tick_resolution = 480;
  OovPolicy oov = OovPolicy::kError;
  bool allow_overflow = false;
  int smoothing_window = 1;
  std::filesystem::path dictionary;
  std::optional<std::filesystem::path> reading_dictionary;
  bool write_ust = true;
  UstEncoding ust_encoding = UstEncoding::kUtf8;

  const std::optional<StageAdapter>& adapter(Stage stage) const;
  std::optional<StageAdapter>& adapter(Stage stage);
};

/// `key = value` lines; '#' starts a comment line. Throws ConfigError.
PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir);

/// Reads a config file. SV2SVT_WORKDIR, when set, replaces work_dir.
PipelineConfig load_config(const std::filesystem::path& file);

/// Checks required adapters, placeholders, executables and data files.
/// Throws ConfigError; nothing is run.
void validate_config(const PipelineConfig& config);

/// Splits the stage's command and substitutes {name} placeholders from
/// `values`. The executable is resolved as in validate_config.
std::vector<std::string> expand_command(const PipelineConfig& config, const StageAdapter& adapter,
                                        const std::vector<std::pair<std::string, std::string>>& values);

}  // namespace sv2svt
