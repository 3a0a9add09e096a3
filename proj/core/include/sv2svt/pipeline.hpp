#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sv2svt/interchange.hpp"
#include "sv2svt/ja_moraic.hpp"
#include "sv2svt/pipeline_config.hpp"

namespace sv2svt {

/// Content-addressed store under work_dir/cache. Keys are hex digests of a
/// step's name, command, parameters and input hashes; the index is the only
/// state shared between concurrent steps.
class StageCache {
 public:
  explicit StageCache(std::filesystem::path dir);

  /// Stored content, or nothing when absent or corrupted.
  std::optional<std::string> lookup(const std::string& key);
  void store(const std::string& key, std::string_view content);

 private:
  void save_index();

  std::filesystem::path dir_;
  std::mutex mutex_;
  std::map<std::string, std::string> index_;  // key -> content sha256
};

/// Segmenter backed by the segment adapter: one sentence on stdin, one line
/// of space-separated words on stdout. Calls are serialized.
class AdapterSegmenter final : public Segmenter {
 public:
  AdapterSegmenter(const PipelineConfig& config, StageAdapter adapter);
  std::vector<std::string> segment(const std::string& sentence) override;

 private:
  const PipelineConfig& config_;
  StageAdapter adapter_;
  std::mutex mutex_;
};

enum class StageStatus { kRan, kCached, kSkipped };

std::string_view to_string(StageStatus status) noexcept;

struct StageRecord {
  std::string name;  // "transcribe", "translate[0]", ...
  StageStatus status = StageStatus::kRan;
  std::string diagnostics;  // adapter stderr
};

struct PipelineReport {
  std::vector<StageRecord> stages;
  std::vector<std::string> warnings;
  std::filesystem::path project_path;
  std::optional<std::filesystem::path> ust_path;
};

std::string write_report(const PipelineReport& report);

/// Order of the two independent branches (transcribe/align/notes and
/// vme/deviation). Every order yields the same output.
enum class BranchOrder { kConcurrent, kAlignFirst, kVmeFirst };

struct RunOptions {
  BranchOrder order = BranchOrder::kConcurrent;
  bool parallel_lines = true;
};

struct PipelineResult {
  SynthProject project;
  PipelineReport report;
};

/// Full run: adapters, note building, per-line lyric fitting, merge and
/// export. Intermediates land in work_dir; report.json summarizes the run.
/// The audio file is only hashed and passed to adapters.
PipelineResult run_pipeline(const PipelineConfig& config, const std::filesystem::path& audio,
                            const RunOptions& options = {});

struct StageInputs {
  std::filesystem::path input;
  std::optional<std::filesystem::path> audio;       // align
  std::optional<std::size_t> target_syllables;      // translate
  std::optional<std::filesystem::path> output;      // default under work_dir/stages
};

struct StageRun {
  std::filesystem::path output;
  StageStatus status = StageStatus::kRan;
  std::string diagnostics;
};

/// One adapter stage with the same caching as a full run. For segment the
/// input holds one sentence per line and the output one segmented line each.
StageRun run_stage(const PipelineConfig& config, Stage stage, const StageInputs& inputs);

}  // namespace sv2svt
