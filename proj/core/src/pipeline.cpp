#include "sv2svt/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <json.hpp>
#include <set>
#include <utility>

#include "sv2svt/error.hpp"
#include "sv2svt/hashing.hpp"
#include "sv2svt/lyric_fit.hpp"
#include "sv2svt/melody.hpp"
#include "sv2svt/note_timing.hpp"
#include "sv2svt/phonology.hpp"
#include "sv2svt/subprocess.hpp"
#include "sv2svt/unicode.hpp"
#include "sv2svt/ust.hpp"

namespace sv2svt {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Params = std::vector<std::pair<std::string, std::string>>;

std::string cache_key(std::string_view step, const Params& parts) {
  std::string material = "step=" + std::string(step) + "\nversion=" + std::string(tool_version());
  for (const auto& [k, v] : parts) material += "\n" + k + "=" + v;
  return sha256_hex(material);
}

std::chrono::milliseconds timeout_of(const StageAdapter& adapter) {
  return std::chrono::milliseconds(std::llround(adapter.timeout_s * 1000.0));
}

void check_process(const std::string& stage, const StageAdapter& adapter, const ProcessResult& r) {
  if (r.timed_out) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "timed out after %g s", adapter.timeout_s);
    throw AdapterError(stage, buf, r.err);
  }
  if (r.exit_code != 0) {
    throw AdapterError(stage, "exited with status " + std::to_string(r.exit_code), r.err);
  }
}

struct Produced {
  std::string content;
  std::string diagnostics;
};

/// Runs a file-in/file-out adapter and checks its output against `format`.
Produced invoke_adapter(const PipelineConfig& config, const StageAdapter& adapter,
                        const Params& values, const fs::path& output,
                        std::optional<InterchangeFormat> format) {
  const std::string stage(to_string(adapter.stage));
  std::error_code ec;
  fs::remove(output, ec);
  fs::create_directories(output.parent_path());
  const auto argv = expand_command(config, adapter, values);
  const auto result = run_process(argv, std::nullopt, timeout_of(adapter));
  check_process(stage, adapter, result);
  if (!fs::is_regular_file(output, ec)) {
    throw AdapterError(stage, "produced no output file", result.err);
  }
  Produced produced{read_file(output), result.err};
  if (format) {
    try {
      validate_document(*format, produced.content);
    } catch (const Error& e) {
      throw AdapterError(stage, std::string("invalid output: ") + e.what(), result.err);
    }
  }
  return produced;
}

void write_if_changed(const fs::path& path, std::string_view content) {
  std::error_code ec;
  if (fs::is_regular_file(path, ec)) {
    try {
      if (read_file(path) == content) return;
    } catch (const ValidationError&) {
    }
  }
  write_file(path, content);
}

/// Serves `key` from the cache or produces, writes and stores it.
StageRecord cached_step(StageCache& cache, std::string name, const std::string& key,
                        const fs::path& output, const std::function<Produced()>& produce,
                        std::string& content) {
  StageRecord record{std::move(name), StageStatus::kRan, {}};
  if (auto hit = cache.lookup(key)) {
    content = std::move(*hit);
    write_if_changed(output, content);
    record.status = StageStatus::kCached;
    return record;
  }
  try {
    auto produced = produce();
    content = std::move(produced.content);
    record.diagnostics = std::move(produced.diagnostics);
  } catch (const AdapterError&) {
    throw;
  } catch (const Error& e) {
    throw Error(e.category(), "step '" + record.name + "': " + e.what());
  }
  write_if_changed(output, content);
  cache.store(key, content);
  return record;
}

/// Replays segmentations recorded by the segment stage.
class ReplaySegmenter final : public Segmenter {
 public:
  explicit ReplaySegmenter(std::map<std::string, std::vector<std::string>> table)
      : table_(std::move(table)) {}

  std::vector<std::string> segment(const std::string& sentence) override {
    const auto it = table_.find(sentence);
    if (it == table_.end()) throw ValidationError("no segmentation recorded for '" + sentence + "'");
    return it->second;
  }

 private:
  std::map<std::string, std::vector<std::string>> table_;
};

std::string write_segments(const std::vector<std::pair<std::string, std::vector<std::string>>>& rows) {
  json segments = json::array();
  for (const auto& [text, words] : rows) segments.push_back({{"text", text}, {"words", words}});
  return json{{"schema_version", kSchemaVersion}, {"segments", std::move(segments)}}.dump(2) + '\n';
}

std::map<std::string, std::vector<std::string>> parse_segments(std::string_view content) {
  std::map<std::string, std::vector<std::string>> table;
  const auto doc = json::parse(content);
  for (const auto& row : doc.at("segments")) {
    table[row.at("text").get<std::string>()] = row.at("words").get<std::vector<std::string>>();
  }
  return table;
}

std::string line_dir_name(std::size_t line) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "lines/%03zu", line);
  return buf;
}

struct Shared {
  const PipelineConfig& config;
  StageCache& cache;
  const ReadingDictionary& user_readings;
  std::string user_readings_hash;
  std::optional<AdapterSegmenter>& segmenter;
};

struct LineOutcome {
  std::vector<StageRecord> records;
  std::vector<SyllableNote> notes;
  std::string chosen_text;
  std::vector<std::string> warnings;
};

LineOutcome process_line(Shared& shared, std::size_t line, const TranscriptLine& source,
                         std::vector<SyllableNote> line_notes) {
  const auto& config = shared.config;
  const fs::path dir = config.work_dir / line_dir_name(line);
  const std::string suffix = "[" + std::to_string(line) + "]";
  LineOutcome outcome;

  const fs::path source_path = dir / "source.txt";
  const std::string source_text = source.text + "\n";
  write_if_changed(source_path, source_text);

  const std::size_t target = line_notes.size();
  const auto& translate = *config.adapter(Stage::kTranslate);
  const fs::path candidates_path = dir / "candidates.json";
  std::string candidates_doc;
  outcome.records.push_back(cached_step(
      shared.cache, "translate" + suffix,
      cache_key("translate", {{"command", translate.command},
                              {"input", sha256_hex(source_text)},
                              {"target_syllables", std::to_string(target)}}),
      candidates_path,
      [&] {
        return invoke_adapter(config, translate,
                              {{"input", source_path.string()},
                               {"output", candidates_path.string()},
                               {"target_syllables", std::to_string(target)}},
                              candidates_path, InterchangeFormat::kCandidates);
      },
      candidates_doc));
  const auto candidates = parse_candidates(candidates_doc).candidates;

  std::vector<std::string> sentences;
  for (const auto& c : candidates) sentences.push_back(unicode::nfc(c.text));

  // Segmentation: adapter when configured, else kanji runs.
  std::map<std::string, std::vector<std::string>> table;
  std::string segments_hash = "kanji-runs";
  if (const auto& seg = config.adapter(Stage::kSegment)) {
    std::string segments_doc;
    outcome.records.push_back(cached_step(
        shared.cache, "segment" + suffix,
        cache_key("segment", {{"command", seg->command}, {"input", sha256_hex(candidates_doc)}}),
        dir / "segments.json",
        [&] {
          std::vector<std::pair<std::string, std::vector<std::string>>> rows;
          for (const auto& s : sentences) rows.emplace_back(s, shared.segmenter->segment(s));
          return Produced{write_segments(rows), {}};
        },
        segments_doc));
    table = parse_segments(segments_doc);
    segments_hash = sha256_hex(segments_doc);
  } else {
    outcome.records.push_back({"segment" + suffix, StageStatus::kSkipped, {}});
    KanjiRunSegmenter fallback;
    for (const auto& s : sentences) table[s] = fallback.segment(s);
  }

  // Readings: the user dictionary wins; the adapter fills what it lacks.
  std::set<std::string> unknown;
  for (const auto& [sentence, words] : table) {
    for (const auto& w : words) {
      if (unicode::contains_kanji(w) && shared.user_readings.find(w) == nullptr) unknown.insert(w);
    }
  }
  ReadingDictionary merged = shared.user_readings;
  std::string readings_hash = "none";
  const auto& readings = config.adapter(Stage::kReadings);
  if (readings && !unknown.empty()) {
    std::string request;
    for (const auto& w : unknown) request += w + "\n";
    const fs::path request_path = dir / "kanji.txt";
    write_if_changed(request_path, request);
    const fs::path readings_path = dir / "readings.tsv";
    std::string readings_doc;
    outcome.records.push_back(cached_step(
        shared.cache, "readings" + suffix,
        cache_key("readings", {{"command", readings->command}, {"input", sha256_hex(request)}}),
        readings_path,
        [&] {
          return invoke_adapter(config, *readings,
                                {{"input", request_path.string()},
                                 {"output", readings_path.string()}},
                                readings_path, InterchangeFormat::kReadings);
        },
        readings_doc));
    merged.merge_missing(ReadingDictionary::parse(readings_doc));
    readings_hash = sha256_hex(readings_doc);
  } else {
    outcome.records.push_back({"readings" + suffix, StageStatus::kSkipped, {}});
  }

  ReplaySegmenter replay(std::move(table));
  const std::string notes_doc = write_notes(line_notes);
  std::string fit_doc;
  outcome.records.push_back(cached_step(
      shared.cache, "fit" + suffix,
      cache_key("fit", {{"candidates", sha256_hex(candidates_doc)},
                        {"segments", segments_hash},
                        {"readings", readings_hash},
                        {"user_readings", shared.user_readings_hash},
                        {"notes", sha256_hex(notes_doc)},
                        {"allow_overflow", config.allow_overflow ? "1" : "0"}}),
      dir / "fit.json",
      [&] {
        const auto resolver = make_reading_resolver(replay, merged);
        const auto fit = select_candidate(candidates, target, resolver);
        const auto assigned = assign_lyrics(line_notes, *fit.chosen.reading, config.allow_overflow);
        const json doc = {{"fit", json::parse(write_fit_result(fit))},
                          {"notes", json::parse(write_notes(assigned))}};
        return Produced{doc.dump(2) + '\n', {}};
      },
      fit_doc));

  const auto fit = json::parse(fit_doc);
  outcome.notes = parse_notes(fit.at("notes").dump());
  outcome.chosen_text = fit.at("fit").at("text").get<std::string>();
  if (fit.at("fit").at("fallback_used").get<bool>()) {
    outcome.warnings.push_back("line " + std::to_string(line) +
                               ": no candidate fits; shortest overshoot chosen");
  }
  for (const auto& d : fit.at("fit").at("diagnostics")) {
    outcome.warnings.push_back("line " + std::to_string(line) + " candidate " +
                               std::to_string(d.at("index").get<std::size_t>()) + ": " +
                               d.at("message").get<std::string>());
  }
  return outcome;
}

}  // namespace

// ---------------------------------------------------------------------------
// Cache
// ---------------------------------------------------------------------------

StageCache::StageCache(fs::path dir) : dir_(std::move(dir)) {
  fs::create_directories(dir_ / "objects");
  std::error_code ec;
  if (!fs::is_regular_file(dir_ / "index.json", ec)) return;
  try {
    const auto doc = json::parse(read_file(dir_ / "index.json"));
    for (const auto& [key, value] : doc.at("entries").items()) {
      index_[key] = value.get<std::string>();
    }
  } catch (const std::exception&) {
    index_.clear();  // unreadable index: start cold
  }
}

std::optional<std::string> StageCache::lookup(const std::string& key) {
  std::lock_guard lock(mutex_);
  const auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  try {
    auto content = read_file(dir_ / "objects" / key);
    if (sha256_hex(content) == it->second) return content;
  } catch (const ValidationError&) {
  }
  index_.erase(it);
  return std::nullopt;
}

void StageCache::store(const std::string& key, std::string_view content) {
  std::lock_guard lock(mutex_);
  write_file(dir_ / "objects" / key, content);
  index_[key] = sha256_hex(content);
  save_index();
}

void StageCache::save_index() {
  json entries = json::object();
  for (const auto& [k, v] : index_) entries[k] = v;
  const fs::path tmp = dir_ / "index.json.tmp";
  write_file(tmp, json{{"entries", std::move(entries)}}.dump(2) + '\n');
  fs::rename(tmp, dir_ / "index.json");
}

// ---------------------------------------------------------------------------
// Segment adapter
// ---------------------------------------------------------------------------

AdapterSegmenter::AdapterSegmenter(const PipelineConfig& config, StageAdapter adapter)
    : config_(config), adapter_(std::move(adapter)) {}

std::vector<std::string> AdapterSegmenter::segment(const std::string& sentence) {
  std::lock_guard lock(mutex_);
  const auto argv = expand_command(config_, adapter_, {});
  const auto result = run_process(argv, sentence + "\n", timeout_of(adapter_));
  check_process("segment", adapter_, result);
  std::string_view out = result.out;
  out = out.substr(0, out.find('\n'));
  if (!out.empty() && out.back() == '\r') out.remove_suffix(1);
  std::vector<std::string> words;
  std::size_t pos = 0;
  while (pos < out.size()) {
    const auto space = out.find(' ', pos);
    const auto word = out.substr(pos, space == std::string_view::npos ? out.npos : space - pos);
    if (!word.empty()) words.emplace_back(word);
    if (space == std::string_view::npos) break;
    pos = space + 1;
  }
  if (words.empty()) throw AdapterError("segment", "empty segmentation", result.err);
  return words;
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

std::string_view to_string(StageStatus status) noexcept {
  switch (status) {
    case StageStatus::kRan: return "ran";
    case StageStatus::kCached: return "cached";
    case StageStatus::kSkipped: return "skipped";
  }
  return "?";
}

std::string write_report(const PipelineReport& report) {
  json stages = json::array();
  for (const auto& s : report.stages) {
    stages.push_back(
        {{"name", s.name}, {"status", to_string(s.status)}, {"diagnostics", s.diagnostics}});
  }
  json doc = {{"stages", std::move(stages)},
              {"warnings", report.warnings},
              {"project", report.project_path.string()},
              {"ust", report.ust_path ? json(report.ust_path->string()) : json(nullptr)}};
  return doc.dump(2) + '\n';
}

// ---------------------------------------------------------------------------
// Full run
// ---------------------------------------------------------------------------

PipelineResult run_pipeline(const PipelineConfig& config, const fs::path& audio,
                            const RunOptions& options) {
  validate_config(config);
  std::error_code ec;
  if (!fs::is_regular_file(audio, ec)) {
    throw ValidationError("audio file '" + audio.string() + "' not found");
  }
  const fs::path work = config.work_dir;
  fs::create_directories(work);
  StageCache cache(work / "cache");
  const std::string audio_hash = sha256_file(audio);
  const fs::path audio_abs = fs::absolute(audio);

  const auto dictionary = PronunciationDictionary::load(config.dictionary);
  const std::string dictionary_hash = sha256_file(config.dictionary);
  const ReadingDictionary user_readings =
      config.reading_dictionary ? ReadingDictionary::load(*config.reading_dictionary)
                                : ReadingDictionary{};
  const std::string user_readings_hash = sha256_hex(user_readings.serialize());

  PipelineReport report;

  // Branch A: transcribe -> align -> notes.
  struct AlignBranch {
    std::vector<StageRecord> records;
    std::string transcript_doc;
    std::string notes_doc;
  };
  auto align_branch = [&]() {
    AlignBranch out;
    const auto& transcribe = *config.adapter(Stage::kTranscribe);
    const fs::path transcript_path = work / "transcript.json";
    out.records.push_back(cached_step(
        cache, "transcribe",
        cache_key("transcribe", {{"command", transcribe.command}, {"input", audio_hash}}),
        transcript_path,
        [&] {
          return invoke_adapter(config, transcribe,
                                {{"input", audio_abs.string()}, {"output", transcript_path.string()}},
                                transcript_path, InterchangeFormat::kTranscript);
        },
        out.transcript_doc));

    const auto& align = *config.adapter(Stage::kAlign);
    const fs::path labels_path = work / "labels.tsv";
    std::string labels_doc;
    out.records.push_back(cached_step(
        cache, "align",
        cache_key("align", {{"command", align.command},
                            {"input", sha256_hex(out.transcript_doc)},
                            {"audio", audio_hash}}),
        labels_path,
        [&] {
          return invoke_adapter(config, align,
                                {{"input", transcript_path.string()},
                                 {"audio", audio_abs.string()},
                                 {"output", labels_path.string()}},
                                labels_path, InterchangeFormat::kLabels);
        },
        labels_doc));

    out.records.push_back(cached_step(
        cache, "notes", cache_key("notes", {{"labels", sha256_hex(labels_doc)}}),
        work / "notes.json",
        [&] {
          const auto labels = parse_timed_labels(labels_doc);
          const auto words = syllabify_aligned_words(labels.phonemes);
          return Produced{write_notes(build_notes(labels.phonemes, words)), {}};
        },
        out.notes_doc));
    return out;
  };

  // Branch B: vme -> deviation.
  struct VmeBranch {
    std::vector<StageRecord> records;
    std::string deviation_doc;
  };
  auto vme_branch = [&]() {
    VmeBranch out;
    const auto& vme = *config.adapter(Stage::kVme);
    const fs::path contour_path = work / "contour.csv";
    std::string contour_doc;
    out.records.push_back(cached_step(
        cache, "vme", cache_key("vme", {{"command", vme.command}, {"input", audio_hash}}),
        contour_path,
        [&] {
          return invoke_adapter(config, vme,
                                {{"input", audio_abs.string()}, {"output", contour_path.string()}},
                                contour_path, InterchangeFormat::kContour);
        },
        contour_doc));
    out.records.push_back(cached_step(
        cache, "deviation",
        cache_key("deviation", {{"contour", sha256_hex(contour_doc)},
                                {"smoothing_window", std::to_string(config.smoothing_window)}}),
        work / "deviation.json",
        [&] {
          const auto frames = median_smooth(parse_contour(contour_doc), config.smoothing_window);
          return Produced{write_deviation(contour_to_deviation(frames)), {}};
        },
        out.deviation_doc));
    return out;
  };

  AlignBranch a;
  VmeBranch b;
  switch (options.order) {
    case BranchOrder::kConcurrent: {
      auto vme_future = std::async(std::launch::async, vme_branch);
      std::exception_ptr align_error;
      try {
        a = align_branch();
      } catch (...) {
        align_error = std::current_exception();
      }
      std::exception_ptr vme_error;
      try {
        b = vme_future.get();
      } catch (...) {
        vme_error = std::current_exception();
      }
      if (align_error) std::rethrow_exception(align_error);
      if (vme_error) std::rethrow_exception(vme_error);
      break;
    }
    case BranchOrder::kAlignFirst:
      a = align_branch();
      b = vme_branch();
      break;
    case BranchOrder::kVmeFirst:
      b = vme_branch();
      a = align_branch();
      break;
  }
  report.stages.insert(report.stages.end(), a.records.begin(), a.records.end());
  report.stages.insert(report.stages.end(), b.records.begin(), b.records.end());

  const auto transcript = parse_transcript(a.transcript_doc);
  const auto all_notes = parse_notes(a.notes_doc);
  const auto deviation = parse_deviation(b.deviation_doc);
  const auto ranges = transcript.line_word_ranges();

  // Dictionary checks over the transcript: OOV policy, then syllable counts
  // against the aligner-derived notes (warnings only).
  std::vector<std::vector<SyllableNote>> line_notes(ranges.size());
  for (const auto& note : all_notes) {
    std::size_t line = 0;
    while (line < ranges.size() && note.word_index >= ranges[line].second) ++line;
    if (line == ranges.size() || note.word_index < ranges[line].first) {
      throw ValidationError("note at " + format_seconds(note.onset) + "s has word_index " +
                            std::to_string(note.word_index) + " outside every transcript line");
    }
    line_notes[line].push_back(note);
  }
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    std::size_t expected = 0;
    try {
      expected = count_syllables(transcript.lines[i].text, dictionary, config.oov);
    } catch (const Error& e) {
      throw Error(e.category(), "line " + std::to_string(i) + ": " + e.what());
    }
    if (expected != line_notes[i].size()) {
      report.warnings.push_back("line " + std::to_string(i) + ": dictionary gives " +
                                std::to_string(expected) + " syllables, alignment gives " +
                                std::to_string(line_notes[i].size()));
    }
  }

  std::optional<AdapterSegmenter> segmenter;
  if (const auto& seg = config.adapter(Stage::kSegment)) segmenter.emplace(config, *seg);
  Shared shared{config, cache, user_readings, user_readings_hash, segmenter};

  std::vector<std::optional<LineOutcome>> outcomes(ranges.size());
  {
    std::vector<std::pair<std::size_t, std::future<LineOutcome>>> futures;
    for (std::size_t i = 0; i < ranges.size(); ++i) {
      if (line_notes[i].empty()) {
        report.warnings.push_back("line " + std::to_string(i) + ": no notes; line skipped");
        continue;
      }
      const auto policy = options.parallel_lines ? std::launch::async : std::launch::deferred;
      futures.emplace_back(i, std::async(policy, process_line, std::ref(shared), i,
                                         std::cref(transcript.lines[i]), line_notes[i]));
    }
    std::exception_ptr first_error;
    for (auto& [i, f] : futures) {
      try {
        outcomes[i] = f.get();
      } catch (...) {
        if (!first_error) first_error = std::current_exception();
      }
    }
    if (first_error) std::rethrow_exception(first_error);
  }

  SynthProject project;
  project.deviation = deviation;
  project.metadata.tool_version = std::string(tool_version());
  std::vector<std::string> sources;
  std::vector<std::string> targets;
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    sources.push_back(transcript.lines[i].text);
    if (!outcomes[i]) continue;
    auto& o = *outcomes[i];
    report.stages.insert(report.stages.end(), o.records.begin(), o.records.end());
    report.warnings.insert(report.warnings.end(), o.warnings.begin(), o.warnings.end());
    targets.push_back(o.chosen_text);
    project.notes.insert(project.notes.end(), o.notes.begin(), o.notes.end());
  }
  auto join = [](const std::vector<std::string>& parts) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "\n" : "") + parts[i];
    return s;
  };
  project.metadata.source_text = join(sources);
  project.metadata.target_text = join(targets);
  if (project.notes.empty()) throw ValidationError("no line produced any notes");

  std::string project_doc;
  const std::string project_input = write_project(project);
  report.project_path = work / "project.json";
  report.stages.push_back(cached_step(
      cache, "project", cache_key("project", {{"content", sha256_hex(project_input)}}),
      report.project_path, [&] { return Produced{project_input, {}}; }, project_doc));

  if (config.write_ust) {
    UstOptions ust;
    ust.tempo_bpm = config.tempo_bpm;
    ust.tick_resolution = config.tick_resolution;
    ust.encoding = config.ust_encoding;
    std::string ust_doc;
    report.ust_path = work / "project.ust";
    std::vector<std::string> ust_warnings;
    report.stages.push_back(cached_step(
        cache, "ust",
        cache_key("ust", {{"project", sha256_hex(project_doc)},
                          {"tempo_bpm", std::to_string(ust.tempo_bpm)},
                          {"tick_resolution", std::to_string(ust.tick_resolution)},
                          {"encoding", ust.encoding == UstEncoding::kUtf8 ? "utf-8" : "shift_jis"}}),
        *report.ust_path,
        [&] {
          auto exported = export_ust(project, ust);
          ust_warnings = std::move(exported.warnings);
          return Produced{std::move(exported.text), {}};
        },
        ust_doc));
    report.warnings.insert(report.warnings.end(), ust_warnings.begin(), ust_warnings.end());
  }

  write_file(work / "report.json", write_report(report));
  return {std::move(project), std::move(report)};
}

// ---------------------------------------------------------------------------
// Single stage
// ---------------------------------------------------------------------------

StageRun run_stage(const PipelineConfig& config, Stage stage, const StageInputs& inputs) {
  const auto& adapter = config.adapter(stage);
  const std::string name(to_string(stage));
  if (!adapter) throw ConfigError("adapter." + name + ".command is missing");
  std::error_code ec;
  if (!fs::is_regular_file(inputs.input, ec)) {
    throw ValidationError("input '" + inputs.input.string() + "' not found");
  }
  if (stage == Stage::kAlign && !inputs.audio) throw ConfigError("align needs --audio");
  if (stage == Stage::kTranslate && !inputs.target_syllables) {
    throw ConfigError("translate needs --target-syllables");
  }

  static constexpr const char* kExtensions[] = {".json", ".tsv", ".csv", ".json", ".txt", ".tsv"};
  StageRun run;
  run.output = inputs.output ? *inputs.output
                             : config.work_dir / "stages" /
                                   (name + kExtensions[static_cast<std::size_t>(stage)]);
  fs::create_directories(config.work_dir);
  StageCache cache(config.work_dir / "cache");

  const std::string input_doc = read_file(inputs.input);
  Params key{{"command", adapter->command}, {"input", sha256_hex(input_doc)}};
  Params values{{"input", fs::absolute(inputs.input).string()},
                {"output", fs::absolute(run.output).string()}};
  if (inputs.audio) {
    key.emplace_back("audio", sha256_file(*inputs.audio));
    values.emplace_back("audio", fs::absolute(*inputs.audio).string());
  }
  if (inputs.target_syllables) {
    key.emplace_back("target_syllables", std::to_string(*inputs.target_syllables));
    values.emplace_back("target_syllables", std::to_string(*inputs.target_syllables));
  }

  std::optional<InterchangeFormat> format;
  switch (stage) {
    case Stage::kTranscribe: format = InterchangeFormat::kTranscript; break;
    case Stage::kAlign: format = InterchangeFormat::kLabels; break;
    case Stage::kVme: format = InterchangeFormat::kContour; break;
    case Stage::kTranslate: format = InterchangeFormat::kCandidates; break;
    case Stage::kReadings: format = InterchangeFormat::kReadings; break;
    case Stage::kSegment: break;
  }

  std::string content;
  auto record = cached_step(
      cache, name, cache_key(stage == Stage::kSegment ? "segment-lines" : name, key), run.output,
      [&]() -> Produced {
        if (stage != Stage::kSegment) return invoke_adapter(config, *adapter, values, run.output, format);
        AdapterSegmenter segmenter(config, *adapter);
        std::string out;
        std::size_t pos = 0;
        while (pos < input_doc.size()) {
          auto eol = input_doc.find('\n', pos);
          if (eol == std::string::npos) eol = input_doc.size();
          std::string line = input_doc.substr(pos, eol - pos);
          pos = eol + 1;
          if (!line.empty() && line.back() == '\r') line.pop_back();
          if (line.empty()) continue;
          const auto words = segmenter.segment(unicode::nfc(line));
          for (std::size_t i = 0; i < words.size(); ++i) out += (i ? " " : "") + words[i];
          out += '\n';
        }
        return Produced{out, {}};
      },
      content);
  run.status = record.status;
  run.diagnostics = record.diagnostics;
  return run;
}

}  // namespace sv2svt
