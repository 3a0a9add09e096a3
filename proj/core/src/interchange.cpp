#include "sv2svt/interchange.hpp"

#include <cmath>
#include <json.hpp>

#include "sv2svt/error.hpp"
#include "sv2svt/ja_moraic.hpp"

namespace sv2svt {

using nlohmann::json;

namespace {

std::string dump(const json& doc) {
  return doc.dump(2, ' ', false, json::error_handler_t::strict) + '\n';
}

json parse_json(std::string_view document) {
  try {
    return json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("invalid JSON: ") + e.what());
  }
}

std::string join_path(const std::string& parent, const char* key) {
  return parent == "$" ? key : parent + "." + key;
}

const json& member(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(join_path(path, key), "missing field");
  return *it;
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw SchemaError(path, "expected a string");
  return v.get<std::string>();
}

const json& as_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw SchemaError(path, "expected an array");
  return v;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw SchemaError(path, "expected a finite number");
  return d;
}

std::size_t as_index(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw SchemaError(path, "expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw SchemaError(path, "expected a boolean");
  return v.get<bool>();
}

/// Canonical documents carry "0.100000"; plain numbers are accepted too.
Micros as_time(const json& v, const std::string& path) {
  std::optional<Micros> t;
  if (v.is_string()) {
    t = parse_seconds(v.get<std::string>());
  } else if (v.is_number()) {
    const double d = v.get<double>();
    if (std::isfinite(d)) t = Micros::from_seconds(d);
  }
  if (!t) throw SchemaError(path, "expected seconds as a decimal string");
  if (t->count() < 0) throw SchemaError(path, "negative time");
  return *t;
}

void check_schema_version(const json& doc, bool required) {
  auto it = doc.find("schema_version");
  if (it == doc.end()) {
    if (required) throw SchemaError("schema_version", "missing field");
    return;
  }
  if (!it->is_string() || it->get<std::string>() != kSchemaVersion) {
    throw SchemaError("schema_version", "unsupported version, expected \"" +
                                            std::string(kSchemaVersion) + "\"");
  }
}

json note_to_json(const SyllableNote& n) {
  json syllable = json::array();
  for (const auto& p : n.syllable.phonemes) syllable.push_back(p.to_string());
  json out = {
      {"onset_s", format_seconds(n.onset)},
      {"duration_s", format_seconds(n.duration)},
      {"syllable", std::move(syllable)},
      {"word_index", n.word_index},
      {"vowelless_merged", n.vowelless_merged},
  };
  if (n.lyric) out["lyric"] = *n.lyric;
  return out;
}

SyllableNote note_from_json(const json& v, const std::string& path) {
  SyllableNote n;
  n.onset = as_time(member(v, "onset_s", path), path + ".onset_s");
  n.duration = as_time(member(v, "duration_s", path), path + ".duration_s");
  n.word_index = as_index(member(v, "word_index", path), path + ".word_index");
  if (auto it = v.find("vowelless_merged"); it != v.end()) {
    n.vowelless_merged = as_bool(*it, path + ".vowelless_merged");
  }
  if (auto it = v.find("lyric"); it != v.end() && !it->is_null()) {
    n.lyric = as_string(*it, path + ".lyric");
  }
  const auto& syl = as_array(member(v, "syllable", path), path + ".syllable");
  std::vector<Phoneme> phonemes;
  for (std::size_t i = 0; i < syl.size(); ++i) {
    const auto p = path + ".syllable[" + std::to_string(i) + "]";
    try {
      phonemes.push_back(parse_phoneme(as_string(syl[i], p)));
    } catch (const ParseError& e) {
      throw SchemaError(p, e.what());
    }
  }
  try {
    n.syllable = make_syllable(std::move(phonemes));
  } catch (const NoNucleusError& e) {
    throw SchemaError(path + ".syllable", e.what());
  }
  return n;
}

json deviation_to_json(const DeviationCurve& curve) {
  json out = json::array();
  for (const auto& p : curve.points) {
    out.push_back({{"time_s", format_seconds(p.time)}, {"semitones", p.semitones}});
  }
  return out;
}

DeviationCurve deviation_from_json(const json& v, const std::string& path) {
  DeviationCurve curve;
  const auto& arr = as_array(v, path);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto p = path + "[" + std::to_string(i) + "]";
    curve.points.push_back({as_time(member(arr[i], "time_s", p), p + ".time_s"),
                            as_number(member(arr[i], "semitones", p), p + ".semitones")});
  }
  return curve;
}

void validate_deviation(const DeviationCurve& curve, const std::string& path) {
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const auto p = path + "[" + std::to_string(i) + "]";
    if (!std::isfinite(curve.points[i].semitones)) {
      throw SchemaError(p + ".semitones", "must be finite");
    }
    if (i > 0 && !(curve.points[i - 1].time < curve.points[i].time)) {
      throw SchemaError(p + ".time_s", "times must be strictly increasing");
    }
  }
}

}  // namespace

std::string_view tool_version() noexcept { return SV2SVT_VERSION; }

// ---------------------------------------------------------------------------
// Project
// ---------------------------------------------------------------------------

void validate_project(const SynthProject& project) {
  if (project.base_pitch != kBasePitch) {
    throw SchemaError("base_pitch", "must be " + std::to_string(kBasePitch));
  }
  if (project.notes.empty()) throw SchemaError("notes", "project has no notes");
  for (std::size_t i = 0; i < project.notes.size(); ++i) {
    const auto& n = project.notes[i];
    const auto p = "notes[" + std::to_string(i) + "]";
    if (!n.lyric || n.lyric->empty()) throw SchemaError(p + ".lyric", "lyric must be non-empty");
    if (n.onset.count() < 0) throw SchemaError(p + ".onset_s", "negative onset");
    if (n.duration.count() <= 0) throw SchemaError(p + ".duration_s", "duration must be positive");
    if (i > 0 && n.onset < project.notes[i - 1].onset) {
      throw SchemaError(p + ".onset_s", "notes must be sorted by onset");
    }
    if (n.syllable.nucleus_index >= n.syllable.phonemes.size() ||
        !n.syllable.nucleus().is_vowel() || count_vowels(n.syllable.phonemes) != 1) {
      throw SchemaError(p + ".syllable", "syllable must hold exactly one vowel");
    }
  }
  validate_deviation(project.deviation, "deviation");
}

std::string write_project(const SynthProject& project) {
  validate_project(project);
  json notes = json::array();
  for (const auto& n : project.notes) notes.push_back(note_to_json(n));
  json doc = {
      {"schema_version", kSchemaVersion},
      {"base_pitch", project.base_pitch},
      {"notes", std::move(notes)},
      {"deviation", deviation_to_json(project.deviation)},
      {"metadata",
       {{"source_text", project.metadata.source_text},
        {"target_text", project.metadata.target_text},
        {"tool_version", project.metadata.tool_version}}},
  };
  return dump(doc);
}

SynthProject parse_project(std::string_view document) {
  const json doc = parse_json(document);
  if (!doc.is_object()) throw SchemaError("$", "expected an object");
  check_schema_version(doc, true);

  SynthProject project;
  const auto& pitch = member(doc, "base_pitch", "$");
  if (!pitch.is_number_integer()) throw SchemaError("base_pitch", "expected an integer");
  project.base_pitch = pitch.get<int>();

  const auto& notes = as_array(member(doc, "notes", "$"), "notes");
  for (std::size_t i = 0; i < notes.size(); ++i) {
    project.notes.push_back(note_from_json(notes[i], "notes[" + std::to_string(i) + "]"));
  }
  project.deviation = deviation_from_json(member(doc, "deviation", "$"), "deviation");

  const auto& meta = member(doc, "metadata", "$");
  project.metadata.source_text =
      as_string(member(meta, "source_text", "metadata"), "metadata.source_text");
  project.metadata.target_text =
      as_string(member(meta, "target_text", "metadata"), "metadata.target_text");
  project.metadata.tool_version =
      as_string(member(meta, "tool_version", "metadata"), "metadata.tool_version");

  validate_project(project);
  return project;
}

// ---------------------------------------------------------------------------
// Transcript
// ---------------------------------------------------------------------------

std::vector<std::string> Transcript::words() const {
  std::vector<std::string> out;
  for (const auto& line : lines) {
    for (auto& w : split_words(line.text)) out.push_back(std::move(w));
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> Transcript::line_word_ranges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t next = 0;
  for (const auto& line : lines) {
    const auto count = split_words(line.text).size();
    out.emplace_back(next, next + count);
    next += count;
  }
  return out;
}

Transcript parse_transcript(std::string_view document) {
  const json doc = parse_json(document);
  if (!doc.is_object()) throw SchemaError("$", "expected an object");
  check_schema_version(doc, false);
  Transcript t;
  const auto& lines = as_array(member(doc, "lines", "$"), "lines");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto p = "lines[" + std::to_string(i) + "]";
    TranscriptLine line;
    line.text = as_string(member(lines[i], "text", p), p + ".text");
    line.start = as_time(member(lines[i], "start_s", p), p + ".start_s");
    line.end = as_time(member(lines[i], "end_s", p), p + ".end_s");
    if (line.end < line.start) throw SchemaError(p + ".end_s", "line ends before it starts");
    if (!t.lines.empty() && line.start < t.lines.back().end) {
      throw SchemaError(p + ".start_s", "line timings are not monotonic");
    }
    t.lines.push_back(std::move(line));
  }
  return t;
}

std::string write_transcript(const Transcript& transcript) {
  json lines = json::array();
  for (const auto& l : transcript.lines) {
    lines.push_back({{"text", l.text},
                     {"start_s", format_seconds(l.start)},
                     {"end_s", format_seconds(l.end)}});
  }
  return dump({{"schema_version", kSchemaVersion}, {"lines", std::move(lines)}});
}

// ---------------------------------------------------------------------------
// Candidates
// ---------------------------------------------------------------------------

CandidateSet parse_candidates(std::string_view document) {
  const json doc = parse_json(document);
  if (!doc.is_object()) throw SchemaError("$", "expected an object");
  check_schema_version(doc, false);
  CandidateSet set;
  set.target_syllables = as_index(member(doc, "target_syllables", "$"), "target_syllables");
  const auto& cands = as_array(member(doc, "candidates", "$"), "candidates");
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const auto p = "candidates[" + std::to_string(i) + "]";
    TranslationCandidate c;
    c.text = as_string(member(cands[i], "text", p), p + ".text");
    c.beam_score = as_number(member(cands[i], "score", p), p + ".score");
    set.candidates.push_back(std::move(c));
  }
  return set;
}

std::string write_candidates(const CandidateSet& set) {
  json cands = json::array();
  for (const auto& c : set.candidates) cands.push_back({{"text", c.text}, {"score", c.beam_score}});
  return dump({{"target_syllables", set.target_syllables}, {"candidates", std::move(cands)}});
}

// ---------------------------------------------------------------------------
// Core stage outputs
// ---------------------------------------------------------------------------

std::string write_notes(std::span<const SyllableNote> notes) {
  json arr = json::array();
  for (const auto& n : notes) arr.push_back(note_to_json(n));
  return dump({{"schema_version", kSchemaVersion}, {"notes", std::move(arr)}});
}

std::vector<SyllableNote> parse_notes(std::string_view document) {
  const json doc = parse_json(document);
  if (!doc.is_object()) throw SchemaError("$", "expected an object");
  check_schema_version(doc, false);
  const auto& arr = as_array(member(doc, "notes", "$"), "notes");
  std::vector<SyllableNote> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto p = "notes[" + std::to_string(i) + "]";
    auto note = note_from_json(arr[i], p);
    if (note.duration.count() <= 0) throw SchemaError(p + ".duration_s", "duration must be positive");
    out.push_back(std::move(note));
  }
  return out;
}

std::string write_deviation(const DeviationCurve& curve) {
  validate_deviation(curve, "deviation");
  return dump({{"schema_version", kSchemaVersion}, {"deviation", deviation_to_json(curve)}});
}

DeviationCurve parse_deviation(std::string_view document) {
  const json doc = parse_json(document);
  if (!doc.is_object()) throw SchemaError("$", "expected an object");
  check_schema_version(doc, false);
  auto curve = deviation_from_json(member(doc, "deviation", "$"), "deviation");
  validate_deviation(curve, "deviation");
  return curve;
}

std::string write_fit_result(const FitResult& fit) {
  json reading = json::array();
  if (fit.chosen.reading) {
    for (const auto& t : fit.chosen.reading->reading) reading.push_back(t.surface);
  }
  json diagnostics = json::array();
  for (const auto& d : fit.diagnostics) {
    diagnostics.push_back({{"index", d.index}, {"message", d.message}});
  }
  return dump({
      {"chosen_index", fit.chosen_index},
      {"text", fit.chosen.text},
      {"score", fit.chosen.beam_score},
      {"reading", std::move(reading)},
      {"target_syllables", fit.target_syllables},
      {"mora_count", fit.mora_count},
      {"deficit", fit.deficit},
      {"fallback_used", fit.fallback_used},
      {"diagnostics", std::move(diagnostics)},
  });
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

std::string_view to_string(InterchangeFormat format) noexcept {
  switch (format) {
    case InterchangeFormat::kTranscript: return "transcript";
    case InterchangeFormat::kLabels: return "labels";
    case InterchangeFormat::kContour: return "contour";
    case InterchangeFormat::kCandidates: return "candidates";
    case InterchangeFormat::kReadings: return "readings";
    case InterchangeFormat::kNotes: return "notes";
    case InterchangeFormat::kProject: return "project";
  }
  return "unknown";
}

bool parse_format(std::string_view name, InterchangeFormat& out) noexcept {
  for (auto f : {InterchangeFormat::kTranscript, InterchangeFormat::kLabels,
                 InterchangeFormat::kContour, InterchangeFormat::kCandidates,
                 InterchangeFormat::kReadings, InterchangeFormat::kNotes,
                 InterchangeFormat::kProject}) {
    if (to_string(f) == name) {
      out = f;
      return true;
    }
  }
  return false;
}

void validate_document(InterchangeFormat format, std::string_view content) {
  switch (format) {
    case InterchangeFormat::kTranscript:
      parse_transcript(content);
      return;
    case InterchangeFormat::kLabels:
      parse_timed_labels(content);
      return;
    case InterchangeFormat::kContour:
      parse_contour(content);
      return;
    case InterchangeFormat::kCandidates: {
      const auto set = parse_candidates(content);
      if (set.candidates.empty()) throw SchemaError("candidates", "at least one candidate required");
      return;
    }
    case InterchangeFormat::kReadings:
      ReadingDictionary::parse(content);
      return;
    case InterchangeFormat::kNotes:
      parse_notes(content);
      return;
    case InterchangeFormat::kProject:
      parse_project(content);
      return;
  }
}

}  // namespace sv2svt
