// sv2svt: end-to-end runs and per-step commands over interchange files.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sv2svt/error.hpp"
#include "sv2svt/hashing.hpp"
#include "sv2svt/interchange.hpp"
#include "sv2svt/ja_moraic.hpp"
#include "sv2svt/lyric_fit.hpp"
#include "sv2svt/melody.hpp"
#include "sv2svt/note_timing.hpp"
#include "sv2svt/phonology.hpp"
#include "sv2svt/pipeline.hpp"
#include "sv2svt/pipeline_config.hpp"
#include "sv2svt/stats.hpp"
#include "sv2svt/ust.hpp"

namespace fs = std::filesystem;
using namespace sv2svt;

namespace {

fs::path default_data_file(const char* name) {
  for (const fs::path& dir : {fs::path(SV2SVT_SOURCE_DATA_DIR), fs::path(SV2SVT_INSTALL_DATA_DIR)}) {
    std::error_code ec;
    if (fs::is_regular_file(dir / name, ec)) return dir / name;
  }
  throw ConfigError(std::string("no default ") + name + "; pass it explicitly");
}

void emit(const std::optional<std::string>& output, std::string_view content) {
  if (output) {
    write_file(*output, content);
  } else {
    std::fwrite(content.data(), 1, content.size(), stdout);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Singing-voice translation kernel: English vocal takes to Japanese lyric projects"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tool_version()));

  // run
  auto* run = app.add_subcommand("run", "Run the whole pipeline, or one adapter stage");
  std::string run_config;
  std::string run_audio;
  std::string run_stage_name;
  std::string run_input;
  std::string run_output;
  std::optional<std::size_t> run_target;
  std::string run_order = "concurrent";
  bool run_sequential = false;
  run->add_option("-c,--config", run_config, "Pipeline config file")->required();
  run->add_option("recording", run_audio, "Vocal recording (full run)");
  run->add_option("--stage", run_stage_name, "Run only this adapter stage")
      ->check(CLI::IsMember({"transcribe", "align", "vme", "translate", "segment", "readings"}));
  run->add_option("--input", run_input, "Stage input file");
  run->add_option("--audio", run_audio, "Audio file (align stage or full run)");
  run->add_option("--target-syllables", run_target, "Target count (translate stage)");
  run->add_option("-o,--output", run_output, "Stage output file");
  run->add_option("--branch-order", run_order, "concurrent, align-first or vme-first")
      ->check(CLI::IsMember({"concurrent", "align-first", "vme-first"}));
  run->add_flag("--sequential-lines", run_sequential, "Process transcript lines one at a time");

  // syllabify
  auto* syl = app.add_subcommand("syllabify", "Split words or a phoneme string into syllables");
  std::vector<std::string> syl_words;
  std::string syl_phonemes;
  std::string syl_dict;
  syl->add_option("words", syl_words, "Words to look up");
  syl->add_option("--phonemes", syl_phonemes, "ARPAbet phonemes, e.g. \"B L UW1 B EH2 R IY0\"");
  syl->add_option("--dict", syl_dict, "Pronunciation dictionary (CMU format)");

  // notes
  auto* notes = app.add_subcommand("notes", "Build syllable notes from timed labels");
  std::string notes_input;
  std::optional<std::string> notes_output;
  notes->add_option("labels", notes_input, "Timed-label TSV")->required();
  notes->add_option("-o,--output", notes_output, "Notes JSON (default stdout)");

  // contour
  auto* contour = app.add_subcommand("contour", "Convert an f0 contour to a deviation curve");
  std::string contour_input;
  std::optional<std::string> contour_output;
  std::size_t contour_window = 1;
  contour->add_option("contour", contour_input, "Contour CSV (time_s,f0_hz)")->required();
  contour->add_option("--smoothing", contour_window, "Odd median window in frames");
  contour->add_option("-o,--output", contour_output, "Deviation JSON (default stdout)");

  // fit-lyrics
  auto* fit = app.add_subcommand("fit-lyrics", "Pick the translation that fits the note count");
  std::string fit_candidates;
  std::optional<std::size_t> fit_target;
  std::string fit_readings;
  std::string fit_notes;
  std::optional<std::string> fit_assigned;
  std::optional<std::string> fit_output;
  bool fit_overflow = false;
  fit->add_option("candidates", fit_candidates, "Candidates JSON")->required();
  fit->add_option("--target", fit_target, "Syllable target (default: from the candidates file)");
  fit->add_option("--readings", fit_readings, "Reading dictionary TSV");
  fit->add_option("--notes", fit_notes, "Notes JSON to receive the lyrics");
  fit->add_option("--assigned", fit_assigned, "Where to write the lyric-bearing notes");
  fit->add_flag("--allow-overflow", fit_overflow, "Fold surplus moras into the last note");
  fit->add_option("-o,--output", fit_output, "Fit result JSON (default stdout)");

  // export
  auto* exp = app.add_subcommand("export", "Validate a project and export it as UST");
  std::string exp_input;
  std::optional<std::string> exp_output;
  double exp_tempo = 120.0;
  int exp_resolution = 480;
  std::string exp_encoding = "utf-8";
  exp->add_option("project", exp_input, "Project JSON")->required();
  exp->add_option("-o,--output", exp_output, "UST file (default stdout)");
  exp->add_option("--tempo", exp_tempo, "Tempo in BPM");
  exp->add_option("--resolution", exp_resolution, "Ticks per quarter note");
  exp->add_option("--encoding", exp_encoding, "utf-8 or shift_jis")
      ->check(CLI::IsMember({"utf-8", "shift_jis"}));

  // eval-stats
  auto* ev = app.add_subcommand("eval-stats", "MOS analysis: intervals, rank-sum, KS");
  std::string ev_input;
  double ev_confidence = 0.95;
  bool ev_json = false;
  ev->add_option("scores", ev_input, "CSV subject,system,question,score")->required();
  ev->add_option("--confidence", ev_confidence, "Interval confidence")->check(CLI::Range(0.5, 0.999));
  ev->add_flag("--json", ev_json, "JSON instead of a table");

  // validate-config
  auto* vc = app.add_subcommand("validate-config", "Check a pipeline config without running it");
  std::string vc_input;
  vc->add_option("config", vc_input, "Pipeline config file")->required();

  // validate
  auto* val = app.add_subcommand("validate", "Check a file against an interchange format");
  std::string val_format;
  std::string val_input;
  val->add_option("format", val_format, "transcript, labels, contour, candidates, readings, notes, project")
      ->required();
  val->add_option("file", val_input, "File to check")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_code_for(ErrorCategory::kConfig);
  }

  try {
    if (*run) {
      const auto config = load_config(run_config);
      if (!run_stage_name.empty()) {
        validate_config(config);
        if (run_input.empty()) throw ConfigError("--stage needs --input");
        StageInputs inputs;
        inputs.input = run_input;
        if (!run_audio.empty()) inputs.audio = fs::path(run_audio);
        inputs.target_syllables = run_target;
        if (!run_output.empty()) inputs.output = fs::path(run_output);
        const auto result = run_stage(config, *parse_stage(run_stage_name), inputs);
        std::printf("%s\t%s\t%s\n", run_stage_name.c_str(),
                    std::string(to_string(result.status)).c_str(), result.output.c_str());
        return 0;
      }
      if (run_audio.empty()) throw ConfigError("run needs an audio file");
      RunOptions options;
      options.order = run_order == "align-first" ? BranchOrder::kAlignFirst
                      : run_order == "vme-first" ? BranchOrder::kVmeFirst
                                                 : BranchOrder::kConcurrent;
      options.parallel_lines = !run_sequential;
      const auto result = run_pipeline(config, run_audio, options);
      for (const auto& s : result.report.stages) {
        std::printf("%-16s %s\n", s.name.c_str(), std::string(to_string(s.status)).c_str());
      }
      for (const auto& w : result.report.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
      std::printf("project: %s\n", result.report.project_path.c_str());
      if (result.report.ust_path) std::printf("ust: %s\n", result.report.ust_path->c_str());
      return 0;
    }

    if (*syl) {
      if (!syl_phonemes.empty()) {
        const auto phonemes = parse_phonemes(syl_phonemes);
        std::string line;
        for (const auto& s : syllabify(phonemes)) line += (line.empty() ? "" : " ") + s.to_string();
        std::printf("%s\n", line.c_str());
        return 0;
      }
      if (syl_words.empty()) throw ConfigError("give words or --phonemes");
      const auto dict = PronunciationDictionary::load(
          syl_dict.empty() ? default_data_file("cmudict_sample.dict") : fs::path(syl_dict));
      std::vector<std::string> missing;
      std::string out;
      for (const auto& raw : syl_words) {
        const auto word = normalize_word(raw);
        const auto* entry = dict.primary(word);
        if (entry == nullptr) {
          missing.push_back(word);
          continue;
        }
        std::string line = word + "\t";
        if (count_vowels(entry->phonemes) == 0) {
          // Sung inside a neighbouring syllable; nothing of its own.
          out += line + "-\t0\n";
          continue;
        }
        const auto syllables = syllabify(entry->phonemes);
        for (std::size_t i = 0; i < syllables.size(); ++i) {
          line += (i ? " " : "") + syllables[i].to_string();
        }
        out += line + "\t" + std::to_string(syllables.size()) + "\n";
      }
      if (!missing.empty()) throw OovError(missing);
      std::fputs(out.c_str(), stdout);
      return 0;
    }

    if (*notes) {
      const auto labels = parse_timed_labels(read_file(notes_input));
      const auto words = syllabify_aligned_words(labels.phonemes);
      emit(notes_output, write_notes(build_notes(labels.phonemes, words)));
      return 0;
    }

    if (*contour) {
      const auto frames = median_smooth(parse_contour(read_file(contour_input)), contour_window);
      emit(contour_output, write_deviation(contour_to_deviation(frames)));
      return 0;
    }

    if (*fit) {
      const auto set = parse_candidates(read_file(fit_candidates));
      const auto readings = ReadingDictionary::load(
          fit_readings.empty() ? default_data_file("readings_mini.tsv") : fs::path(fit_readings));
      KanjiRunSegmenter segmenter;
      std::optional<std::vector<SyllableNote>> targets;
      if (!fit_notes.empty()) targets = parse_notes(read_file(fit_notes));
      const std::size_t target =
          fit_target ? *fit_target : targets ? targets->size() : set.target_syllables;
      const auto result =
          select_candidate(set.candidates, target, make_reading_resolver(segmenter, readings));
      if (targets) {
        const auto assigned = assign_lyrics(*targets, *result.chosen.reading, fit_overflow);
        emit(fit_assigned, write_notes(assigned));
      }
      emit(fit_output, write_fit_result(result));
      return 0;
    }

    if (*exp) {
      const auto project = parse_project(read_file(exp_input));
      UstOptions options;
      options.tempo_bpm = exp_tempo;
      options.tick_resolution = exp_resolution;
      options.encoding = exp_encoding == "shift_jis" ? UstEncoding::kShiftJis : UstEncoding::kUtf8;
      const auto exported = export_ust(project, options);
      for (const auto& w : exported.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
      emit(exp_output, exported.text);
      return 0;
    }

    if (*ev) {
      const auto table = stats::parse_score_csv(read_file(ev_input));
      const auto report = stats::analyze(table, ev_confidence);
      std::fputs((ev_json ? stats::format_report_json(report) : stats::format_report_text(report)).c_str(),
                 stdout);
      return 0;
    }

    if (*vc) {
      validate_config(load_config(vc_input));
      std::printf("ok\n");
      return 0;
    }

    if (*val) {
      InterchangeFormat format{};
      if (!parse_format(val_format, format)) throw ConfigError("unknown format '" + val_format + "'");
      validate_document(format, read_file(val_input));
      std::printf("ok\n");
      return 0;
    }
  } catch (const AdapterError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    if (!e.diagnostics().empty()) std::fprintf(stderr, "%s", e.diagnostics().c_str());
    return exit_code_for(e.category());
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.category());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
  return 0;
}
