#include <doctest.h>

#include <cstdlib>

#include "sv2svt/error.hpp"
#include "sv2svt/pipeline_config.hpp"
#include "test_support.hpp"

using namespace sv2svt;
namespace fs = std::filesystem;

namespace {

std::string minimal_config(const std::string& extra = {}) {
  const std::string dict = support::data_file("cmudict_sample.dict").string();
  return "dictionary = " + dict + "\n" +
         "adapter.transcribe.command = /bin/sh transcribe {input} {output}\n"
         "adapter.align.command = /bin/sh align {input} {audio} {output}\n"
         "adapter.vme.command = /bin/sh vme {input} {output}\n"
         "adapter.translate.command = /bin/sh tr {input} {output} {target_syllables}\n" +
         extra;
}

std::string config_error(const std::string& text) {
  try {
    validate_config(parse_config(text, "/tmp"));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("stage names") {
  for (Stage s : kAllStages) CHECK(parse_stage(to_string(s)) == s);
  CHECK_FALSE(parse_stage("mix").has_value());
  CHECK(stage_required(Stage::kTranslate));
  CHECK_FALSE(stage_required(Stage::kSegment));
  CHECK_FALSE(stage_required(Stage::kReadings));
  CHECK(required_placeholders(Stage::kSegment).empty());
  CHECK(allowed_placeholders(Stage::kAlign).size() == 3);
}

TEST_CASE("defaults and parsed values") {
  const auto c = parse_config(minimal_config(
                                  "# comment\n"
                                  "tempo_bpm = 96.5\n"
                                  "tick_resolution = 960\n"
                                  "oov = skip\n"
                                  "allow_overflow = yes\n"
                                  "smoothing_window = 5\n"
                                  "reading_dictionary = dicts/r.tsv\n"
                                  "work_dir = out\n"
                                  "ust = false\n"
                                  "ust_encoding = shift_jis\n"
                                  "adapter.vme.timeout_s = 12.5\n"),
                              "/base");
  CHECK(c.tempo_bpm == 96.5);
  CHECK(c.tick_resolution == 960);
  CHECK(c.oov == OovPolicy::kSkip);
  CHECK(c.allow_overflow);
  CHECK(c.smoothing_window == 5);
  CHECK(*c.reading_dictionary == fs::path("/base/dicts/r.tsv"));
  CHECK(c.work_dir == fs::path("/base/out"));
  CHECK_FALSE(c.write_ust);
  CHECK(c.ust_encoding == UstEncoding::kShiftJis);
  CHECK(c.adapter(Stage::kVme)->timeout_s == 12.5);
  CHECK(c.adapter(Stage::kAlign)->timeout_s == 300.0);
  CHECK_FALSE(c.adapter(Stage::kSegment).has_value());

  const auto d = parse_config("", "/base");
  CHECK(d.tempo_bpm == 120.0);
  CHECK(d.tick_resolution == 480);
  CHECK(d.smoothing_window == 1);
  CHECK(d.work_dir == fs::path("/base/work"));
}

TEST_CASE("malformed configs are config errors") {
  for (const char* text : {"tempo_bpm = -1\n", "tempo_bpm = fast\n", "tick_resolution = 0\n",
                           "smoothing_window = 4\n", "oov = ignore\n", "nonsense = 1\n",
                           "just words\n", "tempo_bpm = 1\ntempo_bpm = 2\n",
                           "adapter.mix.command = x\n", "adapter.vme.timeout_s = 5\n",
                           "ust_encoding = latin1\n", "allow_overflow = maybe\n"}) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_config(text, "/"), ConfigError);
  }
}

TEST_CASE("validation") {
  CHECK(config_error(minimal_config()).empty());
  CHECK(config_error(minimal_config("source_language = fr\n")).find("source_language") != std::string::npos);
  CHECK(config_error(minimal_config("target_language = ko\n")).find("target_language") != std::string::npos);
  CHECK(config_error(minimal_config("adapter.segment.command = /bin/sh seg {input}\n"))
            .find("unknown placeholder {input}") != std::string::npos);
  CHECK(config_error(minimal_config("adapter.readings.command = /bin/sh r {input}\n"))
            .find("lacks {output}") != std::string::npos);
  CHECK(config_error(minimal_config("adapter.segment.command = no-such-segmenter-tool\n"))
            .find("not found") != std::string::npos);
  CHECK(config_error(minimal_config("reading_dictionary = /nonexistent.tsv\n"))
            .find("reading_dictionary") != std::string::npos);

  auto missing = minimal_config();
  missing.erase(missing.find("adapter.vme"), missing.find("adapter.translate") - missing.find("adapter.vme"));
  CHECK(config_error(missing).find("adapter.vme.command is missing") != std::string::npos);

  CHECK(config_error("adapter.transcribe.command = /bin/sh {input} {output}\n").find("adapter.align") !=
        std::string::npos);
}

TEST_CASE("load_config resolves paths and honours the work dir override") {
  const auto dir = support::scratch_dir("config_load");
  sv2svt::write_file(dir / "p.conf", "work_dir = w\n");
  ::unsetenv("SV2SVT_WORKDIR");
  CHECK(load_config(dir / "p.conf").work_dir == dir / "w");
  ::setenv("SV2SVT_WORKDIR", (dir / "elsewhere").c_str(), 1);
  CHECK(load_config(dir / "p.conf").work_dir == dir / "elsewhere");
  ::unsetenv("SV2SVT_WORKDIR");
  CHECK_THROWS_AS(load_config(dir / "absent.conf"), ConfigError);
}

TEST_CASE("command expansion") {
  const auto c = parse_config(
      "adapter.translate.command = sh -c 'x' {input}.txt --n={target_syllables} {output}\n", "/");
  const auto argv = expand_command(c, *c.adapter(Stage::kTranslate),
                                   {{"input", "/w/a b"}, {"output", "/w/o.json"}, {"target_syllables", "4"}});
  REQUIRE(argv.size() == 6);
  CHECK(fs::path(argv[0]).filename() == "sh");
  CHECK(argv[2] == "x");
  CHECK(argv[3] == "/w/a b.txt");
  CHECK(argv[4] == "--n=4");
  CHECK(argv[5] == "/w/o.json");
}
