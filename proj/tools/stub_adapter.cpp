// sv2svt-stub: replays canned adapter outputs.
//
//   sv2svt-stub --canned FILE STAGE [--input F --output F] [--audio F] [--target-syllables N]
//
// The canned file maps stage -> sha256(input bytes) -> output text. The
// segment stage reads one sentence on stdin and keys on sha256 of the sentence
// (without its newline). Unknown inputs exit 1 with a diagnostic.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <json.hpp>
#include <string>

#include "sv2svt/hashing.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Deterministic stand-in for every pipeline adapter"};
  std::string canned_path;
  std::string stage;
  std::string input;
  std::string output;
  std::string audio;
  std::size_t target = 0;
  app.add_option("--canned", canned_path, "Canned outputs JSON")->required();
  app.add_option("stage", stage, "Stage name")->required();
  app.add_option("--input", input, "Input file");
  app.add_option("--output", output, "Output file");
  app.add_option("--audio", audio, "Audio file (accepted, unused)");
  app.add_option("--target-syllables", target, "Target syllables (accepted, unused)");
  CLI11_PARSE(app, argc, argv);

  try {
    const auto canned = nlohmann::json::parse(sv2svt::read_file(canned_path));
    if (!canned.contains(stage)) {
      std::fprintf(stderr, "stub: no canned outputs for stage '%s'\n", stage.c_str());
      return 1;
    }
    const auto& table = canned.at(stage);

    if (stage == "segment") {
      std::string line;
      std::getline(std::cin, line);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto key = sv2svt::sha256_hex(line);
      if (!table.contains(key)) {
        std::fprintf(stderr, "stub: no segmentation for '%s' (%s)\n", line.c_str(), key.c_str());
        return 1;
      }
      std::printf("%s\n", table.at(key).get<std::string>().c_str());
      return 0;
    }

    if (input.empty() || output.empty()) {
      std::fprintf(stderr, "stub: --input and --output are required for '%s'\n", stage.c_str());
      return 1;
    }
    const auto key = sv2svt::sha256_file(input);
    if (!table.contains(key)) {
      std::fprintf(stderr, "stub: no canned %s output for input %s (%s)\n", stage.c_str(),
                   input.c_str(), key.c_str());
      return 1;
    }
    sv2svt::write_file(output, table.at(key).get<std::string>());
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "stub: %s\n", e.what());
    return 1;
  }
}
