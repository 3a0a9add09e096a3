#include "sv2svt/note_timing.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <unordered_map>

#include "sv2svt/error.hpp"

namespace sv2svt {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    auto tab = line.find('\t', pos);
    out.push_back(line.substr(pos, tab == std::string_view::npos ? line.npos : tab - pos));
    if (tab == std::string_view::npos) break;
    pos = tab + 1;
  }
  return out;
}

Micros parse_time_field(std::string_view field, std::size_t line, const char* name) {
  auto t = parse_seconds(field);
  if (!t) throw ParseError(line, std::string("bad ") + name + " '" + std::string(field) + "'");
  if (t->count() < 0) throw ParseError(line, std::string("negative ") + name);
  return *t;
}

struct WordSpan {
  std::size_t word_index;
  std::size_t begin;  // into timed
  std::size_t end;
};

std::vector<WordSpan> group_words(std::span<const TimedPhoneme> timed) {
  std::vector<WordSpan> spans;
  std::unordered_map<std::size_t, std::size_t> seen;
  for (std::size_t i = 0; i < timed.size(); ++i) {
    const auto w = timed[i].word_index;
    if (!spans.empty() && spans.back().word_index == w) {
      spans.back().end = i + 1;
      continue;
    }
    if (seen.contains(w)) {
      throw MismatchError("#" + std::to_string(w), "aligned phonemes are not contiguous");
    }
    seen.emplace(w, spans.size());
    spans.push_back({w, i, i + 1});
  }
  return spans;
}

struct PendingVowelless {
  std::vector<Phoneme> phonemes;
  Micros start;
  Micros end;
};

}  // namespace

TimedLabels parse_timed_labels(std::string_view text) {
  TimedLabels out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::optional<Micros> prev_start;
  std::optional<Micros> prev_end;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    auto fields = split_tabs(line);
    if (fields.size() != 4) {
      throw ParseError(line_no, "expected 4 tab-separated fields, got " +
                                    std::to_string(fields.size()));
    }
    const Micros start = parse_time_field(fields[0], line_no, "start time");
    const Micros end = parse_time_field(fields[1], line_no, "end time");
    if (end <= start) throw ParseError(line_no, "end time must be after start time");
    if (prev_start && start < *prev_start) {
      throw AlignmentError(line_no, "rows are not sorted by start time");
    }
    if (prev_end && start < *prev_end) {
      throw AlignmentError(line_no, "row overlaps the previous row");
    }
    prev_start = start;
    prev_end = end;

    if (fields[2] == "SIL") {
      out.gaps.push_back({start, end});
      continue;
    }
    std::size_t word = 0;
    const auto wf = fields[3];
    auto [ptr, ec] = std::from_chars(wf.data(), wf.data() + wf.size(), word);
    if (ec != std::errc{} || ptr != wf.data() + wf.size()) {
      throw ParseError(line_no, "bad word index '" + std::string(wf) + "'");
    }
    out.phonemes.push_back({parse_phoneme(fields[2], line_no), start, end, word});
  }
  return out;
}

std::string write_timed_labels(const TimedLabels& labels) {
  struct Row {
    Micros start;
    std::string line;
  };
  std::vector<Row> rows;
  for (const auto& p : labels.phonemes) {
    rows.push_back({p.start, format_seconds(p.start) + '\t' + format_seconds(p.end) + '\t' +
                                 p.phoneme.to_string() + '\t' + std::to_string(p.word_index)});
  }
  for (const auto& g : labels.gaps) {
    rows.push_back({g.start, format_seconds(g.start) + '\t' + format_seconds(g.end) + "\tSIL\t-1"});
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.start < b.start; });
  std::string out;
  for (const auto& r : rows) out += r.line + '\n';
  return out;
}

std::vector<WordSyllables> syllabify_aligned_words(std::span<const TimedPhoneme> timed) {
  std::vector<WordSyllables> out;
  for (const auto& span : group_words(timed)) {
    std::vector<Phoneme> phonemes;
    for (std::size_t i = span.begin; i < span.end; ++i) phonemes.push_back(timed[i].phoneme);
    WordSyllables ws;
    ws.word_index = span.word_index;
    if (count_vowels(phonemes) == 0) {
      ws.vowelless = std::move(phonemes);
    } else {
      ws.syllables = syllabify(phonemes);
    }
    out.push_back(std::move(ws));
  }
  return out;
}

std::vector<SyllableNote> build_notes(std::span<const TimedPhoneme> timed,
                                      std::span<const WordSyllables> words) {
  std::map<std::size_t, const WordSyllables*> by_word;
  for (const auto& w : words) {
    if (!by_word.emplace(w.word_index, &w).second) {
      throw MismatchError("#" + std::to_string(w.word_index), "word syllabified twice");
    }
  }

  const auto spans = group_words(timed);
  if (spans.size() != by_word.size()) {
    for (const auto& [index, ws] : by_word) {
      const bool aligned = std::any_of(spans.begin(), spans.end(),
                                       [&](const WordSpan& s) { return s.word_index == index; });
      if (!aligned) throw MismatchError("#" + std::to_string(index), "word has no aligned phonemes");
    }
  }

  std::vector<SyllableNote> notes;
  std::optional<PendingVowelless> pending;

  for (const auto& span : spans) {
    const auto label = "#" + std::to_string(span.word_index);
    auto it = by_word.find(span.word_index);
    if (it == by_word.end()) throw MismatchError(label, "no syllabification supplied");
    const WordSyllables& ws = *it->second;

    std::vector<Phoneme> aligned;
    for (std::size_t i = span.begin; i < span.end; ++i) aligned.push_back(timed[i].phoneme);
    std::vector<Phoneme> expected = ws.vowelless;
    for (const auto& s : ws.syllables) {
      expected.insert(expected.end(), s.phonemes.begin(), s.phonemes.end());
    }
    if (!same_symbols(aligned, expected) || (!ws.vowelless.empty() && !ws.syllables.empty())) {
      throw MismatchError(label, "aligned '" + join_phonemes(aligned) + "' vs syllabified '" +
                                     join_phonemes(expected) + "'");
    }

    if (ws.syllables.empty()) {
      if (!pending) pending = PendingVowelless{{}, timed[span.begin].start, Micros{}};
      pending->phonemes.insert(pending->phonemes.end(), ws.vowelless.begin(), ws.vowelless.end());
      pending->end = timed[span.end - 1].end;
      continue;
    }

    std::size_t cursor = span.begin;
    for (const auto& syllable : ws.syllables) {
      const auto first = cursor;
      const auto last = cursor + syllable.phonemes.size() - 1;
      cursor += syllable.phonemes.size();
      SyllableNote note;
      note.onset = timed[first].start;
      note.duration = timed[last].end - note.onset;
      note.syllable = syllable;
      note.word_index = span.word_index;
      notes.push_back(std::move(note));
    }

    if (pending) {
      auto& target = notes[notes.size() - ws.syllables.size()];
      const Micros end = target.end();
      target.syllable.phonemes.insert(target.syllable.phonemes.begin(), pending->phonemes.begin(),
                                      pending->phonemes.end());
      target.syllable.nucleus_index += pending->phonemes.size();
      target.onset = pending->start;
      target.duration = end - target.onset;
      target.vowelless_merged = true;
      pending.reset();
    }
  }

  if (pending) {
    if (notes.empty()) {
      throw NoNucleusError("no aligned word contains a vowel: " + join_phonemes(pending->phonemes));
    }
    auto& target = notes.back();
    target.syllable.phonemes.insert(target.syllable.phonemes.end(), pending->phonemes.begin(),
                                    pending->phonemes.end());
    target.duration = std::max(target.end(), pending->end) - target.onset;
    target.vowelless_merged = true;
  }
  return notes;
}

}  // namespace sv2svt
