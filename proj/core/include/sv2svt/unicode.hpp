#pragma once

#include <string>
#include <string_view>

namespace sv2svt::unicode {

/// Decodes UTF-8. Throws ValidationError on malformed input.
std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view text);
std::string encode(char32_t c);

/// Canonical composition (NFC).
std::string nfc(std::string_view utf8);

bool is_kanji(char32_t c) noexcept;
bool is_hiragana(char32_t c) noexcept;
bool is_katakana(char32_t c) noexcept;

/// Hiragana, katakana, or the prolonged sound mark.
bool is_kana(char32_t c) noexcept;

/// Punctuation, symbols, and whitespace: characters that are never sung.
bool is_unsung(char32_t c) noexcept;

bool contains_kanji(std::string_view utf8);

/// Re-encodes UTF-8 text as Shift-JIS (Windows-31J). Throws ValidationError
/// for characters without a mapping.
std::string to_shift_jis(std::string_view utf8);

}  // namespace sv2svt::unicode
