#include "sv2svt/unicode.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/ucnv.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <memory>

#include "sv2svt/error.hpp"

namespace sv2svt::unicode {

std::u32string decode(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) throw ValidationError("malformed UTF-8 input");
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

std::string encode(char32_t c) {
  char buf[U8_MAX_LENGTH];
  int32_t i = 0;
  UBool error = false;
  U8_APPEND(reinterpret_cast<uint8_t*>(buf), i, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
  if (error) throw ValidationError("code point cannot be encoded as UTF-8");
  return std::string(buf, static_cast<std::size_t>(i));
}

std::string encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size() * 3);
  for (char32_t c : text) out += encode(c);
  return out;
}

std::string nfc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw ValidationError("ICU NFC normalizer unavailable");
  decode(utf8);  // reject malformed input instead of letting ICU substitute U+FFFD
  const auto source = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  const icu::UnicodeString normalized = normalizer->normalize(source, status);
  if (U_FAILURE(status)) throw ValidationError("NFC normalization failed");
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

bool is_kanji(char32_t c) noexcept {
  return (c >= 0x4E00 && c <= 0x9FFF) ||    // CJK unified ideographs
         (c >= 0x3400 && c <= 0x4DBF) ||    // extension A
         (c >= 0xF900 && c <= 0xFAFF) ||    // compatibility ideographs
         (c >= 0x20000 && c <= 0x3134F) ||  // extensions B-G
         c == 0x3005 || c == 0x3006 || c == 0x3007;  // 々 〆 〇
}

bool is_hiragana(char32_t c) noexcept {
  return (c >= 0x3041 && c <= 0x3096) || (c >= 0x309D && c <= 0x309F);
}

bool is_katakana(char32_t c) noexcept {
  return (c >= 0x30A1 && c <= 0x30FA) || (c >= 0x30FD && c <= 0x30FF) ||
         (c >= 0x31F0 && c <= 0x31FF);
}

bool is_kana(char32_t c) noexcept { return is_hiragana(c) || is_katakana(c) || c == 0x30FC; }

bool is_unsung(char32_t c) noexcept {
  const auto u = static_cast<UChar32>(c);
  if (is_kana(c) || is_kanji(c)) return false;
  if (u_isUWhiteSpace(u) || u_ispunct(u)) return true;
  const auto type = u_charType(u);
  return type == U_MATH_SYMBOL || type == U_CURRENCY_SYMBOL || type == U_MODIFIER_SYMBOL ||
         type == U_OTHER_SYMBOL;
}

bool contains_kanji(std::string_view utf8) {
  for (char32_t c : decode(utf8)) {
    if (is_kanji(c)) return true;
  }
  return false;
}

std::string to_shift_jis(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  std::unique_ptr<UConverter, decltype(&ucnv_close)> conv(ucnv_open("windows-31j", &status),
                                                          &ucnv_close);
  if (U_FAILURE(status)) throw ValidationError("Shift-JIS converter unavailable");
  ucnv_setFromUCallBack(conv.get(), UCNV_FROM_U_CALLBACK_STOP, nullptr, nullptr, nullptr, &status);
  const auto source = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  std::string out(static_cast<std::size_t>(source.length()) * 2 + 16, '\0');
  const int32_t written = source.extract(out.data(), static_cast<int32_t>(out.size()),
                                         conv.get(), status);
  if (U_FAILURE(status)) throw ValidationError("text cannot be represented in Shift-JIS");
  out.resize(static_cast<std::size_t>(written));
  return out;
}

}  // namespace sv2svt::unicode
