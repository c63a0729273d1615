#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "arena/metrics.hpp"

namespace arena {

namespace {

constexpr UChar32 kDottedCapitalI = 0x0130;
constexpr UChar32 kDotlessSmallI = 0x0131;

UChar32 turkish_lower_cp(UChar32 c) {
  if (c == kDottedCapitalI) return U'i';
  if (c == U'I') return kDotlessSmallI;
  return u_tolower(c);
}

void append_utf8(std::string& out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  int32_t len = 0;
  UBool error = false;
  U8_APPEND(reinterpret_cast<uint8_t*>(buf), len, U8_MAX_LENGTH, c, error);
  if (!error) out.append(buf, static_cast<std::size_t>(len));
}

// Decodes UTF-8; invalid bytes become U+FFFD.
std::vector<UChar32> decode(std::string_view text) {
  std::vector<UChar32> cps;
  cps.reserve(text.size());
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    cps.push_back(c < 0 ? 0xFFFD : c);
  }
  return cps;
}

bool is_space(UChar32 c) { return u_isUWhiteSpace(c); }

bool is_punct(UChar32 c) { return u_ispunct(c); }

}  // namespace

std::string turkish_lower(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (UChar32 c : decode(text)) append_utf8(out, turkish_lower_cp(c));
  return out;
}

TokenSequence tokenize(std::string_view text) {
  std::vector<UChar32> cps = decode(text);
  for (auto& c : cps) c = turkish_lower_cp(c);

  TokenSequence tokens;
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && is_space(cps[i])) ++i;
    std::size_t begin = i;
    while (i < cps.size() && !is_space(cps[i])) ++i;
    std::size_t end = i;
    while (begin < end && is_punct(cps[begin])) ++begin;
    while (end > begin && is_punct(cps[end - 1])) --end;
    if (begin == end) continue;
    std::string token;
    for (std::size_t k = begin; k < end; ++k) append_utf8(token, cps[k]);
    tokens.push_back(std::move(token));
  }
  return tokens;
}

}  // namespace arena
