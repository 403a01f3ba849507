#include "mltopics/textprep.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>

#include "mltopics/bundled.hpp"
#include "mltopics/error.hpp"
#include "mltopics/porter.hpp"

namespace mltopics {
namespace {

enum class CharClass { word, separator, delimiter };

struct Decoded {
  char32_t cp;
  std::size_t length;
  bool valid;
};

Decoded decode_utf8(std::string_view s, std::size_t i) {
  const auto c0 = static_cast<unsigned char>(s[i]);
  if (c0 < 0x80) return {c0, 1, true};
  int extra = 0;
  char32_t cp = 0;
  if ((c0 & 0xE0) == 0xC0) {
    extra = 1;
    cp = c0 & 0x1F;
  } else if ((c0 & 0xF0) == 0xE0) {
    extra = 2;
    cp = c0 & 0x0F;
  } else if ((c0 & 0xF8) == 0xF0) {
    extra = 3;
    cp = c0 & 0x07;
  } else {
    return {0, 1, false};
  }
  if (i + static_cast<std::size_t>(extra) >= s.size()) return {0, 1, false};
  for (int k = 1; k <= extra; ++k) {
    const auto c = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
    if ((c & 0xC0) != 0x80) return {0, 1, false};
    cp = (cp << 6) | (c & 0x3F);
  }
  return {cp, static_cast<std::size_t>(extra) + 1, true};
}

struct FoldRange {
  char32_t lo;
  char32_t hi;
  const char* ascii;
};

// Latin-1 Supplement and Latin Extended-A letters, upper and lower case.
constexpr FoldRange kFolds[] = {
    {0x00C0, 0x00C5, "a"}, {0x00C6, 0x00C6, "ae"}, {0x00C7, 0x00C7, "c"},
    {0x00C8, 0x00CB, "e"}, {0x00CC, 0x00CF, "i"},  {0x00D0, 0x00D0, "d"},
    {0x00D1, 0x00D1, "n"}, {0x00D2, 0x00D6, "o"},  {0x00D8, 0x00D8, "o"},
    {0x00D9, 0x00DC, "u"}, {0x00DD, 0x00DD, "y"},  {0x00DE, 0x00DE, "th"},
    {0x00DF, 0x00DF, "ss"}, {0x00E0, 0x00E5, "a"}, {0x00E6, 0x00E6, "ae"},
    {0x00E7, 0x00E7, "c"}, {0x00E8, 0x00EB, "e"},  {0x00EC, 0x00EF, "i"},
    {0x00F0, 0x00F0, "d"}, {0x00F1, 0x00F1, "n"},  {0x00F2, 0x00F6, "o"},
    {0x00F8, 0x00F8, "o"}, {0x00F9, 0x00FC, "u"},  {0x00FD, 0x00FD, "y"},
    {0x00FE, 0x00FE, "th"}, {0x00FF, 0x00FF, "y"}, {0x0100, 0x0105, "a"},
    {0x0106, 0x010D, "c"}, {0x010E, 0x0111, "d"},  {0x0112, 0x011B, "e"},
    {0x011C, 0x0123, "g"}, {0x0124, 0x0127, "h"},  {0x0128, 0x0131, "i"},
    {0x0132, 0x0133, "ij"}, {0x0134, 0x0135, "j"}, {0x0136, 0x0138, "k"},
    {0x0139, 0x0142, "l"}, {0x0143, 0x014B, "n"},  {0x014C, 0x0151, "o"},
    {0x0152, 0x0153, "oe"}, {0x0154, 0x0159, "r"}, {0x015A, 0x0161, "s"},
    {0x0162, 0x0167, "t"}, {0x0168, 0x0173, "u"},  {0x0174, 0x0175, "w"},
    {0x0176, 0x0178, "y"}, {0x0179, 0x017E, "z"},  {0x017F, 0x017F, "s"},
};

const char* fold(char32_t cp) {
  for (const auto& r : kFolds) {
    if (cp >= r.lo && cp <= r.hi) return r.ascii;
  }
  return nullptr;
}

CharClass classify_ascii(char c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?':
    case '(': case ')': case '[': case ']': case '"': case '\n':
      return CharClass::delimiter;
    default:
      break;
  }
  if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-') {
    return CharClass::word;
  }
  return CharClass::separator;
}

CharClass classify_wide(char32_t cp) {
  // Typographic quotes behave like '"'.
  if (cp == 0x201C || cp == 0x201D || cp == 0x201E || cp == 0x00AB || cp == 0x00BB) {
    return CharClass::delimiter;
  }
  if (cp == 0x2026) return CharClass::delimiter;  // ellipsis
  if ((cp >= 0x0080 && cp <= 0x00BF) || cp == 0x00D7 || cp == 0x00F7) return CharClass::separator;
  if (cp >= 0x2000 && cp <= 0x206F) return CharClass::separator;
  if (cp == 0x3000 || cp == 0xFEFF) return CharClass::separator;
  return CharClass::word;
}

bool is_hyphen_cp(char32_t cp) { return cp == 0x2010 || cp == 0x2011; }

class SegmentBuilder {
 public:
  void push_char(std::string_view piece) { current_.append(piece); }

  void end_token() {
    std::string tok = std::move(current_);
    current_.clear();
    const auto first = tok.find_first_not_of('-');
    if (first == std::string::npos) return;
    const auto last = tok.find_last_not_of('-');
    tok = tok.substr(first, last - first + 1);
    const bool pure_number = std::all_of(tok.begin(), tok.end(), [](char c) {
      return (c >= '0' && c <= '9') || c == '-';
    });
    if (pure_number) return;
    segment_.push_back(std::move(tok));
  }

  void end_segment() {
    end_token();
    if (!segment_.empty()) out_.segments.push_back(std::move(segment_));
    segment_.clear();
  }

  TokenizedText finish() {
    end_segment();
    return std::move(out_);
  }

 private:
  std::string current_;
  std::vector<std::string> segment_;
  TokenizedText out_;
};

}  // namespace

std::size_t TokenizedText::token_count() const {
  std::size_t n = 0;
  for (const auto& s : segments) n += s.size();
  return n;
}

TokenizedText tokenize(std::string_view text) {
  SegmentBuilder builder;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (static_cast<unsigned char>(c) < 0x80) {
      switch (classify_ascii(c)) {
        case CharClass::word: {
          const char lower = (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
          builder.push_char(std::string_view(&lower, 1));
          break;
        }
        case CharClass::separator:
          builder.end_token();
          break;
        case CharClass::delimiter:
          builder.end_segment();
          break;
      }
      ++i;
      continue;
    }
    const Decoded d = decode_utf8(text, i);
    if (!d.valid) {
      builder.end_token();
      i += d.length;
      continue;
    }
    if (is_hyphen_cp(d.cp)) {
      builder.push_char("-");
    } else if (const char* ascii = fold(d.cp)) {
      builder.push_char(ascii);
    } else {
      switch (classify_wide(d.cp)) {
        case CharClass::word:
          builder.push_char(text.substr(i, d.length));
          break;
        case CharClass::separator:
          builder.end_token();
          break;
        case CharClass::delimiter:
          builder.end_segment();
          break;
      }
    }
    i += d.length;
  }
  return builder.finish();
}

StopList::StopList(std::unordered_set<std::string> words) : words_(std::move(words)) {
  if (words_.empty()) throw DataError("empty stop list");
}

StopList StopList::parse(std::istream& in) {
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    std::string word = line.substr(first, last - first + 1);
    std::transform(word.begin(), word.end(), word.begin(), [](unsigned char ch) {
      return static_cast<char>(std::tolower(ch));
    });
    words.insert(std::move(word));
  }
  return StopList(std::move(words));
}

StopList StopList::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open stop list: " + path);
  return parse(in);
}

const StopList& StopList::fox() {
  static const StopList list = [] {
    std::istringstream in{std::string(bundled::fox_stoplist())};
    return parse(in);
  }();
  return list;
}

bool StopList::contains(std::string_view word) const {
  return words_.find(std::string(word)) != words_.end();
}

PreparedText preprocess(std::string_view text, const StopList& stops) {
  PreparedText out;
  for (auto& raw_segment : tokenize(text).segments) {
    Segment seg;
    seg.reserve(raw_segment.size());
    for (auto& surface : raw_segment) {
      Token tok;
      tok.stop = stops.contains(surface);
      tok.stem = porter_stem(surface);
      tok.surface = std::move(surface);
      seg.push_back(std::move(tok));
    }
    out.segments.push_back(std::move(seg));
  }
  return out;
}

}  // namespace mltopics
