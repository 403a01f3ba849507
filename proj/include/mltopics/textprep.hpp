#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace mltopics {

/// Lowercased tokens grouped into delimiter-bounded segments, before stemming.
/// Segment boundaries fall on . , ; : ! ? ( ) [ ] " and newline. Empty
/// segments are not emitted.
struct TokenizedText {
  std::vector<std::vector<std::string>> segments;

  std::size_t token_count() const;
};

/// Splits raw text into lowercase tokens made of letters, digits and
/// internal hyphens. Pure numbers are dropped. Latin letters with
/// diacritics are folded to ASCII; other non-ASCII letters are kept verbatim.
TokenizedText tokenize(std::string_view text);

class StopList {
 public:
  /// One word per line; blank lines and '#' comments are ignored.
  /// Throws DataError if no words remain.
  static StopList parse(std::istream& in);
  static StopList load(const std::string& path);
  /// The bundled Fox (1989) stop list.
  static const StopList& fox();

  explicit StopList(std::unordered_set<std::string> words);

  bool contains(std::string_view word) const;
  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

/// Exact membership on the unstemmed lowercase token.
inline bool is_stopword(std::string_view word, const StopList& list) {
  return list.contains(word);
}

struct Token {
  std::string surface;  // lowercase, unstemmed
  std::string stem;
  bool stop = false;  // evaluated on `surface`

  friend bool operator==(const Token&, const Token&) = default;
};

using Segment = std::vector<Token>;

struct PreparedText {
  std::vector<Segment> segments;

  bool empty() const { return segments.empty(); }
  friend bool operator==(const PreparedText&, const PreparedText&) = default;
};

/// tokenize + Porter-stem every token + flag stop words on the unstemmed form.
PreparedText preprocess(std::string_view text, const StopList& stops);

}  // namespace mltopics
