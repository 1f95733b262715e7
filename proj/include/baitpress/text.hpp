#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "baitpress/corpus.hpp"

namespace baitpress {

/// Literal emitted in place of every purely numeric token.
inline constexpr std::string_view kNumberToken = "[n]";

using TokenSeq = std::vector<std::string>;

/// The seven text views a base model can be trained on.
enum class FieldView : std::uint8_t {
  post_text,
  target_title,
  target_description,
  target_keywords,
  target_paragraphs,
  target_captions,
  all_concatenated,
};

inline constexpr std::array<FieldView, 7> kAllViews = {
    FieldView::post_text,         FieldView::target_title,      FieldView::target_description,
    FieldView::target_keywords,   FieldView::target_paragraphs, FieldView::target_captions,
    FieldView::all_concatenated,
};

/// Challenge-style field name ("postText", ..., "allConcatenated").
const char* to_string(FieldView v) noexcept;
std::optional<FieldView> parse_view(std::string_view name) noexcept;

/// The raw strings of one view. all_concatenated lists the strings of the
/// six single-field views in enumeration order.
std::vector<std::string> view_texts(const Post& post, FieldView view);

/// Deletes every `<...>` span without an inner '<', then unescapes
/// &amp; &lt; &gt; &quot; &#39;. An unmatched '<' is kept.
std::string strip_html(std::string_view text);

/// Drops sentences whose casefolded, whitespace-collapsed form already
/// occurred earlier in `texts`. Sentences end at '.', '!' or '?' followed by
/// whitespace or the end of a string. Entries left empty are removed.
std::vector<std::string> dedupe_sentences(const std::vector<std::string>& texts);

/// Casefolds and splits on anything that is not a letter, digit or
/// apostrophe. Apostrophes are dropped; digit runs (with ',' or '.' between
/// digits) become "[n]".
TokenSeq tokenize(std::string_view text);

class Stopwords {
 public:
  /// The list compiled into the library.
  static const Stopwords& builtin();
  /// One word per line; blank lines and lines starting with '#' ignored.
  static Stopwords from_file(const std::string& path);
  static Stopwords from_text(std::string_view text);
  /// Builtin list, unless BAITPRESS_STOPWORDS names a file.
  static Stopwords from_environment();

  bool contains(std::string_view token) const;
  std::size_t size() const noexcept { return words_.size(); }
  /// FNV-1a digest of the sorted list, hex encoded.
  const std::string& digest() const noexcept { return digest_; }

 private:
  explicit Stopwords(std::vector<std::string> words);

  std::unordered_set<std::string> words_;
  std::string digest_;
};

TokenSeq remove_stopwords(const TokenSeq& seq, const Stopwords& stopwords);

/// Full chain for one view: dedupe, strip HTML, tokenize, drop stopwords, stem.
TokenSeq preprocess_field(const Post& post, FieldView view, const Stopwords& stopwords);

/// Same chain over arbitrary strings (used for external corpora).
TokenSeq preprocess_texts(const std::vector<std::string>& texts, const Stopwords& stopwords);

}  // namespace baitpress
