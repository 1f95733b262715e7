#include "baitpress/text.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "baitpress/error.hpp"
#include "baitpress/io.hpp"
#include "baitpress/porter.hpp"

namespace baitpress {

// Defined in the generated stopwords_data.cpp.
extern const char* const kBuiltinStopwords;

namespace {

constexpr std::array<const char*, 7> kViewNames = {
    "postText", "targetTitle", "targetDescription", "targetKeywords",
    "targetParagraphs", "targetCaptions", "allConcatenated",
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string trim_collapse(std::string_view s, bool lower) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(lower ? ascii_lower(c) : c);
  }
  return out;
}

// Decodes one UTF-8 sequence at `pos`. Returns the code point (or -1 for an
// invalid byte) and advances `pos`.
long decode_utf8(std::string_view s, std::size_t& pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  int extra = 0;
  long cp = 0;
  if (b0 < 0x80) {
    ++pos;
    return b0;
  } else if ((b0 & 0xE0) == 0xC0) {
    extra = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    extra = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    extra = 3;
    cp = b0 & 0x07;
  } else {
    ++pos;
    return -1;
  }
  if (pos + static_cast<std::size_t>(extra) >= s.size()) {
    ++pos;
    return -1;
  }
  for (int i = 1; i <= extra; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + static_cast<std::size_t>(i)]);
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return -1;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  pos += static_cast<std::size_t>(extra) + 1;
  return cp;
}

enum class CharKind { letter, digit, apostrophe, separator };

CharKind classify(long cp) {
  if (cp < 0) return CharKind::separator;
  if (cp < 0x80) {
    const char c = static_cast<char>(cp);
    if (is_digit(c)) return CharKind::digit;
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) return CharKind::letter;
    if (c == '\'') return CharKind::apostrophe;
    return CharKind::separator;
  }
  if (cp == 0x2018 || cp == 0x2019 || cp == 0x02BC) return CharKind::apostrophe;
  const bool latin = cp >= 0xC0 && cp <= 0x24F && cp != 0xD7 && cp != 0xF7;
  const bool other_scripts = (cp >= 0x370 && cp <= 0x1FFF) || (cp >= 0x3040 && cp <= 0x9FFF) ||
                             (cp >= 0xAC00 && cp <= 0xD7AF) || (cp >= 0xF900 && cp <= 0xFAFF);
  return (latin || other_scripts) ? CharKind::letter : CharKind::separator;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), is_digit);
}

bool is_number_run(std::string_view s) {
  // digits, optionally with single ',' or '.' between digits
  if (s.empty() || !is_digit(s.front()) || !is_digit(s.back())) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (is_digit(s[i])) continue;
    if ((s[i] == ',' || s[i] == '.') && is_digit(s[i + 1])) continue;
    return false;
  }
  return true;
}

void emit(TokenSeq& out, std::string& raw) {
  if (raw.empty()) return;
  if (is_number_run(raw)) {
    out.emplace_back(kNumberToken);
  } else if (raw.find_first_of(",.") == std::string::npos) {
    out.push_back(all_digits(raw) ? std::string(kNumberToken) : raw);
  } else {
    // A numeric prefix glued to letters, e.g. "3.5mm": split at the separators.
    std::size_t start = 0;
    while (start <= raw.size()) {
      std::size_t end = raw.find_first_of(",.", start);
      if (end == std::string::npos) end = raw.size();
      std::string part = raw.substr(start, end - start);
      if (!part.empty()) out.push_back(all_digits(part) ? std::string(kNumberToken) : part);
      start = end + 1;
    }
  }
  raw.clear();
}

}  // namespace

const char* to_string(FieldView v) noexcept { return kViewNames[static_cast<std::size_t>(v)]; }

std::optional<FieldView> parse_view(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kViewNames.size(); ++i) {
    if (name == kViewNames[i]) return static_cast<FieldView>(i);
  }
  return std::nullopt;
}

std::vector<std::string> view_texts(const Post& post, FieldView view) {
  switch (view) {
    case FieldView::post_text: return post.post_text;
    case FieldView::target_title: return {post.target_title};
    case FieldView::target_description: return {post.target_description};
    case FieldView::target_keywords: return {post.target_keywords};
    case FieldView::target_paragraphs: return post.target_paragraphs;
    case FieldView::target_captions: return post.target_captions;
    case FieldView::all_concatenated: {
      std::vector<std::string> all;
      for (std::size_t i = 0; i + 1 < kAllViews.size(); ++i) {
        auto part = view_texts(post, kAllViews[i]);
        all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
      }
      return all;
    }
  }
  return {};
}

std::string strip_html(std::string_view text) {
  std::string stripped;
  stripped.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '<') {
      const std::size_t close = text.find_first_of("<>", i + 1);
      if (close != std::string_view::npos && text[close] == '>') {
        i = close + 1;
        continue;
      }
    }
    stripped.push_back(text[i++]);
  }

  static constexpr std::array<std::pair<std::string_view, char>, 5> kEntities = {{
      {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&#39;", '\''},
  }};
  std::string out;
  out.reserve(stripped.size());
  std::string_view rest = stripped;
  while (!rest.empty()) {
    bool replaced = false;
    if (rest.front() == '&') {
      for (const auto& [entity, ch] : kEntities) {
        if (rest.starts_with(entity)) {
          out.push_back(ch);
          rest.remove_prefix(entity.size());
          replaced = true;
          break;
        }
      }
    }
    if (!replaced) {
      out.push_back(rest.front());
      rest.remove_prefix(1);
    }
  }
  return out;
}

std::vector<std::string> dedupe_sentences(const std::vector<std::string>& texts) {
  std::unordered_set<std::string> seen;
  std::vector<std::string> out;
  for (const auto& text : texts) {
    std::string kept;
    auto keep_sentence = [&](std::string_view sentence) {
      std::string clean = trim_collapse(sentence, false);
      if (clean.empty()) return;
      if (!seen.insert(trim_collapse(clean, true)).second) return;
      if (!kept.empty()) kept.push_back(' ');
      kept += clean;
    };
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
      const char c = text[i];
      if ((c == '.' || c == '!' || c == '?') && (i + 1 == text.size() || is_space(text[i + 1]))) {
        keep_sentence(std::string_view(text).substr(start, i + 1 - start));
        start = i + 1;
      }
    }
    if (start < text.size()) keep_sentence(std::string_view(text).substr(start));
    if (!kept.empty()) out.push_back(std::move(kept));
  }
  return out;
}

TokenSeq tokenize(std::string_view text) {
  TokenSeq out;
  std::string raw;
  std::size_t pos = 0;
  while (pos < text.size()) {
    // The number token itself survives re-tokenization.
    if (text[pos] == '[' && pos + 2 < text.size() && ascii_lower(text[pos + 1]) == 'n' && text[pos + 2] == ']') {
      emit(out, raw);
      out.emplace_back(kNumberToken);
      pos += 3;
      continue;
    }
    const std::size_t begin = pos;
    const long cp = decode_utf8(text, pos);
    switch (classify(cp)) {
      case CharKind::letter:
        for (std::size_t i = begin; i < pos; ++i) raw.push_back(ascii_lower(text[i]));
        break;
      case CharKind::digit:
        raw.push_back(static_cast<char>(cp));
        break;
      case CharKind::apostrophe:
        break;
      case CharKind::separator: {
        const char c = static_cast<char>(cp);
        const bool joins_digits = (cp == ',' || cp == '.') && !raw.empty() && is_digit(raw.back()) &&
                                  pos < text.size() && is_digit(text[pos]);
        if (joins_digits) {
          raw.push_back(c);
        } else {
          emit(out, raw);
        }
        break;
      }
    }
  }
  emit(out, raw);
  return out;
}

Stopwords::Stopwords(std::vector<std::string> words) {
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  std::string joined;
  for (const auto& w : words) {
    joined += w;
    joined.push_back('\n');
  }
  digest_ = io::fnv1a_hex(joined);
  words_.insert(words.begin(), words.end());
}

Stopwords Stopwords::from_text(std::string_view text) {
  std::vector<std::string> words;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::string w = trim_collapse(line, true);
    if (w.empty() || w.front() == '#') continue;
    words.push_back(std::move(w));
  }
  return Stopwords(std::move(words));
}

const Stopwords& Stopwords::builtin() {
  static const Stopwords list = from_text(kBuiltinStopwords);
  return list;
}

Stopwords Stopwords::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open stopword file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str());
}

Stopwords Stopwords::from_environment() {
  if (const char* path = std::getenv("BAITPRESS_STOPWORDS"); path != nullptr && *path != '\0') {
    return from_file(path);
  }
  return builtin();
}

bool Stopwords::contains(std::string_view token) const { return words_.contains(std::string(token)); }

TokenSeq remove_stopwords(const TokenSeq& seq, const Stopwords& stopwords) {
  TokenSeq out;
  out.reserve(seq.size());
  for (const auto& t : seq) {
    if (t == kNumberToken || !stopwords.contains(t)) out.push_back(t);
  }
  return out;
}

TokenSeq preprocess_texts(const std::vector<std::string>& texts, const Stopwords& stopwords) {
  TokenSeq out;
  for (const auto& text : dedupe_sentences(texts)) {
    for (auto& token : tokenize(strip_html(text))) {
      if (token != kNumberToken && stopwords.contains(token)) continue;
      out.push_back(token == kNumberToken ? std::move(token) : porter_stem(token));
    }
  }
  return out;
}

TokenSeq preprocess_field(const Post& post, FieldView view, const Stopwords& stopwords) {
  return preprocess_texts(view_texts(post, view), stopwords);
}

}  // namespace baitpress
