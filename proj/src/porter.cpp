#include "baitpress/porter.hpp"

#include <algorithm>
#include <initializer_list>
#include <utility>

namespace baitpress {

namespace {

// Working state: the word occupies buf_[0..k_]; j_ marks the end of the stem
// preceding the suffix most recently matched by ends().
class Stemmer {
 public:
  explicit Stemmer(std::string_view word) : buf_(word), k_(static_cast<int>(word.size()) - 1) {}

  std::string run() {
    step1ab();
    step1c();
    step2();
    step3();
    step4();
    step5();
    buf_.resize(static_cast<std::size_t>(k_ + 1));
    return std::move(buf_);
  }

 private:
  char at(int i) const { return buf_[static_cast<std::size_t>(i)]; }

  bool consonant(int i) const {
    switch (at(i)) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 || !consonant(i - 1);
      default:
        return true;
    }
  }

  // Number of vowel-consonant sequences in buf_[0..j_].
  int measure() const {
    int n = 0;
    int i = 0;
    while (i <= j_ && consonant(i)) ++i;
    while (true) {
      while (i <= j_ && !consonant(i)) ++i;
      if (i > j_) return n;
      while (i <= j_ && consonant(i)) ++i;
      ++n;
      if (i > j_) return n;
    }
  }

  bool vowel_in_stem() const {
    for (int i = 0; i <= j_; ++i) {
      if (!consonant(i)) return true;
    }
    return false;
  }

  bool double_consonant(int i) const {
    return i >= 1 && at(i) == at(i - 1) && consonant(i);
  }

  // consonant-vowel-consonant ending at i, where the last is not w, x or y.
  bool cvc(int i) const {
    if (i < 2 || !consonant(i) || consonant(i - 1) || !consonant(i - 2)) return false;
    const char c = at(i);
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends(std::string_view suffix) {
    const int len = static_cast<int>(suffix.size());
    if (len > k_ + 1) return false;
    if (std::string_view(buf_).substr(static_cast<std::size_t>(k_ + 1 - len), suffix.size()) != suffix) return false;
    j_ = k_ - len;
    return true;
  }

  void set_to(std::string_view replacement) {
    buf_.replace(static_cast<std::size_t>(j_ + 1), static_cast<std::size_t>(k_ - j_), replacement);
    k_ = j_ + static_cast<int>(replacement.size());
  }

  void replace_if_measured(std::string_view replacement) {
    if (measure() > 0) set_to(replacement);
  }

  // Tries each (suffix, replacement) pair in order; the first matching suffix
  // is replaced when the stem before it has measure > 0.
  void apply_rules(std::initializer_list<std::pair<std::string_view, std::string_view>> rules) {
    for (const auto& [suffix, replacement] : rules) {
      if (ends(suffix)) {
        replace_if_measured(replacement);
        return;
      }
    }
  }

  // Plurals and -ed / -ing.
  void step1ab() {
    if (at(k_) == 's') {
      if (ends("sses")) {
        k_ -= 2;
      } else if (ends("ies")) {
        set_to("i");
      } else if (at(k_ - 1) != 's') {
        --k_;
      }
    }
    if (ends("eed")) {
      if (measure() > 0) --k_;
    } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
      k_ = j_;
      if (ends("at")) {
        set_to("ate");
      } else if (ends("bl")) {
        set_to("ble");
      } else if (ends("iz")) {
        set_to("ize");
      } else if (double_consonant(k_)) {
        --k_;
        const char c = at(k_);
        if (c == 'l' || c == 's' || c == 'z') ++k_;
      } else if (measure() == 1 && cvc(k_)) {
        set_to("e");
      }
    }
  }

  // Terminal y -> i when the stem has another vowel.
  void step1c() {
    if (ends("y") && vowel_in_stem()) buf_[static_cast<std::size_t>(k_)] = 'i';
  }

  void step2() {
    if (k_ < 1) return;
    switch (at(k_ - 1)) {
      case 'a': apply_rules({{"ational", "ate"}, {"tional", "tion"}}); break;
      case 'c': apply_rules({{"enci", "ence"}, {"anci", "ance"}}); break;
      case 'e': apply_rules({{"izer", "ize"}}); break;
      // "bli" rather than "abli": a departure of the reference release.
      case 'l': apply_rules({{"bli", "ble"}, {"alli", "al"}, {"entli", "ent"}, {"eli", "e"}, {"ousli", "ous"}}); break;
      case 'o': apply_rules({{"ization", "ize"}, {"ation", "ate"}, {"ator", "ate"}}); break;
      case 's': apply_rules({{"alism", "al"}, {"iveness", "ive"}, {"fulness", "ful"}, {"ousness", "ous"}}); break;
      case 't': apply_rules({{"aliti", "al"}, {"iviti", "ive"}, {"biliti", "ble"}}); break;
      // Also a departure of the reference release.
      case 'g': apply_rules({{"logi", "log"}}); break;
      default: break;
    }
  }

  void step3() {
    switch (at(k_)) {
      case 'e': apply_rules({{"icate", "ic"}, {"ative", ""}, {"alize", "al"}}); break;
      case 'i': apply_rules({{"iciti", "ic"}}); break;
      case 'l': apply_rules({{"ical", "ic"}, {"ful", ""}}); break;
      case 's': apply_rules({{"ness", ""}}); break;
      default: break;
    }
  }

  bool ends_any(std::initializer_list<std::string_view> suffixes) {
    return std::any_of(suffixes.begin(), suffixes.end(), [this](std::string_view s) { return ends(s); });
  }

  // Strips -ant, -ence, ... when the remaining stem has measure > 1.
  void step4() {
    if (k_ < 1) return;
    bool matched = false;
    switch (at(k_ - 1)) {
      case 'a': matched = ends("al"); break;
      case 'c': matched = ends_any({"ance", "ence"}); break;
      case 'e': matched = ends("er"); break;
      case 'i': matched = ends("ic"); break;
      case 'l': matched = ends_any({"able", "ible"}); break;
      case 'n': matched = ends_any({"ant", "ement", "ment", "ent"}); break;
      case 'o':
        matched = (ends("ion") && j_ >= 0 && (at(j_) == 's' || at(j_) == 't')) || ends("ou");
        break;
      case 's': matched = ends("ism"); break;
      case 't': matched = ends_any({"ate", "iti"}); break;
      case 'u': matched = ends("ous"); break;
      case 'v': matched = ends("ive"); break;
      case 'z': matched = ends("ize"); break;
      default: break;
    }
    if (matched && measure() > 1) k_ = j_;
  }

  // Final -e and -ll.
  void step5() {
    j_ = k_;
    if (at(k_) == 'e') {
      const int m = measure();
      if (m > 1 || (m == 1 && !cvc(k_ - 1))) --k_;
    }
    if (at(k_) == 'l' && double_consonant(k_) && measure() > 1) --k_;
  }

  std::string buf_;
  int k_;
  int j_ = 0;
};

bool is_lower_ascii_word(std::string_view w) {
  return std::all_of(w.begin(), w.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

}  // namespace

std::string porter_stem(std::string_view word) {
  if (word.size() <= 2 || !is_lower_ascii_word(word)) return std::string(word);
  return Stemmer(word).run();
}

}  // namespace baitpress
