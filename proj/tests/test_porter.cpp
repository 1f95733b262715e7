#include <gtest/gtest.h>

#include <fstream>

#include "baitpress/porter.hpp"
#include "fixture.hpp"

using baitpress::porter_stem;

namespace {

std::vector<std::pair<std::string, std::string>> load_vocabulary() {
  std::ifstream in(fixture::data_dir() / "porter_vocabulary.txt");
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    pairs.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return pairs;
}

}  // namespace

TEST(Porter, ReferenceVocabulary) {
  const auto pairs = load_vocabulary();
  ASSERT_GE(pairs.size(), 500u);
  std::size_t wrong = 0;
  for (const auto& [word, stem] : pairs) {
    if (porter_stem(word) != stem) {
      ++wrong;
      ADD_FAILURE() << word << " -> " << porter_stem(word) << ", expected " << stem;
    }
  }
  EXPECT_EQ(wrong, 0u);
}

TEST(Porter, StemsFromTopWeightList) {
  EXPECT_EQ(porter_stem("pictures"), "pictur");
  EXPECT_EQ(porter_stem("celebrities"), "celebr");
  EXPECT_EQ(porter_stem("things"), "thing");
  EXPECT_EQ(porter_stem("artists"), "artist");
  EXPECT_EQ(porter_stem("memes"), "meme");
}

TEST(Porter, ClassicExamples) {
  EXPECT_EQ(porter_stem("caresses"), "caress");
  EXPECT_EQ(porter_stem("ponies"), "poni");
  EXPECT_EQ(porter_stem("relational"), "relat");
  EXPECT_EQ(porter_stem("generalization"), "gener");
  EXPECT_EQ(porter_stem("hopping"), "hop");
  EXPECT_EQ(porter_stem("filing"), "file");
  EXPECT_EQ(porter_stem("controll"), "control");
}

TEST(Porter, PassThrough) {
  EXPECT_EQ(porter_stem("[n]"), "[n]");
  EXPECT_EQ(porter_stem("is"), "is");
  EXPECT_EQ(porter_stem("a"), "a");
  EXPECT_EQ(porter_stem("7up"), "7up");
  EXPECT_EQ(porter_stem("caf\xc3\xa9s"), "caf\xc3\xa9s");
}
