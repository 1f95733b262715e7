#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace baitpress {

/// One social-media post as stored in a challenge instance file.
/// Absent JSON keys parse to empty strings / empty lists.
struct Post {
  std::string id;
  std::vector<std::string> post_text;
  std::vector<std::string> post_media;  // file names only, never opened
  std::optional<std::string> post_timestamp;
  std::string target_title;
  std::string target_description;
  std::string target_keywords;
  std::vector<std::string> target_paragraphs;
  std::vector<std::string> target_captions;

  bool operator==(const Post&) const = default;
};

enum class PostClass { no_clickbait, clickbait };

/// Annotator judgments for one post plus the statistics derived from them.
struct TruthLabel {
  std::string id;
  std::vector<double> judgments;  // each one of {0, 1/3, 2/3, 1}
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  PostClass label = PostClass::no_clickbait;
};

using LabelMap = std::unordered_map<std::string, TruthLabel>;

struct DatasetStats {
  std::size_t n_posts = 0;
  std::optional<std::size_t> n_clickbait;
  std::optional<std::size_t> n_no_clickbait;
};

struct Dataset {
  std::vector<Post> posts;
  std::optional<LabelMap> labels;

  bool labeled() const noexcept { return labels.has_value(); }
  const TruthLabel& label(const Post& post) const;
};

/// Reads a line-delimited JSON instance file. Blank lines are skipped.
/// Throws ParseError for malformed lines and InputError for duplicate ids.
std::vector<Post> parse_instances(std::istream& in);

/// Reads a line-delimited JSON truth file. Judgments within 0.01 of a
/// scale point are snapped onto it; mean and std are recomputed.
LabelMap parse_truth(std::istream& in);

/// Builds a label from raw judgments (snapping included).
TruthLabel make_label(std::string id, const std::vector<double>& raw_judgments);

/// Clickbait iff mean > 0.5.
PostClass derive_class(const TruthLabel& label) noexcept;

DatasetStats dataset_stats(const Dataset& ds);

/// Joins posts with labels; every post needs exactly one label and vice versa.
Dataset make_dataset(std::vector<Post> posts, std::optional<LabelMap> labels);

Dataset load_dataset(const std::string& instances_path,
                     const std::optional<std::string>& truth_path);

/// Writes `post` as one line of an instance file (no trailing newline).
std::string serialize_post(const Post& post);

enum class Target { mean, std };

const char* to_string(Target t) noexcept;

/// Per-post target values in post order. Requires a labeled dataset.
std::vector<double> targets(const Dataset& ds, Target t);

}  // namespace baitpress
