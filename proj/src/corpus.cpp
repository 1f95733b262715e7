#include "baitpress/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <unordered_set>

#include <json.hpp>

#include "baitpress/error.hpp"

namespace baitpress {

namespace {

using nlohmann::json;

constexpr std::array<double, 4> kScale = {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0};
constexpr double kSnapTolerance = 0.01;

std::string string_field(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_string()) throw ParseError(line, std::string("\"") + key + "\" is not a string");
  return it->get<std::string>();
}

std::vector<std::string> list_field(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  // A bare string is accepted as a one-element list.
  if (it->is_string()) return {it->get<std::string>()};
  if (!it->is_array()) throw ParseError(line, std::string("\"") + key + "\" is not an array");
  std::vector<std::string> out;
  out.reserve(it->size());
  for (const auto& v : *it) {
    if (!v.is_string()) throw ParseError(line, std::string("\"") + key + "\" holds a non-string");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::string id_field(const json& obj, std::size_t line) {
  auto it = obj.find("id");
  if (it == obj.end()) throw ParseError(line, "missing \"id\"");
  std::string id;
  if (it->is_string()) {
    id = it->get<std::string>();
  } else if (it->is_number_integer()) {
    id = it->dump();
  } else {
    throw ParseError(line, "\"id\" must be a string");
  }
  if (id.empty()) throw ParseError(line, "empty \"id\"");
  return id;
}

template <typename Fn>
void for_each_json_line(std::istream& in, Fn&& fn) {
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(line, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw ParseError(line, "expected a JSON object");
    fn(obj, line);
  }
}

double snap(double v) {
  for (double s : kScale) {
    if (std::abs(v - s) <= kSnapTolerance) return s;
  }
  return v;
}

}  // namespace

const TruthLabel& Dataset::label(const Post& post) const {
  if (!labels) throw InputError("dataset is unlabeled");
  auto it = labels->find(post.id);
  if (it == labels->end()) throw InputError("no label for post " + post.id);
  return it->second;
}

std::vector<Post> parse_instances(std::istream& in) {
  std::vector<Post> posts;
  std::unordered_set<std::string> seen;
  for_each_json_line(in, [&](const json& obj, std::size_t line) {
    Post p;
    p.id = id_field(obj, line);
    if (!seen.insert(p.id).second) throw InputError("duplicate post id " + p.id + " (line " + std::to_string(line) + ")");
    p.post_text = list_field(obj, "postText", line);
    p.post_media = list_field(obj, "postMedia", line);
    if (auto it = obj.find("postTimestamp"); it != obj.end() && !it->is_null()) {
      p.post_timestamp = string_field(obj, "postTimestamp", line);
    }
    p.target_title = string_field(obj, "targetTitle", line);
    p.target_description = string_field(obj, "targetDescription", line);
    p.target_keywords = string_field(obj, "targetKeywords", line);
    p.target_paragraphs = list_field(obj, "targetParagraphs", line);
    p.target_captions = list_field(obj, "targetCaptions", line);
    posts.push_back(std::move(p));
  });
  return posts;
}

TruthLabel make_label(std::string id, const std::vector<double>& raw_judgments) {
  if (raw_judgments.empty()) throw InputError("post " + id + ": empty judgment list");
  TruthLabel label;
  label.id = std::move(id);
  label.judgments.reserve(raw_judgments.size());
  for (double raw : raw_judgments) {
    if (!std::isfinite(raw) || raw < -kSnapTolerance || raw > 1.0 + kSnapTolerance) {
      throw InputError("post " + label.id + ": judgment " + std::to_string(raw) + " outside [0, 1]");
    }
    double v = snap(raw);
    if (std::find(kScale.begin(), kScale.end(), v) == kScale.end()) {
      throw InputError("post " + label.id + ": judgment " + std::to_string(raw) + " is not on the 0, 1/3, 2/3, 1 scale");
    }
    label.judgments.push_back(v);
  }
  const double n = static_cast<double>(label.judgments.size());
  double sum = 0.0;
  for (double v : label.judgments) sum += v;
  label.mean = sum / n;
  double sq = 0.0;
  for (double v : label.judgments) sq += (v - label.mean) * (v - label.mean);
  label.std = std::sqrt(sq / n);
  label.label = derive_class(label);
  return label;
}

LabelMap parse_truth(std::istream& in) {
  LabelMap labels;
  for_each_json_line(in, [&](const json& obj, std::size_t line) {
    std::string id = id_field(obj, line);
    auto it = obj.find("truthJudgments");
    if (it == obj.end() || !it->is_array()) throw ParseError(line, "missing \"truthJudgments\" array");
    std::vector<double> raw;
    for (const auto& v : *it) {
      if (!v.is_number()) throw ParseError(line, "non-numeric judgment");
      raw.push_back(v.get<double>());
    }
    TruthLabel label;
    try {
      label = make_label(id, raw);
    } catch (const InputError& e) {
      throw ParseError(line, e.what());
    }
    if (auto m = obj.find("truthMean"); m != obj.end() && m->is_number()) {
      if (std::abs(m->get<double>() - label.mean) > kSnapTolerance) {
        throw ParseError(line, "truthMean " + m->dump() + " disagrees with judgments (mean " + std::to_string(label.mean) + ")");
      }
    }
    if (!labels.emplace(id, std::move(label)).second) throw InputError("duplicate truth id " + id + " (line " + std::to_string(line) + ")");
  });
  return labels;
}

PostClass derive_class(const TruthLabel& label) noexcept {
  return label.mean > 0.5 ? PostClass::clickbait : PostClass::no_clickbait;
}

DatasetStats dataset_stats(const Dataset& ds) {
  DatasetStats stats;
  stats.n_posts = ds.posts.size();
  if (!ds.labels) return stats;
  std::size_t bait = 0;
  for (const auto& p : ds.posts) {
    if (ds.label(p).label == PostClass::clickbait) ++bait;
  }
  stats.n_clickbait = bait;
  stats.n_no_clickbait = stats.n_posts - bait;
  return stats;
}

Dataset make_dataset(std::vector<Post> posts, std::optional<LabelMap> labels) {
  if (labels) {
    for (const auto& p : posts) {
      if (!labels->contains(p.id)) throw MismatchError("post " + p.id + " has no truth label");
    }
    if (labels->size() != posts.size()) {
      std::unordered_set<std::string> ids;
      for (const auto& p : posts) ids.insert(p.id);
      for (const auto& [id, _] : *labels) {
        if (!ids.contains(id)) throw MismatchError("truth label " + id + " has no post");
      }
    }
  }
  return Dataset{std::move(posts), std::move(labels)};
}

Dataset load_dataset(const std::string& instances_path, const std::optional<std::string>& truth_path) {
  std::ifstream in(instances_path);
  if (!in) throw InputError("cannot open instances file " + instances_path);
  auto posts = parse_instances(in);
  std::optional<LabelMap> labels;
  if (truth_path) {
    std::ifstream tin(*truth_path);
    if (!tin) throw InputError("cannot open truth file " + *truth_path);
    labels = parse_truth(tin);
  }
  return make_dataset(std::move(posts), std::move(labels));
}

std::string serialize_post(const Post& post) {
  json obj = json::object();
  obj["id"] = post.id;
  if (post.post_timestamp) obj["postTimestamp"] = *post.post_timestamp;
  obj["postText"] = post.post_text;
  obj["postMedia"] = post.post_media;
  obj["targetTitle"] = post.target_title;
  obj["targetDescription"] = post.target_description;
  obj["targetKeywords"] = post.target_keywords;
  obj["targetParagraphs"] = post.target_paragraphs;
  obj["targetCaptions"] = post.target_captions;
  return obj.dump();
}

const char* to_string(Target t) noexcept { return t == Target::mean ? "mean" : "std"; }

std::vector<double> targets(const Dataset& ds, Target t) {
  std::vector<double> y;
  y.reserve(ds.posts.size());
  for (const auto& p : ds.posts) {
    const auto& l = ds.label(p);
    y.push_back(t == Target::mean ? l.mean : l.std);
  }
  return y;
}

}  // namespace baitpress
