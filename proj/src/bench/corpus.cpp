#include "revq/bench/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "revq/errors.hpp"
#include "revq/text.hpp"

namespace revq::bench {

namespace {

using nlohmann::json;

std::string require_string(const json& doc, const std::string& key,
                           bool non_empty = true) {
  if (!doc.contains(key) || !doc[key].is_string())
    throw InvalidArgument("missing string field '" + key + "'");
  std::string v = doc[key].get<std::string>();
  if (non_empty && text::trim(v).empty())
    throw InvalidArgument("field '" + key + "' must be non-empty");
  return v;
}

}  // namespace

std::string CorpusEntry::paper_context() const {
  std::string ctx;
  if (!text::trim(abstract_text).empty()) ctx = text::trim(abstract_text);
  if (!text::trim(introduction).empty()) {
    if (!ctx.empty()) ctx += "\n\n";
    ctx += text::trim(introduction);
  }
  if (!ctx.empty()) return ctx;
  return paper_text.substr(0, std::min<std::size_t>(paper_text.size(), 4000));
}

CorpusEntry parse_corpus_entry(const json& doc) {
  if (!doc.is_object()) throw InvalidArgument("corpus document must be an object");

  CorpusEntry entry;
  entry.paper_id = require_string(doc, "paper_id");
  entry.venue = require_string(doc, "venue");
  if (!doc.contains("year") || !doc["year"].is_number_integer())
    throw InvalidArgument("missing integer field 'year'");
  entry.year = doc["year"].get<int>();
  entry.decision = require_string(doc, "decision");
  if (std::find(std::begin(kDecisions), std::end(kDecisions), entry.decision) ==
      std::end(kDecisions))
    throw InvalidArgument("decision '" + entry.decision +
                          "' not in {oral, spotlight, poster, reject}");
  entry.title = doc.value("title", "");
  entry.paper_text = require_string(doc, "paper_text");
  entry.abstract_text = doc.value("abstract", "");
  entry.introduction = doc.value("introduction", "");

  if (!doc.contains("reviews") || !doc["reviews"].is_array() ||
      doc["reviews"].empty())
    throw InvalidArgument("field 'reviews' must be a non-empty array");
  for (std::size_t i = 0; i < doc["reviews"].size(); ++i) {
    const json& r = doc["reviews"][i];
    ReviewDocument review;
    try {
      review.reviewer_id = require_string(r, "reviewer_id");
      review.reviewer_type = require_string(r, "reviewer_type");
      if (!r.contains("sections") || !r["sections"].is_object())
        throw InvalidArgument("missing object field 'sections'");
      for (const auto& [name, body] : r["sections"].items()) {
        if (!body.is_string())
          throw InvalidArgument("section '" + name + "' must be a string");
        review.sections[name] = body.get<std::string>();
      }
      review.review_count = r.value("review_count", 1);
      if (review.review_count < 1)
        throw InvalidArgument("review_count must be >= 1");
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("reviews[" + std::to_string(i) + "]: " + e.what());
    }
    entry.reviews.push_back(std::move(review));
  }
  return entry;
}

json corpus_entry_to_json(const CorpusEntry& entry) {
  json reviews = json::array();
  for (const auto& r : entry.reviews) {
    json sections = json::object();
    for (const auto& [name, body] : r.sections) sections[name] = body;
    reviews.push_back({{"reviewer_id", r.reviewer_id},
                       {"reviewer_type", r.reviewer_type},
                       {"sections", sections},
                       {"review_count", r.review_count}});
  }
  json doc = {{"paper_id", entry.paper_id},
              {"venue", entry.venue},
              {"year", entry.year},
              {"decision", entry.decision},
              {"paper_text", entry.paper_text},
              {"reviews", reviews}};
  if (!entry.title.empty()) doc["title"] = entry.title;
  if (!entry.abstract_text.empty()) doc["abstract"] = entry.abstract_text;
  if (!entry.introduction.empty()) doc["introduction"] = entry.introduction;
  return doc;
}

IngestResult ingest_corpus(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw InvalidArgument("corpus path is not a directory: " + dir.string());

  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  IngestResult result;
  std::map<std::string, std::string> seen;  // paper_id -> file
  for (const auto& path : files) {
    std::ifstream in(path);
    json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) {
      result.diagnostics.push_back({path.string(), "not valid JSON"});
      continue;
    }
    CorpusEntry entry;
    try {
      entry = parse_corpus_entry(doc);
    } catch (const InvalidArgument& e) {
      result.diagnostics.push_back({path.string(), e.what()});
      continue;
    }
    auto [it, inserted] = seen.emplace(entry.paper_id, path.string());
    if (!inserted)
      throw InvalidArgument("duplicate paper_id '" + entry.paper_id + "' in " +
                            it->second + " and " + path.string());
    result.entries.push_back(std::move(entry));
  }

  if (result.entries.empty())
    throw InvalidArgument("empty corpus: no valid documents in " + dir.string());
  return result;
}

void write_corpus_entry(const std::filesystem::path& dir,
                        const CorpusEntry& entry) {
  std::filesystem::create_directories(dir);
  std::filesystem::path path = dir / (entry.paper_id + ".json");
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << corpus_entry_to_json(entry).dump(2) << "\n";
  }
  std::filesystem::rename(tmp, path);
}

std::vector<ReviewDocument> bundle_reviews(const CorpusEntry& entry,
                                           bool concatenate_humans) {
  if (!concatenate_humans) return entry.reviews;

  std::vector<ReviewDocument> out;
  ReviewDocument bundle;
  bundle.reviewer_id = "human";
  bundle.reviewer_type = "human";
  bundle.review_count = 0;
  for (const auto& r : entry.reviews) {
    if (!r.is_human()) {
      out.push_back(r);
      continue;
    }
    for (const auto& [name, body] : r.sections) {
      if (text::trim(body).empty()) continue;
      std::string& merged = bundle.sections[name];
      if (!merged.empty()) merged += "\n\n";
      merged += text::trim(body);
    }
    bundle.review_count += r.review_count;
  }
  if (bundle.review_count > 0) out.push_back(std::move(bundle));
  return out;
}

}  // namespace revq::bench
