#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "revq/review.hpp"

namespace revq::bench {

inline constexpr const char* kDecisions[] = {"oral", "spotlight", "poster",
                                             "reject"};

/// One paper of the corpus with its manuscript text and all reviews.
struct CorpusEntry {
  std::string paper_id;
  std::string venue;
  int year = 0;
  std::string decision;  // oral | spotlight | poster | reject
  std::string title;
  std::string paper_text;
  std::string abstract_text;
  std::string introduction;
  std::vector<ReviewDocument> reviews;

  bool accepted() const { return decision != "reject"; }

  /// Abstract + introduction when present, else a prefix of the body.
  std::string paper_context() const;

  bool operator==(const CorpusEntry&) const = default;
};

struct IngestDiagnostic {
  std::string path;
  std::string error;
};

struct IngestResult {
  std::vector<CorpusEntry> entries;
  std::vector<IngestDiagnostic> diagnostics;
};

/// Reads every *.json document in the directory (sorted by filename).
/// Malformed files become diagnostics and the run continues; an empty corpus
/// or a duplicate paper_id is an error.
IngestResult ingest_corpus(const std::filesystem::path& dir);

CorpusEntry parse_corpus_entry(const nlohmann::json& doc);
nlohmann::json corpus_entry_to_json(const CorpusEntry& entry);

/// Serializes one entry to `<paper_id>.json` in the directory.
void write_corpus_entry(const std::filesystem::path& dir,
                        const CorpusEntry& entry);

/// Merges the human reviews of an entry into one bundled ReviewDocument with
/// reviewer_id "human" (sections concatenated, review counts summed).
/// Non-human reviews pass through unchanged.
std::vector<ReviewDocument> bundle_reviews(const CorpusEntry& entry,
                                           bool concatenate_humans);

}  // namespace revq::bench
