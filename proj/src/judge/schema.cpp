#include "revq/judge/schema.hpp"

#include <functional>

#include "revq/errors.hpp"
#include "revq/text.hpp"
#include "revq/vocab.hpp"

namespace revq::judge {

namespace {

using nlohmann::json;

struct Checker {
  const std::string& raw;

  [[noreturn]] void fail(const std::string& path, const std::string& why) const {
    throw SchemaViolation(path, why, raw);
  }

  const json& object(const json& j, const std::string& path) const {
    if (!j.is_object()) fail(path, "expected object");
    return j;
  }

  const json& key(const json& obj, const std::string& path,
                  const std::string& name) const {
    object(obj, path);
    auto it = obj.find(name);
    if (it == obj.end()) fail(path + "." + name, "required key missing");
    return *it;
  }

  std::string str(const json& obj, const std::string& path,
                  const std::string& name) const {
    const json& v = key(obj, path, name);
    if (!v.is_string()) fail(path + "." + name, "expected string");
    return v.get<std::string>();
  }

  const json& array(const json& obj, const std::string& path,
                    const std::string& name) const {
    const json& v = key(obj, path, name);
    if (!v.is_array()) fail(path + "." + name, "expected array");
    return v;
  }

  long integer(const json& obj, const std::string& path, const std::string& name,
               long lo, long hi) const {
    const json& v = key(obj, path, name);
    if (!v.is_number_integer())
      fail(path + "." + name, "expected integer");
    long n = v.get<long>();
    if (n < lo || n > hi)
      fail(path + "." + name, "value " + std::to_string(n) + " outside [" +
                                  std::to_string(lo) + "," + std::to_string(hi) +
                                  "]");
    return n;
  }

  bool boolean(const json& obj, const std::string& path,
               const std::string& name) const {
    const json& v = key(obj, path, name);
    if (!v.is_boolean()) fail(path + "." + name, "expected boolean");
    return v.get<bool>();
  }

  template <std::size_t N>
  std::string enumerated(const json& obj, const std::string& path,
                         const std::string& name,
                         const std::array<std::string_view, N>& allowed) const {
    std::string v = str(obj, path, name);
    for (auto a : allowed)
      if (a == v) return v;
    fail(path + "." + name, "value '" + v + "' not in enumeration");
  }

  void string_array(const json& obj, const std::string& path,
                    const std::string& name) const {
    const json& arr = array(obj, path, name);
    for (std::size_t i = 0; i < arr.size(); ++i)
      if (!arr[i].is_string())
        fail(path + "." + name + "[" + std::to_string(i) + "]",
             "expected string");
  }
};

void validate_indexed_list(const Checker& c, const json& doc,
                           const std::string& list_key,
                           const std::function<void(const Checker&, const json&,
                                                    const std::string&)>& item) {
  const json& arr = c.array(doc, "$", list_key);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string path = list_key + "[" + std::to_string(i) + "]";
    c.object(arr[i], path);
    item(c, arr[i], path);
  }
}

void validate_doa_classification(const Checker& c, const json& doc) {
  validate_indexed_list(c, doc, "units",
                        [](const Checker& ck, const json& u, const std::string& p) {
                          ck.integer(u, p, "index", 1, 1L << 30);
                          ck.enumerated(u, p, "role", vocab::kRoleNames);
                          ck.enumerated(u, p, "aspect", vocab::kAspectNames);
                        });
}

void validate_doa_grounding(const Checker& c, const json& doc) {
  validate_indexed_list(c, doc, "premises",
                        [](const Checker& ck, const json& u, const std::string& p) {
                          ck.integer(u, p, "index", 1, 1L << 30);
                          ck.integer(u, p, "grounding", 0, 2);
                        });
}

void validate_novelty_extraction(const Checker& c, const json& doc) {
  const json& paper = c.key(doc, "$", "paper");
  c.str(paper, "paper", "core_task");
  if (paper.contains("contributions")) {
    const json& contribs = c.array(paper, "paper", "contributions");
    for (std::size_t i = 0; i < contribs.size(); ++i) {
      std::string p = "paper.contributions[" + std::to_string(i) + "]";
      c.str(contribs[i], p, "name");
      if (contribs[i].contains("author_claim_text"))
        c.str(contribs[i], p, "author_claim_text");
      if (contribs[i].contains("description")) c.str(contribs[i], p, "description");
      if (contribs[i].contains("source_hint")) c.str(contribs[i], p, "source_hint");
    }
  }
  if (paper.contains("key_terms")) c.string_array(paper, "paper", "key_terms");
  if (paper.contains("must_have_entities"))
    c.string_array(paper, "paper", "must_have_entities");

  const json& review = c.key(doc, "$", "review");
  const json& claims = c.array(review, "review", "novelty_claims");
  for (std::size_t i = 0; i < claims.size(); ++i) {
    std::string p = "review.novelty_claims[" + std::to_string(i) + "]";
    c.str(claims[i], p, "claim_id");
    c.str(claims[i], p, "text");
    c.enumerated(claims[i], p, "stance", vocab::kStanceNames);
    if (claims[i].contains("confidence_lang"))
      c.enumerated(claims[i], p, "confidence_lang",
                   std::array<std::string_view, 3>{"high", "medium", "low"});
    if (claims[i].contains("mentions_prior_work"))
      c.boolean(claims[i], p, "mentions_prior_work");
    if (claims[i].contains("prior_work_strings"))
      c.string_array(claims[i], p, "prior_work_strings");
  }
  if (review.contains("all_citations_raw"))
    c.string_array(review, "review", "all_citations_raw");
}

void validate_novelty_verdict(const Checker& c, const json& doc) {
  c.object(doc, "$");
  long score = c.integer(doc, "$", "score", -2, 2);
  std::string label = c.enumerated(doc, "$", "label", vocab::kVerdictLabelNames);
  auto parsed = vocab::parse_verdict_label(label);
  if (vocab::verdict_score(*parsed) != static_cast<int>(score))
    c.fail("label", "label '" + label + "' inconsistent with score " +
                        std::to_string(score));
  if (doc.contains("stance_alignment"))
    c.enumerated(doc, "$", "stance_alignment",
                 std::array<std::string_view, 4>{"aligned", "partial",
                                                 "insufficient", "contradicted"});
  if (doc.contains("calibration"))
    c.enumerated(doc, "$", "calibration",
                 std::array<std::string_view, 4>{"accurate", "overstated",
                                                 "understated", "N/A"});
  if (doc.contains("classification")) {
    const json& cls = c.key(doc, "$", "classification");
    c.integer(cls, "classification", "claim", 0, 1);
    c.integer(cls, "classification", "proof", 0, 1);
  }
}

void validate_flaw_atomization(const Checker& c, const json& doc) {
  validate_indexed_list(
      c, doc, "micro_flaws",
      [](const Checker& ck, const json& f, const std::string& p) {
        ck.str(f, p, "flaw_id");
        ck.str(f, p, "description");
        ck.enumerated(f, p, "macro_topic", vocab::kMacroTopics);
        const json& contributors = ck.array(f, p, "contributors");
        if (contributors.empty())
          ck.fail(p + ".contributors", "at least one contributor required");
        for (std::size_t j = 0; j < contributors.size(); ++j) {
          std::string cp = p + ".contributors[" + std::to_string(j) + "]";
          ck.str(contributors[j], cp, "reviewer_id");
          ck.str(contributors[j], cp, "argument_text");
        }
      });
}

void validate_flaw_adjudication(const Checker& c, const json& doc) {
  validate_indexed_list(
      c, doc, "verdicts",
      [](const Checker& ck, const json& v, const std::string& p) {
        ck.str(v, p, "flaw_id");
        bool valid = ck.boolean(v, p, "is_valid");
        if (valid) {
          ck.enumerated(v, p, "severity", vocab::kSeverityNames);
        } else if (v.contains("severity") && !v["severity"].is_null()) {
          ck.fail(p + ".severity", "severity must be absent for invalid flaws");
        }
      });
}

void validate_arc_extraction(const Checker& c, const json& doc) {
  validate_indexed_list(c, doc, "arcs",
                        [](const Checker& ck, const json& a, const std::string& p) {
                          ck.str(a, p, "arc_id");
                          ck.str(a, p, "text");
                          ck.str(a, p, "anchor_quote");
                          ck.enumerated(a, p, "comment_type",
                                        vocab::kCommentTypeNames);
                        });
}

void validate_arc_scoring(const Checker& c, const json& doc) {
  validate_indexed_list(c, doc, "scores",
                        [](const Checker& ck, const json& s, const std::string& p) {
                          ck.str(s, p, "arc_id");
                          for (const char* d : {"D1", "D2", "D3", "D4", "D5"})
                            ck.integer(s, p, d, 0, 2);
                        });
}

}  // namespace

void validate_phase_document(const json& doc, Phase phase,
                             const std::string& raw_for_audit) {
  Checker c{raw_for_audit};
  switch (phase) {
    case Phase::DoaSegmentation:
      if (!doc.is_string() || doc.get<std::string>().empty())
        c.fail("$", "expected non-empty marked text");
      return;
    case Phase::DoaClassification: return validate_doa_classification(c, doc);
    case Phase::DoaGrounding: return validate_doa_grounding(c, doc);
    case Phase::NoveltyExtraction: return validate_novelty_extraction(c, doc);
    case Phase::NoveltyVerdict: return validate_novelty_verdict(c, doc);
    case Phase::FlawAtomization: return validate_flaw_atomization(c, doc);
    case Phase::FlawAdjudication: return validate_flaw_adjudication(c, doc);
    case Phase::ArcExtraction: return validate_arc_extraction(c, doc);
    case Phase::ArcScoring: return validate_arc_scoring(c, doc);
  }
  c.fail("$", "unknown phase");
}

nlohmann::json parse_strict_json(const std::string& raw, Phase phase) {
  if (phase_response_kind(phase) == ResponseKind::Text) {
    std::string body = text::trim(raw);
    json doc = body;
    validate_phase_document(doc, phase, raw);
    return doc;
  }
  std::string body = text::trim_code_fence(raw);
  json doc = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded())
    throw SchemaViolation("$", "response is not valid JSON", raw);
  validate_phase_document(doc, phase, raw);
  return doc;
}

}  // namespace revq::judge
