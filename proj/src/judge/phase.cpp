#include "revq/judge/phase.hpp"

#include <algorithm>

#include "revq/errors.hpp"
#include "revq/text.hpp"

namespace revq::judge {

namespace {

constexpr std::string_view kDoaSegmentationTemplate =
    R"prompt(ROLE AND OBJECTIVE
You are an expert NLP researcher specializing in Scholarly Argumentation Mining. Your task is to segment the following scientific peer review text into distinct Argumentative Discourse Units (ADUs).

GUIDELINES
1. After each independent logical unit, insert the exact marker <sep>.
2. Keep the original text in the exact same order WITHOUT adding, removing, or altering any words.
3. CRITICAL: DO split complex/compound sentences when a conclusion/claim is joined with its supporting reason/evidence. Split at:
   - Logical and causal conjunctions ("because", "as", "since", "due to", "but", "however", etc).
   - Relative pronouns (e.g., "which", "that", "who", etc).
   - Participial phrases indicating result/proof ("demonstrating", "showing", "proving", "making", "resulting in", etc).
4. IGNORE structural headings entirely (e.g., "**Summary:**", "**Strengths:**"). DO NOT append <sep> to them.

INPUT REVIEW TEXT:
{raw_review_text})prompt";

constexpr std::string_view kDoaClassificationTemplate =
    R"prompt(ROLE AND OBJECTIVE
Classify the Argument Role and Aspect Topic for the provided list of segmented ADUs. Use the full review as macro-context. For EACH argument in the list, classify its Argument Role and Aspect Topic.

1. ARGUMENT ROLE CLASSIFICATION (Choose exactly ONE)
- Claim (Conclusion / Point): The statement that is being argued for. It is the controversial statement or the central point that needs support.
- Premise (Reason / Support): The statement that is used to support the Claim. It provides the reasons, evidence, justifications, or grounds to accept the Claim.

Example:
- Macro-Context: "The proposed method is not novel. Similar architectures were already introduced by Smith et al. (2023)."
- ADU: "The proposed method is not novel." -> Claim (Needs evidence to be proven).
- ADU: "Similar architectures were already introduced by Smith et al. (2023)." -> Premise (Direct evidence to support the Claim).

2. ASPECT TOPIC CLASSIFICATION (Choose exactly ONE)
- Novelty & Related Work: Discusses originality, plagiarism, or literature review.
- Methodology & Theoretical Soundness: Discusses math, algorithms, architecture, or dataset guidelines.
- Experimental Design & Evaluation: Discusses empirical setups, baselines, ablation studies, and metrics.
- Clarity, Presentation & Reproducibility: Discusses writing quality, typos, or formatting.

OUTPUT FORMAT
Respond ONLY with a valid JSON object of the exact form:
{"units": [{"index": 1, "role": "claim", "aspect": "methodology"}, ...]}
with one entry per argument in input order, "role" one of "claim" | "premise",
and "aspect" one of "novelty" | "methodology" | "experiment" | "clarity".

MACRO-CONTEXT: {macro_context}
LIST OF ARGUMENTS: {argument_list})prompt";

constexpr std::string_view kDoaGroundingTemplate =
    R"prompt(ROLE AND OBJECTIVE
You are an expert NLP researcher. I will provide a full peer review (for context) and a list of PREMISES (evidence). Evaluate the "Grounding Score" (Depth of Evidence) for EACH premise.

GROUNDING SCORE DEFINITIONS
- Score 0 (Generic / Vague): The premise is vague and lacks specific anchors (e.g., "The datasets", "Past research", "The equations").
- Score 1 (Internal Grounding): The premise explicitly anchors to elements INSIDE the manuscript (e.g., "Equation 4", "Table 2", "The proposed module").
- Score 2 (External / Comparative): The premise anchors to EXTERNAL knowledge outside the manuscript (e.g., "(Smith et al., 2023)", "RoBERTa", "The GLUE benchmark").

OUTPUT FORMAT
Respond ONLY with a valid JSON object of the exact form:
{"premises": [{"index": 1, "grounding": 0}, ...]}
with one entry per premise in input order and "grounding" one of 0, 1, 2.

MACRO-CONTEXT: {macro_context}
LIST OF PREMISES: {premise_list})prompt";

constexpr std::string_view kNoveltyExtractionTemplate =
    R"prompt(ROLE AND OBJECTIVE
TASK: Extract structured targets for verifiable novelty checking.
You will receive TWO sources below: PAPER TEXT and REVIEW TEXT.
Return STRICT JSON only (no markdown, no code fences, no extra keys).
The output MUST contain BOTH top-level keys: "paper" and "review".
For novelty claims, the "text" field MUST be verbatim from the REVIEW TEXT (1-2 sentences max).
If the review contains no novelty claims, return an empty novelty_claims list but still include review.

OUTPUT JSON SCHEMA (must match exactly):
{
  "paper": {
    "core_task": "string (<=20 words)",
    "contributions": [
      {
        "name": "short name for contribution (<=15 words)",
        "author_claim_text": "verbatim quote from paper (<=40 words)",
        "description": "normalized paraphrase (<=60 words)",
        "source_hint": "location tag e.g. Abstract, Introduction 1, Conclusion"
      }
    ],
    "key_terms": ["5-12 short phrases"],
    "must_have_entities": ["model/dataset/metric names if any"]
  },
  "review": {
    "novelty_claims": [
      {
        "claim_id": "C1",
        "text": "verbatim review claim (1-2 sentences max)",
        "stance": "not_novel | somewhat_novel | novel | unclear",
        "confidence_lang": "high | medium | low",
        "mentions_prior_work": true,
        "prior_work_strings": ["author-year strings or titles as written"],
        "evidence_expected": "method_similarity | task_similarity | results_similarity | theory_overlap | dataset_overlap"
      }
    ],
    "all_citations_raw": ["everything that looks like a citation/title/arxiv id/url"]
  }
}

INPUT:
PAPER TEXT:
{paper_text}

REVIEW TEXT:
{review_text})prompt";

constexpr std::string_view kNoveltyVerdictTemplate =
    R"prompt(ROLE AND OBJECTIVE
INSTRUCTION:
You are an impartial Judge that verifies whether the review sentence is a claim about the paper, and how it relates to the related work evidence.
Use ONLY the provided text. If the claim is too vague or evidence is missing, return "insufficient".

CLASSIFICATION
- claim: 1 if the sentence is a reviewer claim about the paper being reviewed; else 0.
- proof: 1 if the sentence provides evidence or support for a claim about the paper; else 0.

AXIS 1 - EVIDENCE SUPPORT (stance_alignment)
- "aligned": reviewer claim aligns with and is supported by the related work evidence.
- "partial": some relation exists but evidence is not conclusive.
- "insufficient": claim is too vague, evidence is missing, or unverifiable.
- "contradicted": evidence contradicts the reviewer claim or no supporting evidence was found.

AXIS 2 - CALIBRATION
- "accurate": reviewer's strength of claim matches the actual evidence.
- "overstated": reviewer claims too strongly given the evidence.
- "understated": reviewer should have been stronger given the evidence.
- "N/A": not applicable when evidence is insufficient to judge calibration.

VERDICT SCALE ([-2, +2])
- +2 SUPPORTED: Reviewer's novelty assessment aligns with the retrieved evidence.
- +1 OVERSTATED: Some relation exists, but the reviewer's "same as / not novel" claim is too strong.
-  0 AMBIGUOUS: Claim is too vague or unverifiable with the provided evidence.
- -1 UNDERSTATED: Reviewer misses very close prior work present in the candidate pool.
- -2 UNSUPPORTED: Evidence contradicts the claim, or no supporting evidence was found.

OUTPUT FORMAT
Return STRICT JSON only (no markdown, no code fences, no extra keys).
{
  "review_sentence_id": "S_001",
  "related_paper_id": "P123",
  "classification": {"claim": 1, "proof": 0},
  "stance_alignment": "aligned",
  "calibration": "accurate",
  "score": 2,
  "label": "SUPPORTED",
  "explanation": "Short explanation"
}

INPUTS:
REVIEW SENTENCE:
{review_sentence}

PAPER CONTEXT (ABSTRACT + INTRODUCTION):
{paper_abstract_intro}

RELATED WORK (TITLE + ABSTRACT):
{related_work_title_abstract})prompt";

constexpr std::string_view kFlawAtomizationTemplate =
    R"prompt(ROLE AND OBJECTIVE
You are an expert meta-reviewer for top-tier computer science conferences. Analyze raw review texts from multiple reviewers and consolidate their arguments into a structured list of unique Micro-flaws.

GROUPING RULES (STRICTLY ENFORCED)
1. Conceptual Consistency (Must Split): Arguments grouped into the same Micro-flaw MUST address the same fundamental problem. Do not merge distinct scientific issues merely because they share a broad topic.
2. Allowed Aggregation (Can Group): Arguments MAY be grouped if they point to the exact same specific error in the paper (e.g., multiple reviewers citing the same missing baseline).
3. No Forced Fit: If an argument does not fit any existing Micro-flaw precisely, create a new one.
4. No Upper Bound: There is no limit on the number of Micro-flaws. Multiple Micro-flaws may share the same Macro-topic.

TAXONOMY (7 Macro-topics): Novelty & Contribution; Clarity & Presentation; Applicability, Scalability & Limitations; Experimental Design & Evaluation; Related Work & Citations; Methodology & Theoretical Soundness; Reproducibility & Open Science.

OUTPUT FORMAT
Respond ONLY with a valid JSON object of the exact form:
{"micro_flaws": [{"flaw_id": "F1", "description": "...", "macro_topic": "...", "contributors": [{"reviewer_id": "...", "argument_text": "verbatim argument from that reviewer"}]}]}
"macro_topic" must be one of the seven taxonomy entries, spelled exactly as above.

INPUT REVIEWS:
{input_text})prompt";

constexpr std::string_view kFlawAdjudicationTemplate =
    R"prompt(ROLE AND OBJECTIVE
You are a strict and objective Meta-Reviewer. Given the full paper text and a JSON list of Micro-flaws raised by reviewers, independently verify each flaw against the manuscript.

FOR EACH MICRO-FLAW, ANSWER:
1. is_valid (True/False): Does this flaw genuinely exist in the paper? Return False if it is a hallucination, misunderstanding, or unreasonable request.
2. severity ("Critical" / "Minor"): If valid, assign severity per the ontology below.

SEVERITY ONTOLOGY
- Critical (w=2): Flaws requiring new experiments, proof revisions, or core claim changes - covering Methodology, Experimental Design, Novelty, and severe Reproducibility/Applicability issues.
- Minor (w=1): Flaws fixable via textual/editorial revision - covering Clarity & Presentation, missing citations, or documentation gaps.
- Borderline rule: Prefer Critical if fixing the issue can plausibly alter main conclusions; prefer Minor if the fix is purely editorial.

OUTPUT FORMAT
Respond ONLY with a valid JSON object of the exact form:
{"verdicts": [{"flaw_id": "F1", "is_valid": true, "severity": "Critical"}]}
with one entry per input flaw; "severity" is present only for valid flaws.

INPUT:
PAPER TEXT:
{paper_text}

MICRO-FLAWS:
{micro_flaws_json})prompt";

constexpr std::string_view kArcExtractionTemplate =
    R"prompt(ROLE AND OBJECTIVE
You are an expert peer-review analyst. Your task is to decompose a comprehensive peer review into distinct Atomic Review Comments (ARCs).

EXTRACTION RULES
1. Extract ALL distinct points from Summary, Strengths, Weaknesses, Questions, and Suggestions.
2. One point per ARC: If a single sentence contains two critiques, split it into two separate ARCs.
3. Anchor Quote: Provide a verbatim 5-25 word substring copied EXACTLY from the review to anchor the comment.
4. Comment Type: Classify each ARC as exactly one of: weakness, strength, question, suggestion, or observation.

OUTPUT FORMAT
Respond ONLY with a valid JSON object of the exact form:
{"arcs": [{"arc_id": "A1", "text": "...", "anchor_quote": "...", "comment_type": "weakness"}]}

INPUT REVIEW TEXT:
{raw_review_text})prompt";

constexpr std::string_view kArcScoringTemplate =
    R"prompt(ROLE AND OBJECTIVE
You are an expert peer-review analyst. Given the full peer review as macro-context and a list of extracted Atomic Review Comments (ARCs), score EACH comment on 5 dimensions.

SCORING RUBRIC (Score 0, 1, or 2 for each)
- D1_actionability - Can the author act on this?
  - 0: Opinion with no guidance (e.g., "poorly written")
  - 1: General direction (e.g., "needs more baselines")
  - 2: Specific, implementable (e.g., "add [MethodX] on CIFAR-10")
- D2_specificity - References concrete paper elements?
  - 0: Vague (e.g., "has issues")
  - 1: Semi-specific (e.g., "methodology section unclear")
  - 2: Pinpoints exact element (e.g., "Eq 7 in Sec 4.2 missing term")
- D3_justification - Evidence-backed?
  - 0: Bare assertion (e.g., "not novel")
  - 1: Partial reasoning (e.g., "similar to prior work on X")
  - 2: Full evidence (e.g., "same loss as [Author2020] Eq 3")
- D4_solution - Suggests improvements?
  - 0: Problem-only (e.g., "baselines weak")
  - 1: Implicit fix (e.g., "lacks recent SOTA")
  - 2: Explicit fix (e.g., "add [M2023] achieving X%")
- D5_tone - Respectful?
  - 0: Hostile / dismissive
  - 1: Neutral, factual
  - 2: Professional-constructive, encouraging

OUTPUT FORMAT
Respond ONLY with a valid JSON object containing the arc_id and the numerical scores for D1 through D5, of the exact form:
{"scores": [{"arc_id": "A1", "D1": 0, "D2": 0, "D3": 0, "D4": 0, "D5": 0}]}

MACRO-CONTEXT: {raw_review_text}
LIST OF ARCS: {arc_json_list})prompt";

struct PhaseInfo {
  std::string_view id;
  ResponseKind kind;
  std::vector<std::string> slots;
  std::string_view tmpl;
};

const PhaseInfo& info(Phase phase) {
  static const PhaseInfo table[] = {
      {"doa-segmentation", ResponseKind::Text, {"raw_review_text"},
       kDoaSegmentationTemplate},
      {"doa-classification", ResponseKind::Json, {"macro_context", "argument_list"},
       kDoaClassificationTemplate},
      {"doa-grounding", ResponseKind::Json, {"macro_context", "premise_list"},
       kDoaGroundingTemplate},
      {"novelty-extraction", ResponseKind::Json, {"paper_text", "review_text"},
       kNoveltyExtractionTemplate},
      {"novelty-verdict", ResponseKind::Json,
       {"review_sentence", "paper_abstract_intro", "related_work_title_abstract"},
       kNoveltyVerdictTemplate},
      {"flaw-atomization", ResponseKind::Json, {"input_text"},
       kFlawAtomizationTemplate},
      {"flaw-adjudication", ResponseKind::Json, {"paper_text", "micro_flaws_json"},
       kFlawAdjudicationTemplate},
      {"arc-extraction", ResponseKind::Json, {"raw_review_text"},
       kArcExtractionTemplate},
      {"arc-scoring", ResponseKind::Json, {"raw_review_text", "arc_json_list"},
       kArcScoringTemplate},
  };
  return table[static_cast<std::size_t>(phase)];
}

}  // namespace

std::string_view phase_id(Phase phase) { return info(phase).id; }

Phase phase_from_id(std::string_view id) {
  for (Phase p : kAllPhases)
    if (phase_id(p) == id) return p;
  throw UnknownPhaseError(std::string(id));
}

ResponseKind phase_response_kind(Phase phase) { return info(phase).kind; }

const std::vector<std::string>& phase_slots(Phase phase) { return info(phase).slots; }

std::string_view phase_template(Phase phase) { return info(phase).tmpl; }

std::string render_prompt(Phase phase, const SlotMap& slots) {
  const PhaseInfo& pi = info(phase);
  for (const auto& [name, value] : slots) {
    if (std::find(pi.slots.begin(), pi.slots.end(), name) == pi.slots.end())
      throw InvalidArgument("slot not used by phase " + std::string(pi.id) +
                            ": " + name);
  }

  for (const auto& name : pi.slots) {
    auto it = slots.find(name);
    if (it == slots.end() || text::trim(it->second).empty())
      throw MissingSlotError(name);
  }

  // Single left-to-right pass over the template so that slot values containing
  // brace sequences are never re-substituted.
  std::string prompt;
  prompt.reserve(pi.tmpl.size());
  std::size_t pos = 0;
  while (pos < pi.tmpl.size()) {
    std::size_t brace = pi.tmpl.find('{', pos);
    if (brace == std::string_view::npos) {
      prompt.append(pi.tmpl.substr(pos));
      break;
    }
    prompt.append(pi.tmpl.substr(pos, brace - pos));
    bool replaced = false;
    for (const auto& name : pi.slots) {
      if (pi.tmpl.compare(brace + 1, name.size(), name) == 0 &&
          brace + 1 + name.size() < pi.tmpl.size() &&
          pi.tmpl[brace + 1 + name.size()] == '}') {
        prompt.append(slots.at(name));
        pos = brace + name.size() + 2;
        replaced = true;
        break;
      }
    }
    if (!replaced) {
      prompt.push_back('{');
      pos = brace + 1;
    }
  }
  return prompt;
}

}  // namespace revq::judge
