#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace revq::judge {

/// The staged prompt phases of the evaluation pipelines.
enum class Phase {
  DoaSegmentation,
  DoaClassification,
  DoaGrounding,
  NoveltyExtraction,
  NoveltyVerdict,
  FlawAtomization,
  FlawAdjudication,
  ArcExtraction,
  ArcScoring,
};

inline constexpr Phase kAllPhases[] = {
    Phase::DoaSegmentation,  Phase::DoaClassification, Phase::DoaGrounding,
    Phase::NoveltyExtraction, Phase::NoveltyVerdict,   Phase::FlawAtomization,
    Phase::FlawAdjudication, Phase::ArcExtraction,     Phase::ArcScoring,
};

/// What the judge is expected to return for a phase.
enum class ResponseKind {
  Text,  // marked-up text (segmentation)
  Json,  // strict JSON against the phase schema
};

std::string_view phase_id(Phase phase);

/// Inverse of phase_id; throws UnknownPhaseError.
Phase phase_from_id(std::string_view id);

ResponseKind phase_response_kind(Phase phase);

/// Slot names the phase template requires, in template order.
const std::vector<std::string>& phase_slots(Phase phase);

/// The raw prompt template with {slot} placeholders.
std::string_view phase_template(Phase phase);

using SlotMap = std::map<std::string, std::string>;

/// Substitutes every required slot verbatim into the phase template.
/// Byte-stable for identical inputs. Throws MissingSlotError for a missing or
/// empty required slot and InvalidArgument for a slot the phase does not use.
std::string render_prompt(Phase phase, const SlotMap& slots);

}  // namespace revq::judge
