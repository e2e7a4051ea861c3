#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "revq/judge/phase.hpp"

namespace revq::judge {

/// Strict parse of a raw judge response for a phase.
///
/// The only permitted normalization is trimming a Markdown code-fence wrapper.
/// The document must satisfy the phase schema (required keys, enumerated
/// values, integer ranges); anything else raises SchemaViolation with a path
/// to the first offending key and the raw text attached for audit.
///
/// Text phases (segmentation) yield the trimmed text as a JSON string.
nlohmann::json parse_strict_json(const std::string& raw, Phase phase);

/// Validates an already-parsed document against the phase schema.
void validate_phase_document(const nlohmann::json& doc, Phase phase,
                             const std::string& raw_for_audit = {});

}  // namespace revq::judge
