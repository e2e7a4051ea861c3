#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace revq::text {

/// Collapses every run of whitespace to a single space and trims the ends.
std::string normalize_ws(std::string_view s);

std::string to_lower(std::string_view s);

std::string trim(std::string_view s);

/// Splits `s` on every occurrence of `sep`, keeping empty pieces out.
std::vector<std::string> split_on(std::string_view s, std::string_view sep);

/// Whitespace-normalized containment: is `needle` a substring of `haystack`
/// once both are whitespace-collapsed?
bool contains_normalized(std::string_view haystack, std::string_view needle);

/// Position of the first whitespace-normalized occurrence of `needle` in
/// `haystack` (offset within the normalized haystack), or nullopt.
std::optional<std::size_t> find_normalized(std::string_view haystack,
                                           std::string_view needle);

/// Cosine similarity between the character-trigram multisets of two strings.
/// Inputs are lowercased and whitespace-collapsed first. Strings shorter than
/// three characters compare equal only if byte-identical.
double trigram_cosine(std::string_view a, std::string_view b);

/// Strips a Markdown code fence (``` or ```json ... ```) wrapping the whole
/// payload. This is the single permitted normalization before JSON parsing.
std::string trim_code_fence(std::string_view raw);

/// Number of whitespace-delimited words.
std::size_t word_count(std::string_view s);

}  // namespace revq::text
