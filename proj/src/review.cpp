#include "revq/review.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

#include "revq/text.hpp"

namespace revq {

namespace {

std::string heading_for(const std::string& section) {
  std::string h = section;
  if (!h.empty()) h[0] = static_cast<char>(std::toupper(h[0]));
  return h + ":";
}

void append_section(std::string& out, const std::string& name,
                    const std::string& body) {
  if (text::trim(body).empty()) return;
  if (!out.empty()) out += "\n\n";
  out += heading_for(name) + "\n" + text::trim(body);
}

}  // namespace

std::string ReviewDocument::sections_text(
    std::initializer_list<const char*> names) const {
  std::string out;
  for (const char* name : names) append_section(out, name, section(name));
  return out;
}

std::string ReviewDocument::full_text() const {
  static const char* kCanonical[] = {kSectionSummary, kSectionStrengths,
                                     kSectionWeaknesses, kSectionQuestions};
  std::string out;
  std::vector<std::string> done;
  for (const char* name : kCanonical) {
    append_section(out, name, section(name));
    done.push_back(name);
  }
  for (const auto& [name, body] : sections) {
    if (std::find(done.begin(), done.end(), name) != done.end()) continue;
    append_section(out, name, body);
  }
  return out;
}

}  // namespace revq
