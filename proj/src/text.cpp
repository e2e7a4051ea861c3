#include "revq/text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <unordered_map>

namespace revq::text {

namespace {
inline bool is_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}
}  // namespace

std::string normalize_ws(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool in_ws = true;  // swallow leading whitespace
  for (char c : s) {
    if (is_space(c)) {
      in_ws = true;
    } else {
      if (in_ws && !out.empty()) out.push_back(' ');
      out.push_back(c);
      in_ws = false;
    }
  }
  return out;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_on(std::string_view s, std::string_view sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find(sep, pos);
    std::string_view piece =
        next == std::string_view::npos ? s.substr(pos) : s.substr(pos, next - pos);
    std::string trimmed = trim(piece);
    if (!trimmed.empty()) out.push_back(std::move(trimmed));
    if (next == std::string_view::npos) break;
    pos = next + sep.size();
  }
  return out;
}

bool contains_normalized(std::string_view haystack, std::string_view needle) {
  return find_normalized(haystack, needle).has_value();
}

std::optional<std::size_t> find_normalized(std::string_view haystack,
                                           std::string_view needle) {
  std::string h = normalize_ws(haystack);
  std::string n = normalize_ws(needle);
  if (n.empty()) return std::nullopt;
  std::size_t pos = h.find(n);
  if (pos == std::string::npos) return std::nullopt;
  return pos;
}

double trigram_cosine(std::string_view a, std::string_view b) {
  std::string na = to_lower(normalize_ws(a));
  std::string nb = to_lower(normalize_ws(b));
  if (na.size() < 3 || nb.size() < 3) return na == nb && !na.empty() ? 1.0 : 0.0;

  auto count = [](const std::string& s) {
    std::unordered_map<std::uint32_t, int> m;
    for (std::size_t i = 0; i + 3 <= s.size(); ++i) {
      std::uint32_t key = (static_cast<std::uint8_t>(s[i]) << 16) |
                          (static_cast<std::uint8_t>(s[i + 1]) << 8) |
                          static_cast<std::uint8_t>(s[i + 2]);
      ++m[key];
    }
    return m;
  };
  auto ca = count(na);
  auto cb = count(nb);

  double dot = 0.0, norm_a = 0.0, norm_b = 0.0;
  for (const auto& [k, v] : ca) {
    norm_a += static_cast<double>(v) * v;
    auto it = cb.find(k);
    if (it != cb.end()) dot += static_cast<double>(v) * it->second;
  }
  for (const auto& [k, v] : cb) norm_b += static_cast<double>(v) * v;
  if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
  return dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
}

std::string trim_code_fence(std::string_view raw) {
  std::string s = trim(raw);
  if (s.size() < 6 || s.compare(0, 3, "```") != 0 ||
      s.compare(s.size() - 3, 3, "```") != 0)
    return s;
  std::size_t body_start = 3;
  // Optional language tag on the opening fence line.
  std::size_t nl = s.find('\n', body_start);
  if (nl == std::string::npos) return s;
  std::string tag = trim(std::string_view(s).substr(body_start, nl - body_start));
  bool tag_ok = tag.empty() ||
                std::all_of(tag.begin(), tag.end(), [](unsigned char c) {
                  return std::isalnum(c) != 0;
                });
  if (!tag_ok) return s;
  return trim(std::string_view(s).substr(nl + 1, s.size() - 3 - (nl + 1)));
}

std::size_t word_count(std::string_view s) {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : s) {
    if (is_space(c)) {
      in_word = false;
    } else if (!in_word) {
      ++n;
      in_word = true;
    }
  }
  return n;
}

}  // namespace revq::text
