#include "sealev/text.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace sealev {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string collapse_lower(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char c : raw) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

std::string normalize_answer(std::string_view raw) {
  std::string out = collapse_lower(raw);
  while (!out.empty() && out.back() == '.') {
    out.pop_back();
    while (!out.empty() && out.back() == ' ') out.pop_back();
  }
  return out;
}

std::string normalize_for_overlap(std::string_view raw) { return collapse_lower(raw); }

double ngram_jaccard(std::string_view a, std::string_view b, int n) {
  const std::string na = normalize_for_overlap(a);
  const std::string nb = normalize_for_overlap(b);
  if (na == nb) return 1.0;
  if (na.empty() || nb.empty()) return 0.0;

  const std::size_t width = static_cast<std::size_t>(n);
  auto shingles = [width](const std::string& s) {
    std::set<std::string_view> grams;
    if (s.size() < width) {
      grams.insert(std::string_view(s));
      return grams;
    }
    for (std::size_t i = 0; i + width <= s.size(); ++i) {
      grams.insert(std::string_view(s).substr(i, width));
    }
    return grams;
  };

  const auto ga = shingles(na);
  const auto gb = shingles(nb);
  std::size_t intersection = 0;
  for (const auto& g : ga) {
    if (gb.count(g) != 0) ++intersection;
  }
  const std::size_t uni = ga.size() + gb.size() - intersection;
  if (uni == 0) return 0.0;
  return static_cast<double>(intersection) / static_cast<double>(uni);
}

}  // namespace sealev
