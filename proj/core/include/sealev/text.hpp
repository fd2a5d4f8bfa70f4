#pragma once

#include <string>
#include <string_view>

namespace sealev {

// Canonical answer normalization, applied uniformly wherever two answers are
// compared: trim, collapse internal whitespace runs to one space, lowercase,
// strip trailing periods. Documented in the release bundle.
std::string normalize_answer(std::string_view raw);

// Lowercase + whitespace-collapse only (overlap screening pre-pass).
std::string normalize_for_overlap(std::string_view raw);

// Character n-gram Jaccard similarity over the normalized forms.
// similarity(x, x) == 1.0; disjoint token sets score 0.0. Strings shorter
// than n are compared as whole-string shingles.
double ngram_jaccard(std::string_view a, std::string_view b, int n = 5);

}  // namespace sealev
