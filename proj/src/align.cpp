// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#include "narrinfo/align.hpp"

#include <algorithm>

#include "narrinfo/error.hpp"

namespace narrinfo {

namespace {

// 0-based index of the clause owning absolute byte `anchor`: the first clause
// whose span ends after it (separator gaps resolve forward).
std::size_t clause_for(const std::vector<ByteSpan>& spans, std::size_t anchor) {
  auto it = std::upper_bound(
      spans.begin(), spans.end(), anchor,
      [](std::size_t a, const ByteSpan& s) { return a < s.end; });
  if (it == spans.end()) return spans.size() - 1;
  return static_cast<std::size_t>(it - spans.begin());
}

}  // namespace

Alignment align_clauses(const ScoredText& scored, const CanonicalText& canon,
                        std::string_view narrative_id, std::size_t offset) {
  if (canon.spans.empty()) fail(ErrorKind::InvalidArgument, "no clause spans");
  if (offset > scored.text.size() ||
      std::string_view(scored.text).substr(offset) != canon.text) {
    fail(ErrorKind::TextMismatch,
         "scored text does not end with the canonical narrative text");
  }

  std::vector<ByteSpan> spans;
  spans.reserve(canon.spans.size());
  for (const auto& s : canon.spans) spans.push_back({s.begin + offset, s.end + offset});

  const std::size_t n_clauses = spans.size();
  std::vector<std::size_t> first(n_clauses, scored.tokens.size());
  std::vector<std::size_t> last(n_clauses, 0);
  Alignment out;

  for (std::size_t t = 0; t < scored.tokens.size(); ++t) {
    const auto& tok = scored.tokens[t];
    std::size_t anchor = tok.bytes.begin;
    while (anchor < tok.bytes.end && is_space(scored.text[anchor])) ++anchor;
    if (anchor == tok.bytes.end) anchor = tok.bytes.begin;
    if (anchor < offset) {
      ++out.prompt_tokens;
      continue;
    }
    const std::size_t k = clause_for(spans, anchor);
    first[k] = std::min(first[k], t);
    last[k] = t + 1;

    if (tok.bytes.end > tok.bytes.begin) {
      const std::size_t end_clause = clause_for(spans, tok.bytes.end - 1);
      const bool touches_next = end_clause != k &&
                                tok.bytes.end > spans[end_clause].begin;
      if (touches_next) {
        out.straddling.push_back({t, static_cast<int>(k + 1),
                                  static_cast<int>(end_clause + 1)});
      }
    }
  }

  out.clauses.reserve(n_clauses);
  for (std::size_t k = 0; k < n_clauses; ++k) {
    if (first[k] >= last[k]) {
      fail(ErrorKind::EmptyClauseTokens,
           "clause " + std::to_string(k + 1) + " received no tokens");
    }
    out.clauses.push_back(
        {std::string(narrative_id), static_cast<int>(k + 1), first[k], last[k]});
  }
  return out;
}

double clause_bits(const ScoredText& scored, const ClauseTokenMap& map) {
  if (map.token_begin >= map.token_end || map.token_end > scored.tokens.size()) {
    fail(ErrorKind::RangeOutOfBounds,
         "token range [" + std::to_string(map.token_begin) + ", " +
             std::to_string(map.token_end) + ") of " +
             std::to_string(scored.tokens.size()));
  }
  double total = 0.0;
  for (std::size_t t = map.token_begin; t < map.token_end; ++t) {
    total += scored.tokens[t].info_bits;
  }
  return total;
}

}  // namespace narrinfo
