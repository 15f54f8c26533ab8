// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "narrinfo/corpus.hpp"
#include "narrinfo/lm_backend.hpp"

namespace narrinfo {

/// Tokens [token_begin, token_end) of a ScoredText attributed to one clause.
struct ClauseTokenMap {
  std::string narrative_id;
  int clause_index = 0;
  std::size_t token_begin = 0;
  std::size_t token_end = 0;

  friend bool operator==(const ClauseTokenMap&, const ClauseTokenMap&) = default;
};

/// A token whose bytes touch more than one clause span.
struct StraddlingToken {
  std::size_t token = 0;
  int assigned_clause = 0;
  int last_touched_clause = 0;

  friend bool operator==(const StraddlingToken&, const StraddlingToken&) = default;
};

struct Alignment {
  std::vector<ClauseTokenMap> clauses;
  std::size_t prompt_tokens = 0;  // tokens before the first clause
  std::vector<StraddlingToken> straddling;
};

/// Attributes every token at or after `offset` to the clause holding its
/// first non-whitespace byte; whitespace-only tokens between clauses go to
/// the following clause. `canon` must equal `scored.text` from `offset` on
/// (TextMismatch otherwise), and every clause must receive at least one
/// token (EmptyClauseTokens).
Alignment align_clauses(const ScoredText& scored, const CanonicalText& canon,
                        std::string_view narrative_id = {},
                        std::size_t offset = 0);

/// Sum of the mapped tokens' bits, in token order.
double clause_bits(const ScoredText& scored, const ClauseTokenMap& map);

}  // namespace narrinfo
