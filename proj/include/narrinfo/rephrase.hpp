// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "narrinfo/corpus.hpp"
#include "narrinfo/lm_backend.hpp"

namespace narrinfo {

/// Contiguous clause range [start, end], 1-based and inclusive.
struct ChunkPart {
  int start = 1;
  int end = 1;

  int size() const { return end - start + 1; }
  friend bool operator==(const ChunkPart&, const ChunkPart&) = default;
};

struct ChunkPlan {
  int length = 0;       // L
  int chunk_limit = 0;  // L_c
  std::vector<ChunkPart> parts;
};

/// ceil(L / L_c) order-preserving parts whose sizes differ by at most one,
/// larger parts first.
ChunkPlan plan_chunks(int length, int chunk_limit = 50);

struct ChunkRecord {
  int start = 1;
  int end = 1;
  bool summary_used = false;

  friend bool operator==(const ChunkRecord&, const ChunkRecord&) = default;
};

/// A clause-aligned paraphrase of one narrative.
struct RephrasingBundle {
  std::string narrative_id;
  std::string rephrasing_id;  // "r1", "r2", ...
  std::vector<std::string> clauses;
  std::vector<ChunkRecord> chunk_plan;
  std::string generator_model;
  bool validated = false;
};

inline constexpr std::string_view kRephraseSystemPrompt =
    "You are helping in scientific analysis, so please be precise.";

/// System + user messages asking for a numbered paraphrase of `numbered_part`
/// (clauses numbered 1..part_size). Without a summary the summary line is
/// omitted.
std::vector<ChatMessage> build_rephrase_prompt(
    std::string_view numbered_part, int part_size,
    std::optional<std::string_view> summary = std::nullopt);

/// Summary request for the clauses preceding a middle chunk.
std::vector<ChatMessage> build_summary_prompt(std::string_view numbered_text);

/// Strict "k. text" parsing: numbering must start at 1 and be contiguous.
/// Surrounding ''' fences and blank lines are tolerated.
std::vector<std::string> parse_numbered_clauses(std::string_view response,
                                                int chunk_index = 0);

struct RephraseOptions {
  int chunk_limit = 50;
  int retry_chunk_limit = 25;
  double temperature = 0.0;
  int max_tokens = 4096;
  std::string rephrasing_id = "r1";
};

/// Paraphrases `n` chunk by chunk, summarising the preceding clauses for every
/// chunk after the first. On a clause-count mismatch the whole narrative is
/// retried once with `retry_chunk_limit`; a second mismatch throws
/// ClauseCountMismatch.
RephrasingBundle generate_rephrasing(const Narrative& n, const Backend& generator,
                                     const RephraseOptions& options = {});

/// Rephrases an existing rephrasing, treating its clauses as the source.
RephrasingBundle second_rephrasing(const RephrasingBundle& first,
                                   const Backend& generator,
                                   RephraseOptions options = {});

/// Throws ClauseCountMismatch unless the bundle matches `source` clause for
/// clause; marks it validated otherwise.
void validate_bundle(RephrasingBundle& bundle, const Narrative& source);

Narrative bundle_as_narrative(const RephrasingBundle& bundle);

/// Reads a rephrased<k>.csv (corpus schema) and validates every bundle
/// against the matching original narrative.
std::vector<RephrasingBundle> load_rephrasings(const std::filesystem::path& path,
                                               std::string rephrasing_id,
                                               const CorpusManifest& originals);

void write_rephrasings(const std::filesystem::path& path,
                       std::span<const RephrasingBundle> bundles);

}  // namespace narrinfo
