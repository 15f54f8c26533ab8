// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "narrinfo/align.hpp"
#include "narrinfo/corpus.hpp"
#include "narrinfo/lm_backend.hpp"
#include "narrinfo/rephrase.hpp"

namespace narrinfo {

enum class Variant { plain, with_initial_context, partial_rephrasing };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view s);

struct ClauseBits {
  int clause_index = 0;
  double bits = 0.0;

  friend bool operator==(const ClauseBits&, const ClauseBits&) = default;
};

/// Per-clause total (I), wording (I_W) and semantic (I_M = I - I_W)
/// information in bits. I_M is stored as computed and may be negative.
struct ClauseInfoRecord {
  std::string narrative_id;
  int clause_index = 0;
  double I_bits = 0.0;
  double IW_bits = 0.0;
  double IM_bits = 0.0;
  Variant variant = Variant::plain;
  std::string backend_id;
  std::string rephrasing_id;

  friend bool operator==(const ClauseInfoRecord&, const ClauseInfoRecord&) = default;
};

struct NarrativeInfoProfile {
  std::string narrative_id;
  std::vector<ClauseInfoRecord> records;
  std::vector<double> cumulative_I;
  std::vector<double> cumulative_IM;
  double bits_per_char = 0.0;
  double mean_IM_per_clause = 0.0;
};

/// Total information of every clause of the plain canonical text, each clause
/// conditioned on the preceding clauses. With `with_initial_context` the
/// narrative's interview context (if any) is prepended.
std::vector<ClauseBits> total_info(const Narrative& n, const Backend& backend,
                                   Variant variant = Variant::plain);

inline constexpr std::string_view kWordingPromptHeader =
    "The following two texts, separated by ---, tell the same narrative but "
    "with different wording.";

std::string build_wording_prompt(std::string_view rephrased,
                                 std::string_view original);

/// Wording information: the original narrative scored after its rephrasing
/// inside the wording prompt.
std::vector<ClauseBits> wording_info(const Narrative& n,
                                     const RephrasingBundle& rephrasing,
                                     const Backend& backend);

/// Wording information of clause `clause_index` with the rephrasing truncated
/// after that clause.
double partial_wording_info(const Narrative& n, const RephrasingBundle& rephrasing,
                            int clause_index, const Backend& backend);

/// partial_wording_info for every clause (one prompt per clause).
std::vector<ClauseBits> partial_wording_info_all(const Narrative& n,
                                                 const RephrasingBundle& rephrasing,
                                                 const Backend& backend);

std::vector<ClauseInfoRecord> semantic_info(std::string_view narrative_id,
                                            std::span<const ClauseBits> total,
                                            std::span<const ClauseBits> wording,
                                            Variant variant,
                                            std::string_view backend_id,
                                            std::string_view rephrasing_id);

/// Prefix sums, bits per character of clause text (codepoints, separators
/// excluded) and mean I_M per clause.
NarrativeInfoProfile profile(const Narrative& n,
                             std::span<const ClauseInfoRecord> records);

/// semantic_information.csv:
/// narrative_id,clause_num,I_bits,IW_bits,IM_bits,variant,backend_id,rephrasing_id
std::string records_csv(std::span<const ClauseInfoRecord> records);
void write_records(const std::filesystem::path& path,
                   std::span<const ClauseInfoRecord> records);
std::vector<ClauseInfoRecord> parse_records(std::string_view csv_content);
std::vector<ClauseInfoRecord> read_records(const std::filesystem::path& path);

}  // namespace narrinfo
