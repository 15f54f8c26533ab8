// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "narrinfo/corpus.hpp"
#include "narrinfo/infocalc.hpp"
#include "narrinfo/lm_backend.hpp"

namespace narrinfo {

/// Half-open bins [b_k, b_{k+1}); the last bin also includes its upper edge.
struct BinSpec {
  std::vector<double> boundaries = {-3, 0,  2,  4,  6,  8,  10, 12,
                                    14, 16, 20, 25, 30, 40, 60, 200};
  int per_bin_target = 40;

  void validate() const;
  std::size_t bin_count() const { return boundaries.size() - 1; }
  std::optional<std::size_t> bin_of(double value) const;
};

struct ClauseRef {
  std::string narrative_id;
  int clause_index = 0;

  friend auto operator<=>(const ClauseRef&, const ClauseRef&) = default;
};

struct SampleResult {
  std::vector<ClauseRef> clauses;  // sorted; first clauses removed
  std::size_t sampled_before_removal = 0;
  std::size_t first_clauses_removed = 0;
  std::vector<std::size_t> bin_population;
  std::vector<std::size_t> bin_selected;
};

/// Per bin, min(target, population) clauses drawn uniformly without
/// replacement; clause 1 of each narrative is dropped afterwards. The draw
/// depends only on the record set and the seed, not on record order.
SampleResult stratified_sample(std::span<const ClauseInfoRecord> records,
                               const BinSpec& spec, std::uint64_t seed);

struct PredictionTrial {
  std::string narrative_id;
  int clause_index = 0;
  double IM_bits = 0.0;
  std::string predicted_text;
  std::optional<bool> judged_same_meaning;
  std::optional<bool> verified;  // manual check of a positive judgment
  std::string judge_transcript;
  std::optional<int> human_correct_count;
  std::optional<int> human_answer_count;

  bool machine_predicted() const {
    return judged_same_meaning.value_or(false) && verified.value_or(true);
  }
  bool human_predicted() const { return human_correct_count.value_or(0) >= 1; }

  friend bool operator==(const PredictionTrial&, const PredictionTrial&) = default;
};

/// Clauses 1..before_clause-1 in numbered layout.
std::string numbered_prefix(const Narrative& n, int before_clause);

std::vector<ChatMessage> build_continuation_prompt(std::string_view numbered_prefix);

/// Extracts the clause from `The most plausible next clause is "'...'"`,
/// tolerating straight or curly quote variants.
std::string parse_continuation(std::string_view response);

std::vector<ChatMessage> build_judgment_prompt(std::string_view numbered_prefix,
                                               std::string_view original_clause,
                                               std::string_view proposed_clause);

/// Last `**Same meaning: True|False**` marker wins.
bool parse_judgment(std::string_view response);

PredictionTrial predict_clause(const Narrative& n, int clause_index, double IM_bits,
                               const Backend& generator,
                               const GenerationParams& params = {});

void judge_trial(PredictionTrial& trial, const Narrative& n,
                 const Backend& judge, const GenerationParams& params = {});

struct HumanResult {
  std::string narrative_id;
  int clause_index = 0;
  int num_answers = 0;
  int num_correct = 0;
  std::vector<std::pair<std::string, std::string>> predictions;  // p_* columns
};

/// Human prediction CSV: narrative_id, clause_num, num_answers, num_correct
/// and any number of `p_*` answer columns.
std::vector<HumanResult> parse_human_results(std::string_view csv_content);
std::vector<HumanResult> ingest_human_results(const std::filesystem::path& path);

/// Copies human counts onto matching trials; returns how many matched.
std::size_t merge_human_results(std::vector<PredictionTrial>& trials,
                                std::span<const HumanResult> results);

struct PredictabilityBin {
  double lo = 0.0;
  double hi = 0.0;
  int human_predicted = 0;  // machine- and human-predicted
  int machine_only = 0;

  friend bool operator==(const PredictabilityBin&, const PredictabilityBin&) = default;
};

struct PredictabilityReport {
  std::vector<PredictabilityBin> histogram;
  int trials = 0;
  int judged_positive = 0;
  int judge_false_positives = 0;  // positive judgments rejected on verification
  int machine_predicted = 0;
  int human_predicted = 0;
  int human_not_predicted = 0;  // machine-predicted, ingested, nobody correct
  std::map<int, int> human_correct_distribution;  // num_correct -> clauses
};

/// Histogram of I_M over machine-predicted clauses in bins of `bin_width`
/// aligned to multiples of the width.
PredictabilityReport predictability_report(std::span<const PredictionTrial> trials,
                                           double bin_width = 1.0);

/// gpt_predictions.csv layout.
std::string trials_csv(std::span<const PredictionTrial> trials);
void write_trials(const std::filesystem::path& path,
                  std::span<const PredictionTrial> trials);
std::vector<PredictionTrial> parse_trials(std::string_view csv_content);
std::vector<PredictionTrial> read_trials(const std::filesystem::path& path);

std::string sample_csv(const SampleResult& sample);
std::vector<ClauseRef> read_sample(const std::filesystem::path& path);

}  // namespace narrinfo
