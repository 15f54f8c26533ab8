// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "narrinfo/corpus.hpp"
#include "narrinfo/csv.hpp"
#include "narrinfo/infocalc.hpp"
#include "narrinfo/predictability.hpp"

namespace narrinfo {

enum class DeviationMode { absolute_bits, relative_percent };

std::string_view to_string(DeviationMode m);

struct DeviationStats {
  int n = 0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 when n == 1
  DeviationMode mode = DeviationMode::absolute_bits;
};

/// Mean and sample standard deviation; nullopt for an empty sample.
std::optional<DeviationStats> deviation_stats(std::span<const double> values,
                                              DeviationMode mode);

struct ConsistencyStats {
  std::optional<DeviationStats> low;   // im2 - im1 in bits where im1 < split
  std::optional<DeviationStats> high;  // percent deviation where im1 >= split
  double split_bits = 12.0;
};

/// Agreement between I_M computed from two rephrasings. Records are matched
/// on (narrative, clause); the key sets must coincide.
ConsistencyStats consistency_stats(std::span<const ClauseInfoRecord> im1,
                                   std::span<const ClauseInfoRecord> im2,
                                   double split_bits = 12.0);

struct ModelComparisonStats {
  std::optional<DeviationStats> predictable;  // B - A in bits
  std::optional<DeviationStats> low;          // B - A in bits where A < split
  std::optional<DeviationStats> high;         // percent of A where A > split
  double split_bits = 14.0;
};

/// Deviations of model B's I_M from model A's.
ModelComparisonStats model_comparison_stats(std::span<const ClauseInfoRecord> im_a,
                                            std::span<const ClauseInfoRecord> im_b,
                                            double split_bits,
                                            std::span<const ClauseRef> predictable);

struct PositionMean {
  int position = 0;
  double mean_IM = 0.0;
  int narratives = 0;
};

/// Mean I_M per clause position over the narratives reaching it. A
/// non-positive `max_pos` covers the longest narrative.
std::vector<PositionMean> position_average(std::span<const NarrativeInfoProfile> profiles,
                                           int max_pos = 0);

/// I_M(shifted) - I_M(base) over clauses 2..L, matched on (narrative, clause).
std::optional<DeviationStats> variant_shift_stats(std::span<const ClauseInfoRecord> base,
                                                  std::span<const ClauseInfoRecord> shifted);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
};

/// Counts of I_M in bins aligned to multiples of `width`, covering all data.
std::vector<HistogramBin> im_histogram(std::span<const ClauseInfoRecord> records,
                                       double width = 1.0);

struct CorpusSummary {
  int narratives = 0;
  int clauses = 0;
  double mean_I = 0.0;
  double mean_IM = 0.0;
  double bits_per_char = 0.0;  // sum of I over codepoints of clause text
};

/// Groups records per narrative (in corpus order) into profiles.
std::vector<NarrativeInfoProfile> build_profiles(const CorpusManifest& corpus,
                                                 std::span<const ClauseInfoRecord> records);

CorpusSummary corpus_summary(const CorpusManifest& corpus,
                             std::span<const ClauseInfoRecord> records);

struct RunManifest {
  std::string corpus_checksum;
  std::vector<std::string> backend_ids;
  std::vector<std::string> rephrasing_ids;
  std::map<std::string, std::uint64_t> seeds;
  std::map<std::string, std::string> prompt_template_hashes;
  std::string created_at;  // UTC, ISO 8601
  std::string std_convention = "sample (n-1)";
  std::map<std::string, std::string> outputs;  // file name -> sha256

  nlohmann::json to_json() const;
};

/// sha256 of each prompt template with its placeholders left in braces.
std::map<std::string, std::string> prompt_template_hashes();

std::string utc_timestamp();

struct ReportInputs {
  CorpusManifest corpus;
  std::vector<ClauseInfoRecord> records;
  std::optional<std::vector<ClauseInfoRecord>> second_rephrasing;
  std::optional<std::vector<ClauseInfoRecord>> comparison;  // model B
  std::vector<ClauseRef> predictable;
  double consistency_split = 12.0;
  double comparison_split = 14.0;
  double histogram_width = 1.0;
  int max_position = 0;
  bool plots = true;
  RunManifest manifest;
};

csv::Table cumulative_table(std::span<const NarrativeInfoProfile> profiles);
csv::Table histogram_table(std::span<const HistogramBin> bins);
csv::Table position_table(std::span<const PositionMean> means);
csv::Table summary_table(std::span<const NarrativeInfoProfile> profiles,
                         const CorpusSummary& total);
csv::Table consistency_table(const ConsistencyStats& s);
csv::Table comparison_table(const ModelComparisonStats& s);

std::string histogram_svg(std::span<const HistogramBin> bins, double mean);
std::string position_svg(std::span<const PositionMean> means);
std::string cumulative_svg(std::span<const NarrativeInfoProfile> profiles);

/// Writes every analysis table (and plots) into `out_dir` together with
/// manifest.json listing their hashes. Returns the written paths. An empty
/// record set writes nothing.
std::vector<std::filesystem::path> emit_outputs(const ReportInputs& in,
                                                const std::filesystem::path& out_dir);

}  // namespace narrinfo
