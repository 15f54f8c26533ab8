// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "narrinfo/corpus.hpp"
#include "narrinfo/lm_backend.hpp"
#include "narrinfo/rephrase.hpp"

namespace narrinfo {

using Distribution = std::map<std::string, double>;

/// A finite generative model of contexts, meanings and wordings in which
/// every wording realizes exactly one meaning.
///
/// World file (JSON):
///   {"contexts": ["c0", ...], "initial_context": "c0",
///    "meanings": {"c0": {"A": 0.25, "B": 0.75}},
///    "wordings": {"A": {"c0": {"a1": 0.5, "a2": 0.5}}},
///    "transitions": {"c0": {"a1": "c1"}}}
/// A wording without a transition keeps the current context.
class MeaningWorld {
 public:
  static MeaningWorld from_json(const nlohmann::json& j);
  static MeaningWorld parse(std::string_view json_text);
  static MeaningWorld load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  const std::vector<std::string>& contexts() const { return contexts_; }
  const std::string& initial_context() const { return initial_; }
  std::vector<std::string> meanings() const;
  std::vector<std::string> wordings() const;

  /// P(M|c); throws UnknownSymbol for an unknown context.
  const Distribution& meaning_distribution(std::string_view context) const;
  double meaning_prob(std::string_view meaning, std::string_view context) const;
  /// P(C|M,c); zero when M has no wordings in c.
  double wording_prob(std::string_view wording, std::string_view meaning,
                      std::string_view context) const;
  const std::string& meaning_of(std::string_view wording) const;
  /// Context after emitting `wording` in `context`.
  const std::string& next_context(std::string_view context,
                                  std::string_view wording) const;

  bool has_context(std::string_view c) const;
  bool has_meaning(std::string_view m) const;
  bool has_wording(std::string_view w) const;

 private:
  void validate();

  std::vector<std::string> contexts_;
  std::string initial_;
  std::map<std::string, Distribution, std::less<>> meanings_;
  std::map<std::string, std::map<std::string, Distribution, std::less<>>, std::less<>>
      wordings_;
  std::map<std::string, std::string, std::less<>> wording_to_meaning_;
  std::map<std::string, std::map<std::string, std::string, std::less<>>, std::less<>>
      transitions_;
};

/// Sum over all meanings of P(M|c) P(C|M,c).
double marginal_wording_prob(const MeaningWorld& w, std::string_view wording,
                             std::string_view context);

/// Sum of marginal_wording_prob over the wordings realizing `meaning`.
double meaning_prob_via_phrasings(const MeaningWorld& w, std::string_view meaning,
                                  std::string_view context);

struct Decomposition {
  std::string meaning;
  double I = 0.0;
  double IW = 0.0;
  double IM = 0.0;
};

inline constexpr double kDecompositionTolerance = 1e-9;

/// I = -log2 P(C|c), IW = -log2 P(C|M(C),c), IM = I - IW; throws
/// DecompositionViolation unless IM matches -log2 P(M(C)|c).
Decomposition decomposition_check(const MeaningWorld& w, std::string_view wording,
                                  std::string_view context);

struct GroundTruthRecord {
  std::string narrative_id;
  int clause_index = 0;
  std::string meaning;
  std::string context;
  std::string wording;
  double IM_bits = 0.0;
};

struct SyntheticCorpus {
  std::vector<Narrative> narratives;
  std::vector<GroundTruthRecord> truth;
  /// Meaning labels in place of clauses; an ideal rephrasing.
  std::vector<RephrasingBundle> rephrasings;
};

SyntheticCorpus sample_corpus(const MeaningWorld& w, int n_narratives, int length,
                              std::uint64_t seed);

/// narrative_id,clause_num,meaning,context,wording,IM_bits
std::string ground_truth_csv(std::span<const GroundTruthRecord> truth);

/// Exact conditional probabilities read from the world. Text is split into
/// tokens of leading whitespace plus one word, each word a wording chained
/// from the initial context. A wording prompt is scored with each clause
/// conditioned on the meaning label at the same position of its rephrased
/// part; prompt tokens carry zero bits.
class WorldBackend final : public Backend {
 public:
  explicit WorldBackend(MeaningWorld world);

  std::string id() const override { return id_; }
  ScoredText score(std::string_view text) const override;

  const MeaningWorld& world() const { return world_; }

 private:
  MeaningWorld world_;
  std::string id_;
};

}  // namespace narrinfo
