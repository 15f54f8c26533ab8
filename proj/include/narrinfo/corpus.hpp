// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "narrinfo/text_util.hpp"

namespace narrinfo {

/// One numbered segmentation unit of a narrative: an independent clause
/// together with the dependent clauses grouped under the same number.
struct Clause {
  int index = 0;        // 1-based
  std::string text;     // trimmed, non-empty
  ByteSpan span;        // within the plain canonical text
};

struct Narrative {
  std::string id;
  std::string title;
  std::vector<Clause> clauses;
  /// "Interviewer: ...\nInterviewee:[ preamble]"; absent for narratives
  /// told without a guiding question.
  std::optional<std::string> initial_context;

  std::size_t length() const { return clauses.size(); }
  std::vector<std::string> clause_texts() const;
};

struct CorpusManifest {
  std::vector<Narrative> narratives;
  std::filesystem::path source_path;
  std::string checksum;  // sha256 of the source bytes

  const Narrative* find(std::string_view id) const;
  std::size_t clause_count() const;
};

enum class TextStyle { plain, numbered };

/// Clause texts joined for scoring. Spans address each clause's own bytes,
/// excluding separators and numbering.
struct CanonicalText {
  std::string text;
  std::vector<ByteSpan> spans;
};

/// Loads `narrative_id,clause_num,text` (optional `title`) CSV. Rows of one
/// narrative must be contiguous and numbered 1..L in file order.
CorpusManifest load_corpus(const std::filesystem::path& path);
CorpusManifest parse_corpus(std::string_view csv_content,
                            std::filesystem::path source_path = {});

/// Builds a validated narrative from raw clause texts (trimmed, 1..L).
Narrative make_narrative(std::string id, std::span<const std::string> clauses,
                         std::string title = {});

CanonicalText canonical_text(const Narrative& n, TextStyle style);
CanonicalText canonical_text(std::span<const std::string> clauses,
                             TextStyle style);

inline constexpr std::string_view kClauseSeparator = " ";

Narrative attach_initial_context(const Narrative& n, std::string_view question,
                                 std::string_view preamble = {});

/// Text placed before the plain canonical text when scoring with the
/// initial context; empty when the narrative has none.
std::string scoring_prefix(const Narrative& n);

/// Guiding questions used when the narratives were collected.
namespace questions {
inline constexpr std::string_view kDangerOfDeath =
    "Were you ever in a situation where you thought you were in serious "
    "danger of being killed?";
inline constexpr std::string_view kSomeoneInDanger =
    "Were you ever in a situation where you thought someone was in serious "
    "danger of being killed?";
inline constexpr std::string_view kFactOfDeath =
    "Were you ever in a situation where you were suddenly faced with the "
    "fact of death?";
inline constexpr std::string_view kPremonition =
    "Is there anyone you know who gets a feeling that something is going to "
    "happen, and then it does happen?";
inline constexpr std::string_view kNeighborhood =
    "Is your neighborhood friendly?";
inline constexpr std::string_view kDaughterDied =
    "You said your other daughter died. How long ago did she die?";
}  // namespace questions

struct InitialContextEntry {
  std::string question;
  std::string preamble;
};

/// Reads `narrative_id,question[,preamble]` CSV.
std::map<std::string, InitialContextEntry> load_initial_contexts(
    const std::filesystem::path& path);

/// Attaches contexts to every listed narrative; unlisted ones are untouched.
void apply_initial_contexts(
    CorpusManifest& corpus,
    const std::map<std::string, InitialContextEntry>& contexts);

std::string corpus_csv(std::span<const Narrative> narratives);
void write_corpus(const std::filesystem::path& path,
                  std::span<const Narrative> narratives);

}  // namespace narrinfo
