// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#include "narrinfo/infocalc.hpp"

#include "narrinfo/csv.hpp"
#include "narrinfo/error.hpp"

namespace narrinfo {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::plain: return "plain";
    case Variant::with_initial_context: return "with_initial_context";
    case Variant::partial_rephrasing: return "partial_rephrasing";
  }
  return "plain";
}

Variant parse_variant(std::string_view s) {
  s = trim(s);
  if (s == "plain" || s.empty()) return Variant::plain;
  if (s == "with_initial_context") return Variant::with_initial_context;
  if (s == "partial_rephrasing") return Variant::partial_rephrasing;
  fail(ErrorKind::InvalidArgument, "unknown variant '" + std::string(s) + "'");
}

namespace {

std::vector<ClauseBits> per_clause_bits(const ScoredText& scored,
                                        const CanonicalText& canon,
                                        std::string_view narrative_id,
                                        std::size_t offset) {
  const auto alignment = align_clauses(scored, canon, narrative_id, offset);
  std::vector<ClauseBits> out;
  out.reserve(alignment.clauses.size());
  for (const auto& m : alignment.clauses) {
    out.push_back({m.clause_index, clause_bits(scored, m)});
  }
  return out;
}

void check_rephrasing(const Narrative& n, const RephrasingBundle& r) {
  if (r.clauses.size() != n.length()) {
    fail(ErrorKind::ClauseCountMismatch,
         "narrative '" + n.id + "': expected " + std::to_string(n.length()) +
             ", found " + std::to_string(r.clauses.size()));
  }
  if (!r.validated) {
    fail(ErrorKind::InvalidArgument, "rephrasing '" + r.rephrasing_id +
                                         "' of '" + n.id + "' is not validated");
  }
}

double wording_bits_for(const Narrative& n, std::span<const std::string> rephrased,
                        int clause_index, const Backend& backend,
                        std::vector<ClauseBits>* all) {
  const auto original = canonical_text(n, TextStyle::plain);
  const auto reph = canonical_text(rephrased, TextStyle::plain);
  const std::string prompt = build_wording_prompt(reph.text, original.text);
  const auto scored = backend.score(prompt);
  auto bits = per_clause_bits(scored, original, n.id, prompt.size() - original.text.size());
  const double value = bits.at(static_cast<std::size_t>(clause_index - 1)).bits;
  if (all != nullptr) *all = std::move(bits);
  return value;
}

}  // namespace

std::vector<ClauseBits> total_info(const Narrative& n, const Backend& backend,
                                   Variant variant) {
  const auto canon = canonical_text(n, TextStyle::plain);
  const std::string prefix =
      variant == Variant::with_initial_context ? scoring_prefix(n) : std::string{};
  const auto scored = backend.score(prefix + canon.text);
  return per_clause_bits(scored, canon, n.id, prefix.size());
}

std::string build_wording_prompt(std::string_view rephrased,
                                 std::string_view original) {
  if (trim(rephrased).empty() || trim(original).empty()) {
    fail(ErrorKind::EmptyInput, "wording prompt needs both texts");
  }
  std::string prompt(kWordingPromptHeader);
  prompt += '\n';
  prompt += rephrased;
  prompt += "\n---\n";
  prompt += original;
  return prompt;
}

std::vector<ClauseBits> wording_info(const Narrative& n,
                                     const RephrasingBundle& rephrasing,
                                     const Backend& backend) {
  check_rephrasing(n, rephrasing);
  std::vector<ClauseBits> out;
  wording_bits_for(n, rephrasing.clauses, 1, backend, &out);
  return out;
}

double partial_wording_info(const Narrative& n, const RephrasingBundle& rephrasing,
                            int clause_index, const Backend& backend) {
  check_rephrasing(n, rephrasing);
  if (clause_index < 1 || static_cast<std::size_t>(clause_index) > n.length()) {
    fail(ErrorKind::InvalidArgument,
         "clause " + std::to_string(clause_index) + " outside 1.." +
             std::to_string(n.length()));
  }
  const std::span<const std::string> reph(rephrasing.clauses);
  return wording_bits_for(n, reph.first(static_cast<std::size_t>(clause_index)),
                          clause_index, backend, nullptr);
}

std::vector<ClauseBits> partial_wording_info_all(const Narrative& n,
                                                 const RephrasingBundle& rephrasing,
                                                 const Backend& backend) {
  std::vector<ClauseBits> out;
  out.reserve(n.length());
  for (std::size_t i = 1; i <= n.length(); ++i) {
    const int idx = static_cast<int>(i);
    out.push_back({idx, partial_wording_info(n, rephrasing, idx, backend)});
  }
  return out;
}

std::vector<ClauseInfoRecord> semantic_info(std::string_view narrative_id,
                                            std::span<const ClauseBits> total,
                                            std::span<const ClauseBits> wording,
                                            Variant variant,
                                            std::string_view backend_id,
                                            std::string_view rephrasing_id) {
  if (total.size() != wording.size()) {
    fail(ErrorKind::LengthMismatch, std::to_string(total.size()) + " vs " +
                                        std::to_string(wording.size()) + " clauses");
  }
  std::vector<ClauseInfoRecord> out;
  out.reserve(total.size());
  for (std::size_t i = 0; i < total.size(); ++i) {
    if (total[i].clause_index != wording[i].clause_index) {
      fail(ErrorKind::LengthMismatch,
           "clause " + std::to_string(total[i].clause_index) + " paired with " +
               std::to_string(wording[i].clause_index));
    }
    out.push_back({std::string(narrative_id), total[i].clause_index, total[i].bits,
                   wording[i].bits, total[i].bits - wording[i].bits, variant,
                   std::string(backend_id), std::string(rephrasing_id)});
  }
  return out;
}

NarrativeInfoProfile profile(const Narrative& n,
                             std::span<const ClauseInfoRecord> records) {
  if (records.size() != n.length()) {
    fail(ErrorKind::IncompleteRecords,
         "narrative '" + n.id + "' has " + std::to_string(n.length()) +
             " clauses, " + std::to_string(records.size()) + " records");
  }
  NarrativeInfoProfile p;
  p.narrative_id = n.id;
  p.records.assign(records.begin(), records.end());
  double sum_I = 0.0;
  double sum_IM = 0.0;
  std::size_t chars = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.narrative_id != n.id || r.clause_index != static_cast<int>(i + 1)) {
      fail(ErrorKind::IncompleteRecords,
           "record " + std::to_string(i) + " is not clause " +
               std::to_string(i + 1) + " of '" + n.id + "'");
    }
    sum_I += r.I_bits;
    sum_IM += r.IM_bits;
    p.cumulative_I.push_back(sum_I);
    p.cumulative_IM.push_back(sum_IM);
    chars += utf8_length(n.clauses[i].text);
  }
  p.bits_per_char = chars == 0 ? 0.0 : sum_I / static_cast<double>(chars);
  p.mean_IM_per_clause = sum_IM / static_cast<double>(records.size());
  return p;
}

std::string records_csv(std::span<const ClauseInfoRecord> records) {
  csv::Table table;
  table.header = {"narrative_id", "clause_num", "I_bits",     "IW_bits",
                  "IM_bits",      "variant",    "backend_id", "rephrasing_id"};
  for (const auto& r : records) {
    table.rows.push_back({r.narrative_id, std::to_string(r.clause_index),
                          format_double(r.I_bits), format_double(r.IW_bits),
                          format_double(r.IM_bits), std::string(to_string(r.variant)),
                          r.backend_id, r.rephrasing_id});
  }
  return csv::format(table);
}

void write_records(const std::filesystem::path& path,
                   std::span<const ClauseInfoRecord> records) {
  write_file_atomic(path, records_csv(records));
}

std::vector<ClauseInfoRecord> parse_records(std::string_view csv_content) {
  const auto table = csv::parse(csv_content);
  const auto id = table.column("narrative_id");
  const auto num = table.column("clause_num");
  const auto i_col = table.column("I_bits");
  const auto iw_col = table.column("IW_bits");
  const auto im_col = table.column("IM_bits");
  const auto var_col = table.find_column("variant");
  const auto be_col = table.find_column("backend_id");
  const auto re_col = table.find_column("rephrasing_id");
  std::vector<ClauseInfoRecord> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    ClauseInfoRecord r;
    r.narrative_id = row[id];
    r.clause_index = static_cast<int>(parse_int(row[num]));
    r.I_bits = parse_double(row[i_col]);
    r.IW_bits = parse_double(row[iw_col]);
    r.IM_bits = parse_double(row[im_col]);
    if (var_col) r.variant = parse_variant(row[*var_col]);
    if (be_col) r.backend_id = row[*be_col];
    if (re_col) r.rephrasing_id = row[*re_col];
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ClauseInfoRecord> read_records(const std::filesystem::path& path) {
  return parse_records(read_file(path));
}

}  // namespace narrinfo
