// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#include "narrinfo/corpus.hpp"

#include <set>

#include "narrinfo/csv.hpp"
#include "narrinfo/error.hpp"

namespace narrinfo {

std::vector<std::string> Narrative::clause_texts() const {
  std::vector<std::string> out;
  out.reserve(clauses.size());
  for (const auto& c : clauses) out.push_back(c.text);
  return out;
}

const Narrative* CorpusManifest::find(std::string_view id) const {
  for (const auto& n : narratives) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

std::size_t CorpusManifest::clause_count() const {
  std::size_t total = 0;
  for (const auto& n : narratives) total += n.length();
  return total;
}

CanonicalText canonical_text(std::span<const std::string> clauses,
                             TextStyle style) {
  CanonicalText out;
  out.spans.reserve(clauses.size());
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (i > 0) {
      out.text += style == TextStyle::plain ? kClauseSeparator : "\n";
    }
    if (style == TextStyle::numbered) {
      out.text += std::to_string(i + 1) + ". ";
    }
    const std::size_t begin = out.text.size();
    out.text += clauses[i];
    out.spans.push_back({begin, out.text.size()});
  }
  return out;
}

CanonicalText canonical_text(const Narrative& n, TextStyle style) {
  return canonical_text(n.clause_texts(), style);
}

Narrative make_narrative(std::string id, std::span<const std::string> clauses,
                         std::string title) {
  if (clauses.empty()) {
    fail(ErrorKind::InvalidArgument, "narrative '" + id + "' has no clauses");
  }
  Narrative n;
  n.title = title.empty() ? id : std::move(title);
  n.id = std::move(id);
  std::vector<std::string> trimmed;
  trimmed.reserve(clauses.size());
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    auto t = trim(clauses[i]);
    if (t.empty()) {
      fail(ErrorKind::EmptyClauseText,
           "narrative '" + n.id + "' clause " + std::to_string(i + 1));
    }
    utf8_length(t);  // validates encoding
    trimmed.emplace_back(t);
  }
  const auto canon = canonical_text(trimmed, TextStyle::plain);
  for (std::size_t i = 0; i < trimmed.size(); ++i) {
    n.clauses.push_back(
        {static_cast<int>(i + 1), std::move(trimmed[i]), canon.spans[i]});
  }
  return n;
}

CorpusManifest parse_corpus(std::string_view csv_content,
                            std::filesystem::path source_path) {
  const auto table = csv::parse(csv_content);
  const auto id_col = table.column("narrative_id");
  const auto num_col = table.column("clause_num");
  const auto text_col = table.column("text");
  const auto title_col = table.find_column("title");

  struct Pending {
    std::string id;
    std::string title;
    std::vector<std::string> texts;
  };
  std::vector<Pending> pending;
  std::set<std::string> seen;

  for (const auto& row : table.rows) {
    const std::string& id = row[id_col];
    if (id.empty()) fail(ErrorKind::SchemaError, "empty narrative_id");
    if (pending.empty() || pending.back().id != id) {
      if (!seen.insert(id).second) {
        fail(ErrorKind::DuplicateNarrativeId,
             "narrative '" + id + "' appears in more than one block");
      }
      pending.push_back({id, title_col ? row[*title_col] : std::string{}, {}});
    }
    auto& cur = pending.back();
    const long long expected = static_cast<long long>(cur.texts.size()) + 1;
    long long found = 0;
    try {
      found = parse_int(row[num_col]);
    } catch (const Error&) {
      fail(ErrorKind::NonContiguousClauseNumbers,
           "narrative '" + id + "': expected " + std::to_string(expected) +
               ", found '" + row[num_col] + "'");
    }
    if (found != expected) {
      fail(ErrorKind::NonContiguousClauseNumbers,
           "narrative '" + id + "': expected " + std::to_string(expected) +
               ", found " + std::to_string(found));
    }
    if (trim(row[text_col]).empty()) {
      fail(ErrorKind::EmptyClauseText,
           "narrative '" + id + "' clause " + std::to_string(found));
    }
    cur.texts.push_back(row[text_col]);
  }

  CorpusManifest manifest;
  manifest.source_path = std::move(source_path);
  manifest.checksum = sha256_hex(csv_content);
  for (auto& p : pending) {
    manifest.narratives.push_back(
        make_narrative(std::move(p.id), p.texts, std::move(p.title)));
  }
  return manifest;
}

CorpusManifest load_corpus(const std::filesystem::path& path) {
  return parse_corpus(read_file(path), path);
}

Narrative attach_initial_context(const Narrative& n, std::string_view question,
                                 std::string_view preamble) {
  const auto q = trim(question);
  if (q.empty()) fail(ErrorKind::EmptyContext, "narrative '" + n.id + "'");
  Narrative out = n;
  std::string ctx = "Interviewer: ";
  ctx += q;
  ctx += "\nInterviewee:";
  if (const auto p = trim(preamble); !p.empty()) {
    ctx += ' ';
    ctx += p;
  }
  out.initial_context = std::move(ctx);
  return out;
}

std::string scoring_prefix(const Narrative& n) {
  if (!n.initial_context) return {};
  return *n.initial_context + std::string(kClauseSeparator);
}

std::map<std::string, InitialContextEntry> load_initial_contexts(
    const std::filesystem::path& path) {
  const auto table = csv::read(path);
  const auto id_col = table.column("narrative_id");
  const auto q_col = table.column("question");
  const auto p_col = table.find_column("preamble");
  std::map<std::string, InitialContextEntry> out;
  for (const auto& row : table.rows) {
    if (trim(row[q_col]).empty()) {
      fail(ErrorKind::EmptyContext, "narrative '" + row[id_col] + "'");
    }
    out[row[id_col]] = {row[q_col], p_col ? row[*p_col] : std::string{}};
  }
  return out;
}

void apply_initial_contexts(
    CorpusManifest& corpus,
    const std::map<std::string, InitialContextEntry>& contexts) {
  for (auto& n : corpus.narratives) {
    if (auto it = contexts.find(n.id); it != contexts.end()) {
      n = attach_initial_context(n, it->second.question, it->second.preamble);
    }
  }
}

std::string corpus_csv(std::span<const Narrative> narratives) {
  csv::Table table;
  table.header = {"narrative_id", "clause_num", "text", "title"};
  for (const auto& n : narratives) {
    for (const auto& c : n.clauses) {
      table.rows.push_back({n.id, std::to_string(c.index), c.text, n.title});
    }
  }
  return csv::format(table);
}

void write_corpus(const std::filesystem::path& path,
                  std::span<const Narrative> narratives) {
  write_file_atomic(path, corpus_csv(narratives));
}

}  // namespace narrinfo
