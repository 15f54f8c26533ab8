// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#include "narrinfo/rephrase.hpp"

#include "narrinfo/error.hpp"

namespace narrinfo {

ChunkPlan plan_chunks(int length, int chunk_limit) {
  if (length < 1 || chunk_limit < 1) {
    fail(ErrorKind::InvalidArgument, "plan_chunks needs L >= 1 and L_c >= 1");
  }
  ChunkPlan plan{length, chunk_limit, {}};
  const int parts = (length + chunk_limit - 1) / chunk_limit;
  const int base = length / parts;
  const int larger = length % parts;
  int start = 1;
  for (int p = 0; p < parts; ++p) {
    const int size = base + (p < larger ? 1 : 0);
    plan.parts.push_back({start, start + size - 1});
    start += size;
  }
  return plan;
}

std::vector<ChatMessage> build_rephrase_prompt(
    std::string_view numbered_part, int part_size,
    std::optional<std::string_view> summary) {
  if (trim(numbered_part).empty() || part_size < 1) {
    fail(ErrorKind::EmptyPart, "nothing to paraphrase");
  }
  std::string user =
      "You will be given a part of a narrative, segmented into linguistic "
      "clauses and numbered from 1 to " +
      std::to_string(part_size) +
      ".\n"
      "Your task is to generate a paraphrase of this part of the narrative, "
      "using different wording (lexical diversity) and phrasing (syntactic "
      "diversity), but keeping the meaning essentially the same.\n"
      "You should keep the numbering of the clauses in the paraphrase.\n"
      "When the part is in the middle of the narrative, you will be given a "
      "summary of the narrative up to that point.\n";
  if (summary) {
    user += "Summarized Narrative so far: '''";
    user += *summary;
    user += "'''\n";
  }
  user += "Part to paraphrase: '''";
  user += numbered_part;
  user += "'''";
  return {{"system", std::string(kRephraseSystemPrompt)}, {"user", std::move(user)}};
}

std::vector<ChatMessage> build_summary_prompt(std::string_view numbered_text) {
  if (trim(numbered_text).empty()) fail(ErrorKind::EmptyPart, "nothing to summarize");
  std::string user =
      "Summarize the following part of a narrative in 3-5 sentences, "
      "preserving the key events and participants: '''";
  user += numbered_text;
  user += "'''";
  return {{"system", std::string(kRephraseSystemPrompt)}, {"user", std::move(user)}};
}

namespace {

bool is_fence(std::string_view line) {
  line = trim(line);
  return line == "'''" || line.rfind("```", 0) == 0;
}

std::string_view strip_fence_marks(std::string_view s) {
  s = trim(s);
  if (s.rfind("'''", 0) == 0) s.remove_prefix(3);
  if (s.size() >= 3 && s.substr(s.size() - 3) == "'''") s.remove_suffix(3);
  return trim(s);
}

std::string numbered_range(std::span<const std::string> clauses) {
  return canonical_text(clauses, TextStyle::numbered).text;
}

[[noreturn]] void unparseable(int chunk, std::string_view line) {
  fail(ErrorKind::UnparseableNumbering,
       "chunk " + std::to_string(chunk) + ", line '" + std::string(line) + "'");
}

}  // namespace

std::vector<std::string> parse_numbered_clauses(std::string_view response,
                                                int chunk_index) {
  const std::string_view body = strip_fence_marks(response);
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    const std::size_t nl = body.find('\n', pos);
    std::string_view line = body.substr(pos, nl == std::string_view::npos ? body.npos : nl - pos);
    pos = nl == std::string_view::npos ? body.size() + 1 : nl + 1;
    line = trim(line);
    if (line.empty() || is_fence(line)) continue;

    std::size_t digits = 0;
    while (digits < line.size() && line[digits] >= '0' && line[digits] <= '9') ++digits;
    if (digits == 0 || digits >= line.size() || line[digits] != '.') {
      unparseable(chunk_index, line);
    }
    const long long number = parse_int(line.substr(0, digits));
    if (number != static_cast<long long>(out.size()) + 1) unparseable(chunk_index, line);
    const auto text = trim(line.substr(digits + 1));
    if (text.empty()) unparseable(chunk_index, line);
    out.emplace_back(text);
  }
  if (out.empty()) unparseable(chunk_index, trim(response));
  return out;
}

namespace {

struct Attempt {
  std::vector<std::string> clauses;
  std::vector<ChunkRecord> records;
  bool count_ok = true;
};

Attempt rephrase_with_limit(const std::vector<std::string>& source,
                            const Backend& generator, const RephraseOptions& opt,
                            int chunk_limit) {
  const GenerationParams params{opt.temperature, opt.max_tokens};
  const auto plan = plan_chunks(static_cast<int>(source.size()), chunk_limit);
  Attempt attempt;
  for (std::size_t idx = 0; idx < plan.parts.size(); ++idx) {
    const auto& part = plan.parts[idx];
    const std::span<const std::string> all(source);
    const auto part_clauses = all.subspan(part.start - 1, part.size());

    std::optional<std::string> summary;
    if (part.start > 1) {
      const auto request = build_summary_prompt(numbered_range(all.first(part.start - 1)));
      summary = std::string(trim(generator.generate(request, params)));
    }
    const auto request = build_rephrase_prompt(
        numbered_range(part_clauses), part.size(),
        summary ? std::optional<std::string_view>(*summary) : std::nullopt);
    auto parsed = parse_numbered_clauses(generator.generate(request, params),
                                         static_cast<int>(idx));
    if (static_cast<int>(parsed.size()) != part.size()) attempt.count_ok = false;
    for (auto& c : parsed) attempt.clauses.push_back(std::move(c));
    attempt.records.push_back({part.start, part.end, summary.has_value()});
  }
  if (attempt.clauses.size() != source.size()) attempt.count_ok = false;
  return attempt;
}

RephrasingBundle rephrase_clauses(const std::string& narrative_id,
                                  const std::vector<std::string>& source,
                                  const Backend& generator,
                                  const RephraseOptions& opt) {
  Attempt attempt = rephrase_with_limit(source, generator, opt, opt.chunk_limit);
  if (!attempt.count_ok) {
    attempt = rephrase_with_limit(source, generator, opt, opt.retry_chunk_limit);
  }
  if (!attempt.count_ok) {
    fail(ErrorKind::ClauseCountMismatch,
         "narrative '" + narrative_id + "': expected " +
             std::to_string(source.size()) + ", found " +
             std::to_string(attempt.clauses.size()));
  }
  RephrasingBundle bundle;
  bundle.narrative_id = narrative_id;
  bundle.rephrasing_id = opt.rephrasing_id;
  bundle.clauses = std::move(attempt.clauses);
  bundle.chunk_plan = std::move(attempt.records);
  bundle.generator_model = generator.id();
  bundle.validated = true;
  return bundle;
}

}  // namespace

RephrasingBundle generate_rephrasing(const Narrative& n, const Backend& generator,
                                     const RephraseOptions& options) {
  return rephrase_clauses(n.id, n.clause_texts(), generator, options);
}

RephrasingBundle second_rephrasing(const RephrasingBundle& first,
                                   const Backend& generator,
                                   RephraseOptions options) {
  if (!first.validated) {
    fail(ErrorKind::InvalidArgument,
         "rephrasing '" + first.rephrasing_id + "' of '" + first.narrative_id +
             "' is not validated");
  }
  if (options.rephrasing_id == "r1") options.rephrasing_id = "r2";
  return rephrase_clauses(first.narrative_id, first.clauses, generator, options);
}

void validate_bundle(RephrasingBundle& bundle, const Narrative& source) {
  if (bundle.narrative_id != source.id) {
    fail(ErrorKind::InvalidArgument, "bundle for '" + bundle.narrative_id +
                                         "' checked against '" + source.id + "'");
  }
  if (bundle.clauses.size() != source.length()) {
    fail(ErrorKind::ClauseCountMismatch,
         "narrative '" + source.id + "': expected " +
             std::to_string(source.length()) + ", found " +
             std::to_string(bundle.clauses.size()));
  }
  for (std::size_t i = 0; i < bundle.clauses.size(); ++i) {
    if (trim(bundle.clauses[i]).empty()) {
      fail(ErrorKind::EmptyClauseText, "rephrased '" + source.id + "' clause " +
                                           std::to_string(i + 1));
    }
  }
  bundle.validated = true;
}

Narrative bundle_as_narrative(const RephrasingBundle& bundle) {
  return make_narrative(bundle.narrative_id, bundle.clauses);
}

std::vector<RephrasingBundle> load_rephrasings(const std::filesystem::path& path,
                                               std::string rephrasing_id,
                                               const CorpusManifest& originals) {
  const auto corpus = load_corpus(path);
  std::vector<RephrasingBundle> out;
  for (const auto& n : corpus.narratives) {
    const Narrative* source = originals.find(n.id);
    if (source == nullptr) {
      fail(ErrorKind::SchemaError, "rephrasing for unknown narrative '" + n.id + "'");
    }
    RephrasingBundle b;
    b.narrative_id = n.id;
    b.rephrasing_id = rephrasing_id;
    b.clauses = n.clause_texts();
    validate_bundle(b, *source);
    out.push_back(std::move(b));
  }
  return out;
}

void write_rephrasings(const std::filesystem::path& path,
                       std::span<const RephrasingBundle> bundles) {
  std::vector<Narrative> narratives;
  narratives.reserve(bundles.size());
  for (const auto& b : bundles) narratives.push_back(bundle_as_narrative(b));
  write_corpus(path, narratives);
}

}  // namespace narrinfo
