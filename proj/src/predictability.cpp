// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#include "narrinfo/predictability.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <regex>

#include "narrinfo/csv.hpp"
#include "narrinfo/error.hpp"

namespace narrinfo {

void BinSpec::validate() const {
  if (boundaries.size() < 2) fail(ErrorKind::InvalidArgument, "need at least one bin");
  for (std::size_t i = 1; i < boundaries.size(); ++i) {
    if (!(boundaries[i] > boundaries[i - 1])) {
      fail(ErrorKind::InvalidArgument, "bin boundaries must be strictly increasing");
    }
  }
  if (per_bin_target < 1) fail(ErrorKind::InvalidArgument, "per_bin_target must be >= 1");
}

std::optional<std::size_t> BinSpec::bin_of(double value) const {
  if (std::isnan(value) || value < boundaries.front() || value > boundaries.back()) {
    return std::nullopt;
  }
  if (value == boundaries.back()) return bin_count() - 1;
  auto it = std::upper_bound(boundaries.begin(), boundaries.end(), value);
  return static_cast<std::size_t>(it - boundaries.begin()) - 1;
}

namespace {

// Unbiased draw from [0, n) by rejection; mt19937_64 output is fully
// specified, so the draw is portable across standard libraries.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % n;
  }
}

}  // namespace

SampleResult stratified_sample(std::span<const ClauseInfoRecord> records,
                               const BinSpec& spec, std::uint64_t seed) {
  spec.validate();
  if (records.empty()) fail(ErrorKind::EmptyRecords, "nothing to sample");

  std::vector<std::vector<ClauseRef>> bins(spec.bin_count());
  for (const auto& r : records) {
    if (auto b = spec.bin_of(r.IM_bits)) bins[*b].push_back({r.narrative_id, r.clause_index});
  }

  SampleResult out;
  std::mt19937_64 rng(seed);
  std::vector<ClauseRef> selected;
  for (auto& pop : bins) {
    std::sort(pop.begin(), pop.end());
    pop.erase(std::unique(pop.begin(), pop.end()), pop.end());
    const std::size_t k = std::min(pop.size(), static_cast<std::size_t>(spec.per_bin_target));
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + bounded(rng, pop.size() - i);
      std::swap(pop[i], pop[j]);
    }
    out.bin_population.push_back(pop.size());
    out.bin_selected.push_back(k);
    selected.insert(selected.end(), pop.begin(), pop.begin() + static_cast<std::ptrdiff_t>(k));
  }
  out.sampled_before_removal = selected.size();
  for (auto& ref : selected) {
    if (ref.clause_index == 1) {
      ++out.first_clauses_removed;
    } else {
      out.clauses.push_back(std::move(ref));
    }
  }
  std::sort(out.clauses.begin(), out.clauses.end());
  return out;
}

std::string numbered_prefix(const Narrative& n, int before_clause) {
  if (before_clause < 2 || static_cast<std::size_t>(before_clause) > n.length() + 1) {
    fail(ErrorKind::EmptyPrefix, "narrative '" + n.id + "' has no clauses before " +
                                     std::to_string(before_clause));
  }
  const auto texts = n.clause_texts();
  return canonical_text(std::span<const std::string>(texts).first(
                            static_cast<std::size_t>(before_clause - 1)),
                        TextStyle::numbered)
      .text;
}

std::vector<ChatMessage> build_continuation_prompt(std::string_view numbered_prefix) {
  if (trim(numbered_prefix).empty()) fail(ErrorKind::EmptyPrefix, "no clauses given");
  std::string user =
      "In this task, you are presented with a narrative divided into numbered "
      "clauses.\n"
      "The narrative is paused at a certain point, and your task is to "
      "generate the most plausible continuation for the next clause only.\n"
      "A clause should contain a single piece of information, a single action, "
      "etc.\n"
      "\n"
      "Here is the narrative:\"' ";
  user += numbered_prefix;
  user +=
      "'\".\n"
      "\n"
      "Please output the continuation in the following format: The most "
      "plausible next clause is \"'clause text'\".";
  return {{"user", std::move(user)}};
}

namespace {

constexpr std::array<std::string_view, 7> kQuotes = {
    "\"", "'", "`", "“", "”", "‘", "’"};

std::size_t leading_quote(std::string_view s) {
  for (auto q : kQuotes) {
    if (s.substr(0, q.size()) == q) return q.size();
  }
  return 0;
}

std::size_t trailing_quote(std::string_view s) {
  for (auto q : kQuotes) {
    if (s.size() >= q.size() && s.substr(s.size() - q.size()) == q) return q.size();
  }
  return 0;
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace

std::string parse_continuation(std::string_view response) {
  static constexpr std::string_view kMarker = "the most plausible next clause is";
  const std::string lowered = lower_ascii(response);
  const auto at = lowered.rfind(kMarker);
  if (at == std::string::npos) fail(ErrorKind::FormatNotFound, "marker missing");

  std::string_view rest = response.substr(at + kMarker.size());
  rest = rest.substr(0, rest.find('\n'));
  rest = trim(rest);
  if (!rest.empty() && rest.front() == ':') rest = trim(rest.substr(1));
  if (rest.size() >= 2 && rest.back() == '.' &&
      trailing_quote(rest.substr(0, rest.size() - 1)) > 0) {
    rest.remove_suffix(1);
  }
  int opened = 0;
  while (std::size_t len = leading_quote(rest)) {
    rest.remove_prefix(len);
    ++opened;
  }
  if (opened == 0) fail(ErrorKind::FormatNotFound, "clause is not quoted");
  for (; opened > 0; --opened) {
    const std::size_t len = trailing_quote(rest);
    if (len == 0) break;
    rest.remove_suffix(len);
  }
  rest = trim(rest);
  if (rest.empty()) fail(ErrorKind::FormatNotFound, "empty clause");
  return std::string(rest);
}

std::vector<ChatMessage> build_judgment_prompt(std::string_view numbered_prefix,
                                               std::string_view original_clause,
                                               std::string_view proposed_clause) {
  if (trim(numbered_prefix).empty() || trim(original_clause).empty() ||
      trim(proposed_clause).empty()) {
    fail(ErrorKind::EmptyInput, "judgment prompt needs prefix and both clauses");
  }
  std::string user =
      "Here is a narrative, divided into numbered clauses, and paused at a "
      "certain point:\"' ";
  user += numbered_prefix;
  user +=
      "'\".\n"
      "\n"
      "Here are two possible continuations for the next clause:\n"
      "1. '''";
  user += original_clause;
  user += "'''\n2. '''";
  user += proposed_clause;
  user +=
      "'''\n"
      "\n"
      "Do they convey essentially the same meaning (wording/phrasing may "
      "differ)?\n"
      "Answer in a step-by-step manner.\n"
      "At the end of your answer provide a True/False decision in the "
      "following format: **Same meaning: True/False**.";
  return {{"user", std::move(user)}};
}

bool parse_judgment(std::string_view response) {
  static const std::regex kVerdict(R"(\*\*\s*Same meaning:\s*(true|false)\s*\*\*)",
                                   std::regex::icase);
  const std::string text(response);
  std::optional<bool> verdict;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kVerdict);
       it != std::sregex_iterator(); ++it) {
    verdict = lower_ascii((*it)[1].str()) == "true";
  }
  if (!verdict) fail(ErrorKind::VerdictNotFound, "no '**Same meaning: True/False**' marker");
  return *verdict;
}

PredictionTrial predict_clause(const Narrative& n, int clause_index, double IM_bits,
                               const Backend& generator,
                               const GenerationParams& params) {
  if (clause_index < 2 || static_cast<std::size_t>(clause_index) > n.length()) {
    fail(ErrorKind::InvalidArgument, "clause " + std::to_string(clause_index) +
                                         " of '" + n.id + "' cannot be predicted");
  }
  PredictionTrial trial;
  trial.narrative_id = n.id;
  trial.clause_index = clause_index;
  trial.IM_bits = IM_bits;
  const auto prompt = build_continuation_prompt(numbered_prefix(n, clause_index));
  trial.predicted_text = parse_continuation(generator.generate(prompt, params));
  return trial;
}

void judge_trial(PredictionTrial& trial, const Narrative& n, const Backend& judge,
                 const GenerationParams& params) {
  const auto& original = n.clauses.at(static_cast<std::size_t>(trial.clause_index - 1)).text;
  const auto prompt = build_judgment_prompt(numbered_prefix(n, trial.clause_index),
                                            original, trial.predicted_text);
  trial.judge_transcript = judge.generate(prompt, params);
  trial.judged_same_meaning = parse_judgment(trial.judge_transcript);
}

std::vector<HumanResult> parse_human_results(std::string_view csv_content) {
  csv::Table table;
  std::size_t id = 0, num = 0, answers = 0, correct = 0;
  try {
    table = csv::parse(csv_content);
    id = table.column("narrative_id");
    num = table.column("clause_num");
    answers = table.column("num_answers");
    correct = table.column("num_correct");
  } catch (const Error& e) {
    fail(ErrorKind::SchemaError, std::string("human results: ") + e.what());
  }
  std::vector<std::size_t> answer_cols;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (table.header[c].rfind("p_", 0) == 0) answer_cols.push_back(c);
  }
  std::vector<HumanResult> out;
  for (const auto& row : table.rows) {
    HumanResult h;
    h.narrative_id = row[id];
    h.clause_index = static_cast<int>(parse_int(row[num]));
    h.num_answers = static_cast<int>(parse_int(row[answers]));
    h.num_correct = static_cast<int>(parse_int(row[correct]));
    if (h.num_correct < 0 || h.num_correct > h.num_answers) {
      fail(ErrorKind::SchemaError, "num_correct outside 0..num_answers for '" +
                                       h.narrative_id + "' clause " +
                                       std::to_string(h.clause_index));
    }
    for (auto c : answer_cols) {
      if (!trim(row[c]).empty()) h.predictions.emplace_back(table.header[c], row[c]);
    }
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<HumanResult> ingest_human_results(const std::filesystem::path& path) {
  return parse_human_results(read_file(path));
}

std::size_t merge_human_results(std::vector<PredictionTrial>& trials,
                                std::span<const HumanResult> results) {
  std::size_t matched = 0;
  for (const auto& h : results) {
    for (auto& t : trials) {
      if (t.narrative_id == h.narrative_id && t.clause_index == h.clause_index) {
        t.human_answer_count = h.num_answers;
        t.human_correct_count = h.num_correct;
        ++matched;
      }
    }
  }
  return matched;
}

PredictabilityReport predictability_report(std::span<const PredictionTrial> trials,
                                           double bin_width) {
  if (!(bin_width > 0.0)) fail(ErrorKind::InvalidArgument, "bin width must be > 0");
  PredictabilityReport rep;
  rep.trials = static_cast<int>(trials.size());
  std::map<long long, PredictabilityBin> bins;
  for (const auto& t : trials) {
    if (t.judged_same_meaning.value_or(false)) ++rep.judged_positive;
    if (t.judged_same_meaning.value_or(false) && t.verified == false) {
      ++rep.judge_false_positives;
    }
    if (!t.machine_predicted()) continue;
    ++rep.machine_predicted;
    const auto k = static_cast<long long>(std::floor(t.IM_bits / bin_width));
    auto& bin = bins[k];
    if (t.human_predicted()) {
      ++bin.human_predicted;
      ++rep.human_predicted;
      ++rep.human_correct_distribution[*t.human_correct_count];
    } else {
      ++bin.machine_only;
      if (t.human_answer_count) ++rep.human_not_predicted;
    }
  }
  if (!bins.empty()) {
    for (long long k = bins.begin()->first; k <= bins.rbegin()->first; ++k) {
      PredictabilityBin b = bins.count(k) ? bins[k] : PredictabilityBin{};
      b.lo = static_cast<double>(k) * bin_width;
      b.hi = static_cast<double>(k + 1) * bin_width;
      rep.histogram.push_back(b);
    }
  }
  return rep;
}

namespace {

std::string format_optional_bool(const std::optional<bool>& b) {
  if (!b) return {};
  return *b ? "true" : "false";
}

std::optional<bool> parse_optional_bool(std::string_view s) {
  const std::string v = lower_ascii(trim(s));
  if (v.empty()) return std::nullopt;
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(ErrorKind::SchemaError, "not a boolean: '" + std::string(s) + "'");
}

std::optional<int> parse_optional_int(std::string_view s) {
  if (trim(s).empty()) return std::nullopt;
  return static_cast<int>(parse_int(s));
}

}  // namespace

std::string trials_csv(std::span<const PredictionTrial> trials) {
  csv::Table table;
  table.header = {"narrative_id",    "clause_num",           "IM_bits",
                  "predicted_text",  "correct_gpt",          "correct_gpt_verified",
                  "judge_transcript", "num_answers",         "num_correct"};
  for (const auto& t : trials) {
    table.rows.push_back(
        {t.narrative_id, std::to_string(t.clause_index), format_double(t.IM_bits),
         t.predicted_text, format_optional_bool(t.judged_same_meaning),
         format_optional_bool(t.verified), t.judge_transcript,
         t.human_answer_count ? std::to_string(*t.human_answer_count) : "",
         t.human_correct_count ? std::to_string(*t.human_correct_count) : ""});
  }
  return csv::format(table);
}

void write_trials(const std::filesystem::path& path,
                  std::span<const PredictionTrial> trials) {
  write_file_atomic(path, trials_csv(trials));
}

std::vector<PredictionTrial> parse_trials(std::string_view csv_content) {
  const auto table = csv::parse(csv_content);
  const auto id = table.column("narrative_id");
  const auto num = table.column("clause_num");
  const auto im = table.column("IM_bits");
  const auto pred = table.find_column("predicted_text");
  const auto gpt = table.find_column("correct_gpt");
  const auto ver = table.find_column("correct_gpt_verified");
  const auto tr = table.find_column("judge_transcript");
  const auto na = table.find_column("num_answers");
  const auto nc = table.find_column("num_correct");
  std::vector<PredictionTrial> out;
  for (const auto& row : table.rows) {
    PredictionTrial t;
    t.narrative_id = row[id];
    t.clause_index = static_cast<int>(parse_int(row[num]));
    t.IM_bits = parse_double(row[im]);
    if (pred) t.predicted_text = row[*pred];
    if (gpt) t.judged_same_meaning = parse_optional_bool(row[*gpt]);
    if (ver) t.verified = parse_optional_bool(row[*ver]);
    if (tr) t.judge_transcript = row[*tr];
    if (na) t.human_answer_count = parse_optional_int(row[*na]);
    if (nc) t.human_correct_count = parse_optional_int(row[*nc]);
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<PredictionTrial> read_trials(const std::filesystem::path& path) {
  return parse_trials(read_file(path));
}

std::string sample_csv(const SampleResult& sample) {
  csv::Table table;
  table.header = {"narrative_id", "clause_num"};
  for (const auto& c : sample.clauses) {
    table.rows.push_back({c.narrative_id, std::to_string(c.clause_index)});
  }
  return csv::format(table);
}

std::vector<ClauseRef> read_sample(const std::filesystem::path& path) {
  const auto table = csv::read(path);
  const auto id = table.column("narrative_id");
  const auto num = table.column("clause_num");
  std::vector<ClauseRef> out;
  for (const auto& row : table.rows) {
    out.push_back({row[id], static_cast<int>(parse_int(row[num]))});
  }
  return out;
}

}  // namespace narrinfo
