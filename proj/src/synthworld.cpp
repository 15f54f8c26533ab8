// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#include "narrinfo/synthworld.hpp"

#include <cmath>
#include <random>
#include <set>

#include "narrinfo/csv.hpp"
#include "narrinfo/error.hpp"
#include "narrinfo/infocalc.hpp"

namespace narrinfo {

namespace {

constexpr double kSumTolerance = 1e-12;

double bits_of(double p) { return -std::log2(p) + 0.0; }

void check_name(std::string_view kind, std::string_view name) {
  if (name.empty()) fail(ErrorKind::SchemaError, std::string(kind) + " name is empty");
  for (char ch : name) {
    if (is_space(ch)) {
      fail(ErrorKind::SchemaError,
           std::string(kind) + " name '" + std::string(name) + "' contains whitespace");
    }
  }
}

void check_distribution(const Distribution& d, std::string_view what) {
  if (d.empty()) fail(ErrorKind::InvalidDistribution, std::string(what) + " is empty");
  double sum = 0.0;
  for (const auto& [k, p] : d) {
    if (!std::isfinite(p) || p < 0.0) {
      fail(ErrorKind::InvalidDistribution,
           std::string(what) + ": P(" + k + ") = " + format_double(p));
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    fail(ErrorKind::InvalidDistribution,
         std::string(what) + " sums to " + format_double(sum));
  }
}

template <class Map>
auto find_or_unknown(const Map& m, std::string_view key, std::string_view kind) {
  auto it = m.find(key);
  if (it == m.end()) {
    fail(ErrorKind::UnknownSymbol, "unknown " + std::string(kind) + " '" +
                                       std::string(key) + "'");
  }
  return it;
}

}  // namespace

MeaningWorld MeaningWorld::from_json(const nlohmann::json& j) {
  MeaningWorld w;
  try {
    w.contexts_ = j.at("contexts").get<std::vector<std::string>>();
    w.initial_ = j.contains("initial_context")
                     ? j.at("initial_context").get<std::string>()
                     : (w.contexts_.empty() ? std::string{} : w.contexts_.front());
    for (const auto& [c, dist] : j.at("meanings").items()) {
      w.meanings_[c] = dist.get<Distribution>();
    }
    for (const auto& [m, per_ctx] : j.at("wordings").items()) {
      for (const auto& [c, dist] : per_ctx.items()) {
        w.wordings_[m][c] = dist.get<Distribution>();
      }
    }
    if (j.contains("transitions")) {
      for (const auto& [c, next] : j.at("transitions").items()) {
        for (const auto& [wd, target] : next.items()) {
          w.transitions_[c][wd] = target.get<std::string>();
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::SchemaError, std::string("world file: ") + e.what());
  }
  w.validate();
  return w;
}

MeaningWorld MeaningWorld::parse(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::SchemaError, std::string("world file: ") + e.what());
  }
  return from_json(j);
}

MeaningWorld MeaningWorld::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

nlohmann::json MeaningWorld::to_json() const {
  nlohmann::json j;
  j["contexts"] = contexts_;
  j["initial_context"] = initial_;
  j["meanings"] = nlohmann::json::object();
  for (const auto& [c, d] : meanings_) j["meanings"][c] = d;
  j["wordings"] = nlohmann::json::object();
  for (const auto& [m, per_ctx] : wordings_) {
    for (const auto& [c, d] : per_ctx) j["wordings"][m][c] = d;
  }
  j["transitions"] = nlohmann::json::object();
  for (const auto& [c, next] : transitions_) {
    for (const auto& [wd, target] : next) j["transitions"][c][wd] = target;
  }
  return j;
}

void MeaningWorld::validate() {
  if (contexts_.empty()) fail(ErrorKind::SchemaError, "world has no contexts");
  std::set<std::string, std::less<>> seen;
  for (const auto& c : contexts_) {
    check_name("context", c);
    if (!seen.insert(c).second) fail(ErrorKind::SchemaError, "duplicate context '" + c + "'");
  }
  if (!seen.contains(initial_)) {
    fail(ErrorKind::UnknownSymbol, "initial context '" + initial_ + "' is not a context");
  }

  for (const auto& [c, dist] : meanings_) {
    if (!seen.contains(c)) fail(ErrorKind::UnknownSymbol, "unknown context '" + c + "'");
    for (const auto& [m, p] : dist) check_name("meaning", m);
    check_distribution(dist, "P(M|" + c + ")");
  }
  for (const auto& c : contexts_) {
    if (!meanings_.contains(c)) {
      fail(ErrorKind::InvalidDistribution, "context '" + c + "' has no meaning distribution");
    }
  }

  for (const auto& [m, per_ctx] : wordings_) {
    if (!has_meaning(m)) fail(ErrorKind::UnknownSymbol, "unknown meaning '" + m + "'");
    for (const auto& [c, dist] : per_ctx) {
      if (!seen.contains(c)) fail(ErrorKind::UnknownSymbol, "unknown context '" + c + "'");
      for (const auto& [wd, p] : dist) check_name("wording", wd);
      check_distribution(dist, "P(C|" + m + "," + c + ")");
    }
  }
  for (const auto& [c, dist] : meanings_) {
    for (const auto& [m, p] : dist) {
      if (p <= 0.0) continue;
      auto it = wordings_.find(m);
      if (it == wordings_.end() || !it->second.contains(c)) {
        fail(ErrorKind::InvalidDistribution,
             "meaning '" + m + "' has no wordings in context '" + c + "'");
      }
    }
  }

  // Wordings with positive probability decide the meaning map; zero-weight
  // entries only name wordings that are otherwise unmapped.
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& [m, per_ctx] : wordings_) {
      for (const auto& [c, dist] : per_ctx) {
        for (const auto& [wd, p] : dist) {
          if ((pass == 0) != (p > 0.0)) continue;
          auto [it, inserted] = wording_to_meaning_.emplace(wd, m);
          if (!inserted && it->second != m && pass == 0) {
            fail(ErrorKind::SingleMeaningViolation,
                 "wording '" + wd + "' realizes both '" + it->second + "' and '" + m + "'");
          }
        }
      }
    }
  }

  for (const auto& [c, next] : transitions_) {
    if (!seen.contains(c)) fail(ErrorKind::UnknownSymbol, "unknown context '" + c + "'");
    for (const auto& [wd, target] : next) {
      if (!has_wording(wd)) fail(ErrorKind::UnknownSymbol, "unknown wording '" + wd + "'");
      if (!seen.contains(target)) {
        fail(ErrorKind::UnknownSymbol, "unknown context '" + target + "'");
      }
    }
  }
}

std::vector<std::string> MeaningWorld::meanings() const {
  std::set<std::string> out;
  for (const auto& [c, dist] : meanings_) {
    for (const auto& [m, p] : dist) out.insert(m);
  }
  return {out.begin(), out.end()};
}

std::vector<std::string> MeaningWorld::wordings() const {
  std::vector<std::string> out;
  for (const auto& [wd, m] : wording_to_meaning_) out.push_back(wd);
  return out;
}

bool MeaningWorld::has_context(std::string_view c) const { return meanings_.contains(c); }

bool MeaningWorld::has_meaning(std::string_view m) const {
  for (const auto& [c, dist] : meanings_) {
    if (dist.contains(std::string(m))) return true;
  }
  return false;
}

bool MeaningWorld::has_wording(std::string_view w) const {
  return wording_to_meaning_.contains(w);
}

const Distribution& MeaningWorld::meaning_distribution(std::string_view context) const {
  return find_or_unknown(meanings_, context, "context")->second;
}

double MeaningWorld::meaning_prob(std::string_view meaning, std::string_view context) const {
  const auto& dist = meaning_distribution(context);
  if (!has_meaning(meaning)) {
    fail(ErrorKind::UnknownSymbol, "unknown meaning '" + std::string(meaning) + "'");
  }
  auto it = dist.find(std::string(meaning));
  return it == dist.end() ? 0.0 : it->second;
}

double MeaningWorld::wording_prob(std::string_view wording, std::string_view meaning,
                                  std::string_view context) const {
  if (!has_context(context)) {
    fail(ErrorKind::UnknownSymbol, "unknown context '" + std::string(context) + "'");
  }
  if (!has_wording(wording)) {
    fail(ErrorKind::UnknownSymbol, "unknown wording '" + std::string(wording) + "'");
  }
  auto m = wordings_.find(meaning);
  if (m == wordings_.end()) {
    if (!has_meaning(meaning)) {
      fail(ErrorKind::UnknownSymbol, "unknown meaning '" + std::string(meaning) + "'");
    }
    return 0.0;
  }
  auto c = m->second.find(context);
  if (c == m->second.end()) return 0.0;
  auto p = c->second.find(std::string(wording));
  return p == c->second.end() ? 0.0 : p->second;
}

const std::string& MeaningWorld::meaning_of(std::string_view wording) const {
  return find_or_unknown(wording_to_meaning_, wording, "wording")->second;
}

const std::string& MeaningWorld::next_context(std::string_view context,
                                              std::string_view wording) const {
  auto c = transitions_.find(context);
  if (c != transitions_.end()) {
    auto t = c->second.find(wording);
    if (t != c->second.end()) return t->second;
  }
  for (const auto& ctx : contexts_) {
    if (ctx == context) return ctx;
  }
  fail(ErrorKind::UnknownSymbol, "unknown context '" + std::string(context) + "'");
}

double marginal_wording_prob(const MeaningWorld& w, std::string_view wording,
                             std::string_view context) {
  double p = 0.0;
  for (const auto& [m, pm] : w.meaning_distribution(context)) {
    p += pm * w.wording_prob(wording, m, context);
  }
  return p;
}

double meaning_prob_via_phrasings(const MeaningWorld& w, std::string_view meaning,
                                  std::string_view context) {
  if (!w.has_context(context)) {
    fail(ErrorKind::UnknownSymbol, "unknown context '" + std::string(context) + "'");
  }
  if (!w.has_meaning(meaning)) {
    fail(ErrorKind::UnknownSymbol, "unknown meaning '" + std::string(meaning) + "'");
  }
  double p = 0.0;
  for (const auto& wd : w.wordings()) {
    if (w.meaning_of(wd) == meaning) p += marginal_wording_prob(w, wd, context);
  }
  return p;
}

Decomposition decomposition_check(const MeaningWorld& w, std::string_view wording,
                                  std::string_view context) {
  const double p = marginal_wording_prob(w, wording, context);
  if (!(p > 0.0)) {
    fail(ErrorKind::ZeroProbability, "P(" + std::string(wording) + "|" +
                                         std::string(context) + ") = 0");
  }
  Decomposition d;
  d.meaning = w.meaning_of(wording);
  d.I = bits_of(p);
  d.IW = bits_of(w.wording_prob(wording, d.meaning, context));
  d.IM = d.I - d.IW;
  const double expected = bits_of(w.meaning_prob(d.meaning, context));
  if (!(std::abs(d.IM - expected) <= kDecompositionTolerance)) {
    fail(ErrorKind::DecompositionViolation,
         "IM = " + format_double(d.IM) + " but -log2 P(M|c) = " + format_double(expected));
  }
  return d;
}

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

const std::string& draw(const Distribution& d, std::mt19937_64& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  const std::string* last = nullptr;
  for (const auto& [k, p] : d) {
    if (p <= 0.0) continue;
    acc += p;
    last = &k;
    if (u < acc) return k;
  }
  return *last;
}

std::string synthetic_id(int i) {
  std::string digits = std::to_string(i);
  if (digits.size() < 3) digits.insert(0, 3 - digits.size(), '0');
  return "syn-" + digits;
}

}  // namespace

SyntheticCorpus sample_corpus(const MeaningWorld& w, int n_narratives, int length,
                              std::uint64_t seed) {
  if (n_narratives < 0 || length < 1) {
    fail(ErrorKind::InvalidArgument, "sample_corpus needs n >= 0 and len >= 1");
  }
  SyntheticCorpus out;
  std::mt19937_64 rng(seed);
  for (int n = 1; n <= n_narratives; ++n) {
    const std::string id = synthetic_id(n);
    std::vector<std::string> clauses;
    std::vector<std::string> labels;
    std::string context = w.initial_context();
    for (int i = 1; i <= length; ++i) {
      const auto& meaning = draw(w.meaning_distribution(context), rng);
      Distribution phrasings;
      for (const auto& wd : w.wordings()) {
        const double p = w.wording_prob(wd, meaning, context);
        if (p > 0.0) phrasings.emplace(wd, p);
      }
      const auto& wording = draw(phrasings, rng);
      out.truth.push_back(
          {id, i, meaning, context, wording, bits_of(w.meaning_prob(meaning, context))});
      clauses.push_back(wording);
      labels.push_back(meaning);
      context = w.next_context(context, wording);
    }
    out.narratives.push_back(make_narrative(id, clauses));
    RephrasingBundle b;
    b.narrative_id = id;
    b.rephrasing_id = "r1";
    b.clauses = std::move(labels);
    b.generator_model = "world-meanings";
    validate_bundle(b, out.narratives.back());
    out.rephrasings.push_back(std::move(b));
  }
  return out;
}

std::string ground_truth_csv(std::span<const GroundTruthRecord> truth) {
  csv::Table table;
  table.header = {"narrative_id", "clause_num", "meaning", "context", "wording", "IM_bits"};
  for (const auto& t : truth) {
    table.rows.push_back({t.narrative_id, std::to_string(t.clause_index), t.meaning,
                          t.context, t.wording, format_double(t.IM_bits)});
  }
  return csv::format(table);
}

WorldBackend::WorldBackend(MeaningWorld world) : world_(std::move(world)) {
  id_ = "world-" + sha256_hex(world_.to_json().dump()).substr(0, 12);
}

namespace {

struct Word {
  std::size_t token_begin;  // includes leading whitespace
  std::size_t begin;
  std::size_t end;
};

std::vector<Word> split_words(std::string_view text) {
  std::vector<Word> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t start = pos;
    while (pos < text.size() && is_space(text[pos])) ++pos;
    const std::size_t word = pos;
    while (pos < text.size() && !is_space(text[pos])) ++pos;
    out.push_back({start, word, pos});
  }
  return out;
}

}  // namespace

ScoredText WorldBackend::score(std::string_view text) const {
  const auto words = split_words(text);

  std::size_t original_begin = 0;
  std::vector<std::string> meanings;
  const std::string header = std::string(kWordingPromptHeader) + "\n";
  if (text.substr(0, header.size()) == header) {
    const std::size_t sep = text.find("\n---\n", header.size());
    if (sep == std::string_view::npos) {
      fail(ErrorKind::InvalidArgument, "wording prompt without separator");
    }
    original_begin = sep + 5;
    for (const auto& wd : words) {
      if (wd.begin >= header.size() && wd.end <= sep) {
        meanings.emplace_back(text.substr(wd.begin, wd.end - wd.begin));
      }
    }
  }

  ScoredText out;
  out.text = std::string(text);
  out.backend_id = id_;
  std::string context = world_.initial_context();
  std::size_t clause = 0;
  for (const auto& wd : words) {
    TokenScore t;
    t.text = std::string(text.substr(wd.token_begin, wd.end - wd.token_begin));
    t.bytes = {wd.token_begin, wd.end};
    if (wd.begin >= original_begin && wd.begin < wd.end) {
      const std::string wording(text.substr(wd.begin, wd.end - wd.begin));
      double p = 0.0;
      if (clause < meanings.size()) {
        p = world_.wording_prob(wording, meanings[clause], context);
      } else {
        p = marginal_wording_prob(world_, wording, context);
      }
      if (!(p > 0.0)) {
        fail(ErrorKind::ZeroProbability,
             "P(" + wording + "|" + context + ") = 0 at clause " + std::to_string(clause + 1));
      }
      t.info_bits = bits_of(p);
      context = world_.next_context(context, wording);
      ++clause;
    }
    out.tokens.push_back(std::move(t));
  }
  out.total_bits = sum_bits(out.tokens);
  return out;
}

}  // namespace narrinfo
