// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#include "narrinfo/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <set>

#include "narrinfo/error.hpp"
#include "narrinfo/rephrase.hpp"

namespace narrinfo {

std::string_view to_string(DeviationMode m) {
  return m == DeviationMode::absolute_bits ? "absolute_bits" : "relative_percent";
}

std::optional<DeviationStats> deviation_stats(std::span<const double> values,
                                              DeviationMode mode) {
  if (values.empty()) return std::nullopt;
  DeviationStats s;
  s.n = static_cast<int>(values.size());
  s.mode = mode;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

namespace {

using Key = std::pair<std::string, int>;

std::map<Key, double> keyed(std::span<const ClauseInfoRecord> records, std::string_view what) {
  std::map<Key, double> out;
  for (const auto& r : records) {
    if (!out.emplace(Key{r.narrative_id, r.clause_index}, r.IM_bits).second) {
      fail(ErrorKind::AlignmentMismatch, std::string(what) + ": duplicate record for '" +
                                             r.narrative_id + "' clause " +
                                             std::to_string(r.clause_index));
    }
  }
  return out;
}

// Pairs of (a, b) in key order; the key sets must be equal.
std::vector<std::pair<Key, std::pair<double, double>>> aligned(
    std::span<const ClauseInfoRecord> a, std::span<const ClauseInfoRecord> b) {
  const auto ka = keyed(a, "first set");
  const auto kb = keyed(b, "second set");
  if (ka.size() != kb.size()) {
    fail(ErrorKind::AlignmentMismatch, std::to_string(ka.size()) + " vs " +
                                           std::to_string(kb.size()) + " records");
  }
  std::vector<std::pair<Key, std::pair<double, double>>> out;
  out.reserve(ka.size());
  auto ib = kb.begin();
  for (const auto& [key, va] : ka) {
    if (ib->first != key) {
      fail(ErrorKind::AlignmentMismatch, "record '" + key.first + "' clause " +
                                             std::to_string(key.second) +
                                             " has no counterpart");
    }
    out.push_back({key, {va, ib->second}});
    ++ib;
  }
  return out;
}

double percent_of(double base, double other, const Key& key) {
  if (base == 0.0) {
    fail(ErrorKind::InvalidArgument, "relative deviation undefined for zero I_M at '" +
                                         key.first + "' clause " + std::to_string(key.second));
  }
  return 100.0 * (other - base) / base;
}

}  // namespace

ConsistencyStats consistency_stats(std::span<const ClauseInfoRecord> im1,
                                   std::span<const ClauseInfoRecord> im2,
                                   double split_bits) {
  std::vector<double> low;
  std::vector<double> high;
  for (const auto& [key, v] : aligned(im1, im2)) {
    if (v.first < split_bits) {
      low.push_back(v.second - v.first);
    } else {
      high.push_back(percent_of(v.first, v.second, key));
    }
  }
  return {deviation_stats(low, DeviationMode::absolute_bits),
          deviation_stats(high, DeviationMode::relative_percent), split_bits};
}

ModelComparisonStats model_comparison_stats(std::span<const ClauseInfoRecord> im_a,
                                            std::span<const ClauseInfoRecord> im_b,
                                            double split_bits,
                                            std::span<const ClauseRef> predictable) {
  const auto pairs = aligned(im_a, im_b);
  std::map<Key, std::pair<double, double>> by_key(pairs.begin(), pairs.end());

  std::vector<double> pred;
  std::set<ClauseRef> seen;
  for (const auto& ref : predictable) {
    if (!seen.insert(ref).second) continue;
    auto it = by_key.find({ref.narrative_id, ref.clause_index});
    if (it == by_key.end()) {
      fail(ErrorKind::AlignmentMismatch, "predictable clause '" + ref.narrative_id +
                                             "' " + std::to_string(ref.clause_index) +
                                             " has no records");
    }
    pred.push_back(it->second.second - it->second.first);
  }
  std::vector<double> low;
  std::vector<double> high;
  for (const auto& [key, v] : pairs) {
    if (v.first < split_bits) {
      low.push_back(v.second - v.first);
    } else if (v.first > split_bits) {
      high.push_back(percent_of(v.first, v.second, key));
    }
  }
  return {deviation_stats(pred, DeviationMode::absolute_bits),
          deviation_stats(low, DeviationMode::absolute_bits),
          deviation_stats(high, DeviationMode::relative_percent), split_bits};
}

std::vector<PositionMean> position_average(std::span<const NarrativeInfoProfile> profiles,
                                           int max_pos) {
  std::size_t longest = 0;
  for (const auto& p : profiles) longest = std::max(longest, p.records.size());
  const std::size_t limit =
      max_pos > 0 ? std::min(longest, static_cast<std::size_t>(max_pos)) : longest;
  std::vector<PositionMean> out;
  for (std::size_t pos = 1; pos <= limit; ++pos) {
    double sum = 0.0;
    int n = 0;
    for (const auto& p : profiles) {
      if (p.records.size() >= pos) {
        sum += p.records[pos - 1].IM_bits;
        ++n;
      }
    }
    out.push_back({static_cast<int>(pos), sum / n, n});
  }
  return out;
}

std::optional<DeviationStats> variant_shift_stats(std::span<const ClauseInfoRecord> base,
                                                  std::span<const ClauseInfoRecord> shifted) {
  std::vector<double> d;
  for (const auto& [key, v] : aligned(base, shifted)) {
    if (key.second > 1) d.push_back(v.second - v.first);
  }
  return deviation_stats(d, DeviationMode::absolute_bits);
}

std::vector<HistogramBin> im_histogram(std::span<const ClauseInfoRecord> records,
                                       double width) {
  if (!(width > 0.0)) fail(ErrorKind::InvalidArgument, "bin width must be > 0");
  std::map<long long, int> counts;
  for (const auto& r : records) {
    ++counts[static_cast<long long>(std::floor(r.IM_bits / width))];
  }
  std::vector<HistogramBin> out;
  if (counts.empty()) return out;
  for (long long k = counts.begin()->first; k <= counts.rbegin()->first; ++k) {
    auto it = counts.find(k);
    out.push_back({static_cast<double>(k) * width, static_cast<double>(k + 1) * width,
                   it == counts.end() ? 0 : it->second});
  }
  return out;
}

std::vector<NarrativeInfoProfile> build_profiles(const CorpusManifest& corpus,
                                                 std::span<const ClauseInfoRecord> records) {
  std::map<std::string, std::vector<ClauseInfoRecord>, std::less<>> grouped;
  for (const auto& r : records) grouped[r.narrative_id].push_back(r);
  std::vector<NarrativeInfoProfile> out;
  for (const auto& n : corpus.narratives) {
    auto it = grouped.find(n.id);
    if (it == grouped.end()) continue;
    auto& rs = it->second;
    std::sort(rs.begin(), rs.end(), [](const auto& a, const auto& b) {
      return a.clause_index < b.clause_index;
    });
    out.push_back(profile(n, rs));
    grouped.erase(it);
  }
  if (!grouped.empty()) {
    fail(ErrorKind::IncompleteRecords,
         "records for narrative '" + grouped.begin()->first + "' not in corpus");
  }
  return out;
}

CorpusSummary corpus_summary(const CorpusManifest& corpus,
                             std::span<const ClauseInfoRecord> records) {
  const auto profiles = build_profiles(corpus, records);
  CorpusSummary s;
  double sum_I = 0.0;
  double sum_IM = 0.0;
  std::size_t chars = 0;
  for (const auto& p : profiles) {
    const Narrative* n = corpus.find(p.narrative_id);
    for (const auto& c : n->clauses) chars += utf8_length(c.text);
    for (const auto& r : p.records) {
      sum_I += r.I_bits;
      sum_IM += r.IM_bits;
    }
    s.clauses += static_cast<int>(p.records.size());
  }
  s.narratives = static_cast<int>(profiles.size());
  if (s.clauses > 0) {
    s.mean_I = sum_I / s.clauses;
    s.mean_IM = sum_IM / s.clauses;
  }
  if (chars > 0) s.bits_per_char = sum_I / static_cast<double>(chars);
  return s;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["corpus_checksum"] = corpus_checksum;
  j["backend_ids"] = backend_ids;
  j["rephrasing_ids"] = rephrasing_ids;
  j["seeds"] = seeds;
  j["prompt_template_hashes"] = prompt_template_hashes;
  j["created_at"] = created_at;
  j["std_convention"] = std_convention;
  j["outputs"] = outputs;
  return j;
}

std::map<std::string, std::string> prompt_template_hashes() {
  auto joined = [](const std::vector<ChatMessage>& msgs) {
    std::string s;
    for (const auto& m : msgs) s += m.role + "\n" + m.content + "\n";
    return s;
  };
  return {
      {"wording", sha256_hex(build_wording_prompt("{rephrased}", "{original}"))},
      {"rephrase", sha256_hex(joined(build_rephrase_prompt("{part}", 1, "{summary}")))},
      {"summary", sha256_hex(joined(build_summary_prompt("{part}")))},
      {"continuation", sha256_hex(joined(build_continuation_prompt("{part}")))},
      {"judgment", sha256_hex(joined(build_judgment_prompt("{part}", "{original}",
                                                           "{proposed}")))},
  };
}

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

csv::Table cumulative_table(std::span<const NarrativeInfoProfile> profiles) {
  csv::Table t;
  t.header = {"narrative_id", "clause_num", "cumulative_I", "cumulative_IM"};
  for (const auto& p : profiles) {
    for (std::size_t i = 0; i < p.records.size(); ++i) {
      t.rows.push_back({p.narrative_id, std::to_string(i + 1),
                        format_double(p.cumulative_I[i]),
                        format_double(p.cumulative_IM[i])});
    }
  }
  return t;
}

csv::Table histogram_table(std::span<const HistogramBin> bins) {
  csv::Table t;
  t.header = {"bin_lo", "bin_hi", "count"};
  for (const auto& b : bins) {
    t.rows.push_back({format_double(b.lo), format_double(b.hi), std::to_string(b.count)});
  }
  return t;
}

csv::Table position_table(std::span<const PositionMean> means) {
  csv::Table t;
  t.header = {"position", "mean_IM", "narratives"};
  for (const auto& m : means) {
    t.rows.push_back({std::to_string(m.position), format_double(m.mean_IM),
                      std::to_string(m.narratives)});
  }
  return t;
}

csv::Table summary_table(std::span<const NarrativeInfoProfile> profiles,
                         const CorpusSummary& total) {
  csv::Table t;
  t.header = {"narrative_id", "clauses", "total_I", "total_IM",
              "mean_I",       "mean_IM", "bits_per_char"};
  for (const auto& p : profiles) {
    const double L = static_cast<double>(p.records.size());
    const double I = p.cumulative_I.empty() ? 0.0 : p.cumulative_I.back();
    const double IM = p.cumulative_IM.empty() ? 0.0 : p.cumulative_IM.back();
    t.rows.push_back({p.narrative_id, std::to_string(p.records.size()), format_double(I),
                      format_double(IM), format_double(I / L), format_double(IM / L),
                      format_double(p.bits_per_char)});
  }
  t.rows.push_back({"*", std::to_string(total.clauses),
                    format_double(total.mean_I * total.clauses),
                    format_double(total.mean_IM * total.clauses), format_double(total.mean_I),
                    format_double(total.mean_IM), format_double(total.bits_per_char)});
  return t;
}

namespace {

void stats_row(csv::Table& t, std::string_view group, const std::optional<DeviationStats>& s,
               double split) {
  if (!s) {
    t.rows.push_back({std::string(group), "", "0", "", "", format_double(split)});
    return;
  }
  t.rows.push_back({std::string(group), std::string(to_string(s->mode)), std::to_string(s->n),
                    format_double(s->mean), format_double(s->std), format_double(split)});
}

}  // namespace

csv::Table consistency_table(const ConsistencyStats& s) {
  csv::Table t;
  t.header = {"group", "mode", "n", "mean", "std", "split_bits"};
  stats_row(t, "low", s.low, s.split_bits);
  stats_row(t, "high", s.high, s.split_bits);
  return t;
}

csv::Table comparison_table(const ModelComparisonStats& s) {
  csv::Table t;
  t.header = {"group", "mode", "n", "mean", "std", "split_bits"};
  stats_row(t, "predictable", s.predictable, s.split_bits);
  stats_row(t, "low", s.low, s.split_bits);
  stats_row(t, "high", s.high, s.split_bits);
  return t;
}

namespace {

constexpr double kW = 640;
constexpr double kH = 400;
constexpr double kPad = 50;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string svg_open(std::string_view title) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kW) +
                  "\" height=\"" + num(kH) + "\" viewBox=\"0 0 " + num(kW) + " " + num(kH) +
                  "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(kW / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"14\">" + std::string(title) + "</text>\n";
  s += "<line x1=\"" + num(kPad) + "\" y1=\"" + num(kH - kPad) + "\" x2=\"" + num(kW - kPad) +
       "\" y2=\"" + num(kH - kPad) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(kPad) + "\" y1=\"" + num(kPad) + "\" x2=\"" + num(kPad) +
       "\" y2=\"" + num(kH - kPad) + "\" stroke=\"black\"/>\n";
  return s;
}

std::string axis_labels(double x0, double x1, double y0, double y1) {
  auto label = [](double x, double y, double v, std::string_view anchor) {
    return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" +
           std::string(anchor) + "\" font-family=\"sans-serif\" font-size=\"10\">" + num(v) +
           "</text>\n";
  };
  return label(kPad, kH - kPad + 14, x0, "middle") +
         label(kW - kPad, kH - kPad + 14, x1, "middle") +
         label(kPad - 4, kH - kPad, y0, "end") + label(kPad - 4, kPad + 4, y1, "end");
}

struct Scale {
  double lo, hi, out_lo, out_hi;
  double operator()(double v) const {
    if (hi == lo) return (out_lo + out_hi) / 2;
    return out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo);
  }
};

}  // namespace

std::string histogram_svg(std::span<const HistogramBin> bins, double mean) {
  std::string s = svg_open("Semantic information per clause");
  if (!bins.empty()) {
    int top = 1;
    for (const auto& b : bins) top = std::max(top, b.count);
    const Scale x{bins.front().lo, bins.back().hi, kPad, kW - kPad};
    const Scale y{0, static_cast<double>(top), kH - kPad, kPad};
    for (const auto& b : bins) {
      if (b.count == 0) continue;
      s += "<rect x=\"" + num(x(b.lo)) + "\" y=\"" + num(y(b.count)) + "\" width=\"" +
           num(x(b.hi) - x(b.lo)) + "\" height=\"" + num(y(0) - y(b.count)) +
           "\" fill=\"steelblue\" stroke=\"white\" stroke-width=\"0.5\"/>\n";
    }
    s += "<line x1=\"" + num(x(mean)) + "\" y1=\"" + num(kPad) + "\" x2=\"" + num(x(mean)) +
         "\" y2=\"" + num(kH - kPad) + "\" stroke=\"black\" stroke-dasharray=\"6 4\"/>\n";
    s += axis_labels(x.lo, x.hi, 0, top);
  }
  return s + "</svg>\n";
}

std::string position_svg(std::span<const PositionMean> means) {
  std::string s = svg_open("Mean semantic information by clause position");
  if (!means.empty()) {
    double lo = 0.0;
    double hi = 1.0;
    for (const auto& m : means) {
      lo = std::min(lo, m.mean_IM);
      hi = std::max(hi, m.mean_IM);
    }
    const Scale x{1, static_cast<double>(means.back().position), kPad, kW - kPad};
    const Scale y{lo, hi, kH - kPad, kPad};
    s += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < means.size(); ++i) {
      if (i) s += ' ';
      s += num(x(means[i].position)) + "," + num(y(means[i].mean_IM));
    }
    s += "\"/>\n";
    s += axis_labels(x.lo, x.hi, lo, hi);
  }
  return s + "</svg>\n";
}

std::string cumulative_svg(std::span<const NarrativeInfoProfile> profiles) {
  std::string s = svg_open("Cumulative information");
  std::size_t longest = 0;
  double hi = 1.0;
  double lo = 0.0;
  for (const auto& p : profiles) {
    longest = std::max(longest, p.records.size());
    for (double v : p.cumulative_I) hi = std::max(hi, v);
    for (double v : p.cumulative_IM) lo = std::min(lo, v);
  }
  if (longest > 0) {
    const Scale x{0, static_cast<double>(longest), kPad, kW - kPad};
    const Scale y{lo, hi, kH - kPad, kPad};
    auto line = [&](const std::vector<double>& v, std::string_view colour) {
      std::string pts = num(x(0)) + "," + num(y(0));
      for (std::size_t i = 0; i < v.size(); ++i) {
        pts += " " + num(x(static_cast<double>(i + 1))) + "," + num(y(v[i]));
      }
      return "<polyline fill=\"none\" stroke=\"" + std::string(colour) +
             "\" stroke-opacity=\"0.6\" points=\"" + pts + "\"/>\n";
    };
    for (const auto& p : profiles) {
      s += line(p.cumulative_I, "grey");
      s += line(p.cumulative_IM, "steelblue");
    }
    s += axis_labels(0, static_cast<double>(longest), lo, hi);
  }
  return s + "</svg>\n";
}

std::vector<std::filesystem::path> emit_outputs(const ReportInputs& in,
                                                const std::filesystem::path& out_dir) {
  std::vector<std::filesystem::path> written;
  if (in.records.empty()) {
    std::clog << "warning: no records to report; nothing written\n";
    return written;
  }
  RunManifest manifest = in.manifest;
  auto put = [&](const std::string& name, const std::string& content) {
    const auto path = out_dir / name;
    write_file_atomic(path, content);
    manifest.outputs[name] = sha256_hex(content);
    written.push_back(path);
  };

  const auto profiles = build_profiles(in.corpus, in.records);
  const auto summary = corpus_summary(in.corpus, in.records);
  const auto hist = im_histogram(in.records, in.histogram_width);
  const auto positions = position_average(profiles, in.max_position);

  put("semantic_information.csv", records_csv(in.records));
  put("cumulative.csv", csv::format(cumulative_table(profiles)));
  put("histogram.csv", csv::format(histogram_table(hist)));
  put("position_average.csv", csv::format(position_table(positions)));
  put("summary.csv", csv::format(summary_table(profiles, summary)));
  if (in.second_rephrasing) {
    put("consistency.csv",
        csv::format(consistency_table(
            consistency_stats(in.records, *in.second_rephrasing, in.consistency_split))));
  }
  if (in.comparison) {
    put("model_comparison.csv",
        csv::format(comparison_table(model_comparison_stats(
            in.records, *in.comparison, in.comparison_split, in.predictable))));
  }
  if (in.plots) {
    put("histogram.svg", histogram_svg(hist, summary.mean_IM));
    put("position_average.svg", position_svg(positions));
    put("cumulative.svg", cumulative_svg(profiles));
  }
  if (manifest.created_at.empty()) manifest.created_at = utc_timestamp();
  if (manifest.prompt_template_hashes.empty()) {
    manifest.prompt_template_hashes = prompt_template_hashes();
  }
  const auto path = out_dir / "manifest.json";
  write_file_atomic(path, manifest.to_json().dump(2) + "\n");
  written.push_back(path);
  return written;
}

}  // namespace narrinfo
