// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "narrinfo/corpus.hpp"
#include "narrinfo/csv.hpp"
#include "narrinfo/error.hpp"
#include "narrinfo/report.hpp"
#include "paths.hpp"
#include "report_fixtures.hpp"

namespace narrinfo {
namespace {

using testing::im_records;

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvalidArgument;
}

TEST(Deviation, Basics) {
  EXPECT_FALSE(deviation_stats({}, DeviationMode::absolute_bits));
  const std::vector<double> one = {3.0};
  const auto s = deviation_stats(one, DeviationMode::absolute_bits);
  EXPECT_EQ(s->n, 1);
  EXPECT_EQ(s->mean, 3.0);
  EXPECT_EQ(s->std, 0.0);
}

TEST(Consistency, TwoClauseExample) {
  const auto s = consistency_stats(im_records({10, 20}), im_records({9, 22}), 12.0);
  ASSERT_TRUE(s.low && s.high);
  EXPECT_EQ(s.low->n, 1);
  EXPECT_DOUBLE_EQ(s.low->mean, -1.0);
  EXPECT_EQ(s.low->mode, DeviationMode::absolute_bits);
  EXPECT_EQ(s.high->n, 1);
  EXPECT_DOUBLE_EQ(s.high->mean, 10.0);
  EXPECT_EQ(s.high->mode, DeviationMode::relative_percent);
}

TEST(Consistency, IdenticalInputs) {
  const auto r = im_records({1, 5, 13, 40});
  const auto s = consistency_stats(r, r);
  EXPECT_EQ(s.low->mean, 0.0);
  EXPECT_EQ(s.low->std, 0.0);
  EXPECT_EQ(s.high->mean, 0.0);
  EXPECT_EQ(s.high->std, 0.0);
}

TEST(Consistency, TenRowFixture) {
  const testing::ConsistencyFixture f;
  const auto s = consistency_stats(im_records(f.im1), im_records(f.im2), f.split);
  EXPECT_EQ(s.low->n, 5);
  EXPECT_NEAR(s.low->mean, f.low_mean, 1e-12);
  EXPECT_NEAR(s.low->std, f.low_std, 1e-12);
  EXPECT_EQ(s.high->n, 5);
  EXPECT_NEAR(s.high->mean, f.high_mean, 1e-12);
  EXPECT_NEAR(s.high->std, f.high_std, 1e-12);
}

TEST(Consistency, OrderInvariant) {
  const testing::ConsistencyFixture f;
  auto a = im_records(f.im1);
  auto b = im_records(f.im2);
  const auto s1 = consistency_stats(a, b, f.split);
  std::mt19937_64 rng(4);
  std::shuffle(a.begin(), a.end(), rng);
  std::shuffle(b.begin(), b.end(), rng);
  const auto s2 = consistency_stats(a, b, f.split);
  EXPECT_EQ(s1.low->mean, s2.low->mean);
  EXPECT_EQ(s1.high->std, s2.high->std);
}

TEST(Consistency, Mismatches) {
  EXPECT_EQ(kind_of([] { consistency_stats(im_records({1, 2}), im_records({1})); }),
            ErrorKind::AlignmentMismatch);
  EXPECT_EQ(kind_of([] { consistency_stats(im_records({1}), im_records({1}, "other")); }),
            ErrorKind::AlignmentMismatch);
  auto dup = im_records({1, 2});
  dup[1].clause_index = 1;
  EXPECT_EQ(kind_of([&] { consistency_stats(dup, dup); }), ErrorKind::AlignmentMismatch);
  EXPECT_FALSE(consistency_stats(im_records({20}), im_records({21})).low);
}

TEST(Comparison, TenRowFixture) {
  const testing::ComparisonFixture f;
  const auto s =
      model_comparison_stats(im_records(f.a), im_records(f.b), f.split, f.predictable);
  EXPECT_EQ(s.low->n, f.low_n);
  EXPECT_NEAR(s.low->mean, f.low_mean, 1e-12);
  EXPECT_NEAR(s.low->std, f.low_std, 1e-12);
  EXPECT_EQ(s.high->n, f.high_n);
  EXPECT_NEAR(s.high->mean, f.high_mean, 1e-12);
  EXPECT_NEAR(s.high->std, f.high_std, 1e-12);
  EXPECT_EQ(s.predictable->n, 3);
  EXPECT_NEAR(s.predictable->mean, f.predictable_mean, 1e-12);
  EXPECT_NEAR(s.predictable->std, f.predictable_std, 1e-12);
}

TEST(Comparison, UnknownPredictableClause) {
  const std::vector<ClauseRef> pred = {{"h", 9}};
  EXPECT_EQ(kind_of([&] {
              model_comparison_stats(im_records({1}), im_records({1}), 14.0, pred);
            }),
            ErrorKind::AlignmentMismatch);
}

CorpusManifest corpus_of(const std::vector<std::pair<std::string, int>>& shape) {
  CorpusManifest c;
  for (const auto& [id, len] : shape) {
    std::vector<std::string> clauses;
    for (int i = 0; i < len; ++i) clauses.push_back("w" + std::to_string(i));
    c.narratives.push_back(make_narrative(id, clauses));
  }
  return c;
}

TEST(Position, SingleNarrativeIsIdentity) {
  const auto corpus = corpus_of({{"h", 4}});
  const auto rs = im_records({3, -1, 2.5, 7});
  const auto profiles = build_profiles(corpus, rs);
  const auto pos = position_average(profiles);
  ASSERT_EQ(pos.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(pos[i].position, static_cast<int>(i + 1));
    EXPECT_EQ(pos[i].mean_IM, rs[i].IM_bits);
    EXPECT_EQ(pos[i].narratives, 1);
  }
  EXPECT_EQ(position_average(profiles, 2).size(), 2u);
}

TEST(Position, UnevenLengths) {
  const auto corpus = corpus_of({{"a", 3}, {"b", 1}});
  auto rs = im_records({1, 2, 3}, "a");
  const auto rb = im_records({5}, "b");
  rs.insert(rs.end(), rb.begin(), rb.end());
  const auto pos = position_average(build_profiles(corpus, rs));
  ASSERT_EQ(pos.size(), 3u);
  EXPECT_EQ(pos[0].mean_IM, 3.0);
  EXPECT_EQ(pos[0].narratives, 2);
  EXPECT_EQ(pos[2].narratives, 1);
}

TEST(Histogram, ContiguousBins) {
  const auto h = im_histogram(im_records({-0.5, 0.2, 0.7, 3.1}), 1.0);
  ASSERT_EQ(h.size(), 5u);
  EXPECT_EQ(h[0].lo, -1.0);
  EXPECT_EQ(h[0].count, 1);
  EXPECT_EQ(h[1].count, 2);
  EXPECT_EQ(h[2].count, 0);
  EXPECT_EQ(h[4].count, 1);
  EXPECT_EQ(h[4].hi, 4.0);
  EXPECT_TRUE(im_histogram({}, 1.0).empty());
  EXPECT_EQ(kind_of([] { im_histogram({}, 0.0); }), ErrorKind::InvalidArgument);
}

TEST(VariantShift, SkipsFirstClause) {
  const auto s = variant_shift_stats(im_records({10, 1, 2}), im_records({2, 2, 4}));
  EXPECT_EQ(s->n, 2);
  EXPECT_DOUBLE_EQ(s->mean, 1.5);
}

TEST(Summary, Totals) {
  const auto corpus = corpus_of({{"a", 2}, {"b", 1}});
  auto rs = im_records({1, 2}, "a");
  const auto rb = im_records({3}, "b");
  rs.insert(rs.end(), rb.begin(), rb.end());
  const auto s = corpus_summary(corpus, rs);
  EXPECT_EQ(s.narratives, 2);
  EXPECT_EQ(s.clauses, 3);
  EXPECT_DOUBLE_EQ(s.mean_IM, 2.0);
  EXPECT_DOUBLE_EQ(s.mean_I, 12.0);
  EXPECT_DOUBLE_EQ(s.bits_per_char, 36.0 / 6.0);
  const auto stray = im_records({1}, "zzz");
  EXPECT_EQ(kind_of([&] { build_profiles(corpus, stray); }), ErrorKind::IncompleteRecords);
}

ReportInputs sample_inputs() {
  ReportInputs in;
  in.corpus = corpus_of({{"h", 10}});
  const testing::ConsistencyFixture f;
  in.records = im_records(f.im1);
  in.second_rephrasing = im_records(f.im2);
  in.comparison = im_records(f.im2);
  in.predictable = {{"h", 2}};
  in.manifest.created_at = "2026-01-01T00:00:00Z";
  in.manifest.backend_ids = {"b"};
  return in;
}

TEST(Emit, TablesRoundTrip) {
  const auto in = sample_inputs();
  testing::TempDir dir;
  const auto written = emit_outputs(in, dir.path());
  EXPECT_EQ(written.size(), 11u);
  const auto profiles = build_profiles(in.corpus, in.records);
  auto same = [&](const std::string& name, const csv::Table& expect) {
    const auto got = csv::read(dir.path() / name);
    EXPECT_EQ(got.header, expect.header) << name;
    EXPECT_EQ(got.rows, expect.rows) << name;
  };
  same("cumulative.csv", cumulative_table(profiles));
  same("histogram.csv", histogram_table(im_histogram(in.records, 1.0)));
  same("position_average.csv", position_table(position_average(profiles)));
  same("summary.csv", summary_table(profiles, corpus_summary(in.corpus, in.records)));
  same("consistency.csv",
       consistency_table(consistency_stats(in.records, *in.second_rephrasing, 12.0)));
  EXPECT_EQ(read_records(dir.path() / "semantic_information.csv"), in.records);

  const auto manifest = nlohmann::json::parse(read_file(dir.path() / "manifest.json"));
  EXPECT_EQ(manifest["std_convention"], "sample (n-1)");
  EXPECT_EQ(manifest["outputs"]["histogram.csv"],
            sha256_hex(read_file(dir.path() / "histogram.csv")));
  EXPECT_EQ(manifest["prompt_template_hashes"].size(), 5u);
}

TEST(Emit, Deterministic) {
  const auto in = sample_inputs();
  testing::TempDir a;
  testing::TempDir b;
  emit_outputs(in, a.path());
  emit_outputs(in, b.path());
  for (const auto* name : {"cumulative.csv", "summary.csv", "histogram.svg",
                           "position_average.svg", "cumulative.svg", "manifest.json"}) {
    EXPECT_EQ(read_file(a.path() / name), read_file(b.path() / name)) << name;
  }
}

TEST(Emit, NoPlotsAndEmpty) {
  auto in = sample_inputs();
  in.plots = false;
  in.second_rephrasing.reset();
  in.comparison.reset();
  testing::TempDir dir;
  EXPECT_EQ(emit_outputs(in, dir.path()).size(), 6u);
  EXPECT_FALSE(std::filesystem::exists(dir.path() / "histogram.svg"));
  in.records.clear();
  testing::TempDir empty;
  EXPECT_TRUE(emit_outputs(in, empty.path()).empty());
  EXPECT_TRUE(std::filesystem::is_empty(empty.path()));
}

TEST(Emit, SvgIsWellFormedText) {
  const auto svg = histogram_svg(im_histogram(im_records({1, 2, 2.5}), 1.0), 1.8);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(std::count(svg.begin(), svg.end(), '<'), std::count(svg.begin(), svg.end(), '>'));
}

}  // namespace
}  // namespace narrinfo
