// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "narrinfo/corpus.hpp"
#include "narrinfo/error.hpp"
#include "narrinfo/rephrase.hpp"
#include "paths.hpp"
#include "scripted_backend.hpp"

namespace narrinfo {
namespace {

using testing::data_path;
using testing::ScriptedGenerator;

std::vector<std::string> numbered_clauses(int n, std::string_view stem) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back(std::string(stem) + " " + std::to_string(i));
  return out;
}

std::string numbered_reply(std::span<const std::string> clauses) {
  return canonical_text(clauses, TextStyle::numbered).text;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvalidArgument;
}

TEST(PlanChunks, ShortNarrativeIsOnePart) {
  const auto p = plan_chunks(19, 50);
  ASSERT_EQ(p.parts.size(), 1u);
  EXPECT_EQ(p.parts[0], (ChunkPart{1, 19}));
}

TEST(PlanChunks, ExactLimitIsOnePart) {
  const auto p = plan_chunks(50, 50);
  ASSERT_EQ(p.parts.size(), 1u);
  EXPECT_EQ(p.parts[0], (ChunkPart{1, 50}));
}

TEST(PlanChunks, EvenSplit) {
  const auto p = plan_chunks(130, 50);
  ASSERT_EQ(p.parts.size(), 3u);
  EXPECT_EQ(p.parts[0], (ChunkPart{1, 44}));
  EXPECT_EQ(p.parts[1], (ChunkPart{45, 87}));
  EXPECT_EQ(p.parts[2], (ChunkPart{88, 130}));
}

TEST(PlanChunks, PropertiesOverRange) {
  for (int L = 1; L <= 300; ++L) {
    for (int lc : {1, 7, 25, 50}) {
      const auto p = plan_chunks(L, lc);
      EXPECT_EQ(static_cast<int>(p.parts.size()), (L + lc - 1) / lc);
      int next = 1;
      int lo = L;
      int hi = 0;
      for (const auto& part : p.parts) {
        EXPECT_EQ(part.start, next);
        EXPECT_LE(part.size(), lc);
        lo = std::min(lo, part.size());
        hi = std::max(hi, part.size());
        next = part.end + 1;
      }
      EXPECT_EQ(next, L + 1);
      EXPECT_LE(hi - lo, 1);
    }
  }
}

TEST(PlanChunks, RejectsBadArguments) {
  EXPECT_EQ(kind_of([] { plan_chunks(0, 50); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { plan_chunks(5, 0); }), ErrorKind::InvalidArgument);
}

TEST(ParseNumbered, AcceptsFencesAndBlankLines) {
  const auto c = parse_numbered_clauses("'''\n1. one\n\n2.  two \n'''");
  EXPECT_EQ(c, (std::vector<std::string>{"one", "two"}));
  EXPECT_EQ(parse_numbered_clauses("```\n1. a\n2. b\n```"), (std::vector<std::string>{"a", "b"}));
}

TEST(ParseNumbered, RejectsGapsAndProse) {
  EXPECT_EQ(kind_of([] { parse_numbered_clauses("1. a\n3. c"); }),
            ErrorKind::UnparseableNumbering);
  EXPECT_EQ(kind_of([] { parse_numbered_clauses("Here you go:\n1. a"); }),
            ErrorKind::UnparseableNumbering);
  EXPECT_EQ(kind_of([] { parse_numbered_clauses("1.   "); }), ErrorKind::UnparseableNumbering);
  EXPECT_EQ(kind_of([] { parse_numbered_clauses(""); }), ErrorKind::UnparseableNumbering);
}

TEST(Rephrase, BoyScoutSinglePart) {
  const auto corpus = load_corpus(data_path("boyscout.csv"));
  const auto r1 = load_corpus(data_path("boyscout_r1.csv"));
  const ScriptedGenerator gen({numbered_reply(r1.narratives[0].clause_texts())});
  const auto b = generate_rephrasing(corpus.narratives[0], gen);
  ASSERT_EQ(b.clauses.size(), 19u);
  EXPECT_EQ(b.clauses[11], "They abandoned me.");
  EXPECT_TRUE(b.validated);
  EXPECT_EQ(b.rephrasing_id, "r1");
  EXPECT_EQ(b.generator_model, "scripted");
  EXPECT_EQ(b.chunk_plan, (std::vector<ChunkRecord>{{1, 19, false}}));
  const auto reqs = gen.requests();
  ASSERT_EQ(reqs.size(), 1u);
  ASSERT_EQ(reqs[0].size(), 2u);
  EXPECT_EQ(reqs[0][0].role, "system");
  EXPECT_EQ(reqs[0][1].content.find("Summarized Narrative so far"), std::string::npos);
}

TEST(Rephrase, RetriesWithSmallerChunks) {
  const auto src = numbered_clauses(30, "clause");
  const auto n = make_narrative("long", src);
  const auto para = numbered_clauses(30, "para");
  const std::span<const std::string> p(para);
  const ScriptedGenerator gen({numbered_reply(p.first(29)), numbered_reply(p.first(15)),
                               "The first half happened.", numbered_reply(p.subspan(15))});
  const auto b = generate_rephrasing(n, gen);
  EXPECT_EQ(b.clauses, para);
  EXPECT_EQ(b.chunk_plan, (std::vector<ChunkRecord>{{1, 15, false}, {16, 30, true}}));
  const auto reqs = gen.requests();
  ASSERT_EQ(reqs.size(), 4u);
  EXPECT_NE(reqs[3][1].content.find(
                "Summarized Narrative so far: '''The first half happened.'''\n"),
            std::string::npos);
  EXPECT_NE(reqs[3][1].content.find("numbered from 1 to 15."), std::string::npos);
  EXPECT_NE(reqs[3][1].content.find("'''1. clause 16\n"), std::string::npos);
}

TEST(Rephrase, FailsWhenRetryAlsoMiscounts) {
  const auto n = make_narrative("short", numbered_clauses(3, "c"));
  const auto two = numbered_reply(numbered_clauses(2, "p"));
  const ScriptedGenerator gen({two, two});
  EXPECT_EQ(kind_of([&] { generate_rephrasing(n, gen); }), ErrorKind::ClauseCountMismatch);
}

TEST(Rephrase, UnparseableReplyPropagates) {
  const auto n = make_narrative("short", numbered_clauses(2, "c"));
  const ScriptedGenerator gen({"I cannot do that."});
  EXPECT_EQ(kind_of([&] { generate_rephrasing(n, gen); }), ErrorKind::UnparseableNumbering);
}

TEST(Rephrase, SecondRephrasingStartsFromFirst) {
  const auto n = make_narrative("n", numbered_clauses(3, "orig"));
  const auto p1 = numbered_clauses(3, "first");
  const auto p2 = numbered_clauses(3, "second");
  const ScriptedGenerator gen({numbered_reply(p1), numbered_reply(p2)});
  const auto r1 = generate_rephrasing(n, gen);
  const auto r2 = second_rephrasing(r1, gen);
  EXPECT_EQ(r2.rephrasing_id, "r2");
  EXPECT_EQ(r2.clauses, p2);
  EXPECT_NE(gen.requests()[1][1].content.find("1. first 1\n2. first 2"), std::string::npos);

  RephrasingBundle raw = r1;
  raw.validated = false;
  EXPECT_EQ(kind_of([&] { second_rephrasing(raw, gen); }), ErrorKind::InvalidArgument);
}

TEST(Rephrase, ValidateBundle) {
  const auto n = make_narrative("n", numbered_clauses(2, "c"));
  RephrasingBundle b{"n", "r1", {"a", "b"}, {}, "", false};
  validate_bundle(b, n);
  EXPECT_TRUE(b.validated);
  RephrasingBundle short_b{"n", "r1", {"a"}, {}, "", false};
  EXPECT_EQ(kind_of([&] { validate_bundle(short_b, n); }), ErrorKind::ClauseCountMismatch);
  RephrasingBundle blank{"n", "r1", {"a", "  "}, {}, "", false};
  EXPECT_EQ(kind_of([&] { validate_bundle(blank, n); }), ErrorKind::EmptyClauseText);
}

TEST(Rephrase, PromptSummaryLine) {
  const auto with = build_rephrase_prompt("1. x", 1, std::string_view("S"));
  EXPECT_NE(with[1].content.find("Summarized Narrative so far: '''S'''\nPart to paraphrase"),
            std::string::npos);
  const auto without = build_rephrase_prompt("1. x", 1);
  EXPECT_EQ(without[1].content.find("Summarized"), std::string::npos);
  EXPECT_EQ(kind_of([] { build_rephrase_prompt("  ", 1); }), ErrorKind::EmptyPart);
}

TEST(Rephrase, WriteAndLoadRoundTrip) {
  const auto corpus = load_corpus(data_path("boyscout.csv"));
  const auto bundles = load_rephrasings(data_path("boyscout_r1.csv"), "r1", corpus);
  testing::TempDir dir;
  write_rephrasings(dir.path() / "r.csv", bundles);
  const auto again = load_rephrasings(dir.path() / "r.csv", "r1", corpus);
  ASSERT_EQ(again.size(), 1u);
  EXPECT_EQ(again[0].clauses, bundles[0].clauses);
}

}  // namespace
}  // namespace narrinfo
