// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "narrinfo/corpus.hpp"
#include "narrinfo/error.hpp"
#include "paths.hpp"

namespace narrinfo {
namespace {

using testing::data_path;

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Io;
}

TEST(Corpus, BoyScoutHasNineteenClauses) {
  const auto corpus = load_corpus(data_path("boyscout.csv"));
  ASSERT_EQ(corpus.narratives.size(), 1u);
  EXPECT_EQ(corpus.narratives[0].length(), 19u);
  EXPECT_EQ(corpus.narratives[0].title, "Boy scout");
  EXPECT_EQ(corpus.checksum.size(), 64u);
}

TEST(Corpus, SingleClauseSpanCoversText) {
  const auto c = parse_corpus("narrative_id,clause_num,text\nn1,1,yes.\n");
  const auto& n = c.narratives.at(0);
  EXPECT_EQ(n.length(), 1u);
  const auto canon = canonical_text(n, TextStyle::plain);
  EXPECT_EQ(canon.text, "yes.");
  ASSERT_EQ(canon.spans.size(), 1u);
  EXPECT_EQ(canon.spans[0], (ByteSpan{0, 4}));
}

TEST(Corpus, NonContiguousNumbersRejected) {
  EXPECT_EQ(kind_of([] {
              parse_corpus("narrative_id,clause_num,text\nn,1,a\nn,2,b\nn,4,c\n");
            }),
            ErrorKind::NonContiguousClauseNumbers);
}

TEST(Corpus, SplitNarrativeBlockRejected) {
  EXPECT_EQ(kind_of([] {
              parse_corpus("narrative_id,clause_num,text\nn,1,a\nm,1,b\nn,2,c\n");
            }),
            ErrorKind::DuplicateNarrativeId);
}

TEST(Corpus, BlankClauseRejected) {
  EXPECT_EQ(kind_of([] { parse_corpus("narrative_id,clause_num,text\nn,1,\"  \"\n"); }),
            ErrorKind::EmptyClauseText);
}

TEST(Corpus, MissingColumnRejected) {
  EXPECT_EQ(kind_of([] { parse_corpus("narrative_id,text\nn,a\n"); }),
            ErrorKind::MissingColumn);
}

TEST(Corpus, PlainCanonicalTextOfBoyScout) {
  const auto corpus = load_corpus(data_path("boyscout.csv"));
  const auto canon = canonical_text(corpus.narratives[0], TextStyle::plain);
  const std::string first = "Yeah I was in the boy scouts at the time.";
  EXPECT_EQ(canon.text.substr(0, first.size()), first);
  EXPECT_EQ(canon.spans[0], (ByteSpan{0, first.size()}));
  for (std::size_t i = 0; i < canon.spans.size(); ++i) {
    const auto& sp = canon.spans[i];
    EXPECT_EQ(canon.text.substr(sp.begin, sp.size()), corpus.narratives[0].clauses[i].text);
    if (i > 0) {
      EXPECT_EQ(canon.text.substr(canon.spans[i - 1].end, 1), " ");
    }
  }
}

TEST(Corpus, NumberedCanonicalTextLineTwo) {
  const auto corpus = load_corpus(data_path("boyscout.csv"));
  const auto canon = canonical_text(corpus.narratives[0], TextStyle::numbered);
  const auto nl = canon.text.find('\n');
  const std::string line2 = canon.text.substr(nl + 1, canon.text.find('\n', nl + 1) - nl - 1);
  EXPECT_EQ(line2.rfind("2. And we was doing the 50-yard dash", 0), 0u);
  EXPECT_EQ(canon.text.substr(canon.spans[1].begin, canon.spans[1].size()),
            "And we was doing the 50-yard dash");
}

TEST(Corpus, InitialContextWithQuestion) {
  const auto corpus = load_corpus(data_path("boyscout.csv"));
  const auto n = attach_initial_context(corpus.narratives[0], questions::kDangerOfDeath);
  ASSERT_TRUE(n.initial_context);
  EXPECT_NE(n.initial_context->find("serious danger of being killed?"), std::string::npos);
  EXPECT_EQ(n.initial_context->rfind("Interviewer: ", 0), 0u);
  EXPECT_EQ(scoring_prefix(n), *n.initial_context + " ");
}

TEST(Corpus, InitialContextKeepsPreamble) {
  const auto n0 = make_narrative("laidlaw", std::vector<std::string>{"a clause"});
  const auto n = attach_initial_context(n0, questions::kSomeoneInDanger,
                                        "No, but it happened to my mother.");
  const std::string tail = "Interviewee: No, but it happened to my mother.";
  ASSERT_TRUE(n.initial_context);
  EXPECT_EQ(n.initial_context->substr(n.initial_context->size() - tail.size()), tail);
}

TEST(Corpus, EmptyContextRejected) {
  const auto n0 = make_narrative("x", std::vector<std::string>{"a"});
  EXPECT_EQ(kind_of([&] { attach_initial_context(n0, ""); }), ErrorKind::EmptyContext);
}

TEST(Corpus, CsvRoundTrip) {
  const auto corpus = load_corpus(data_path("ci.csv"));
  const auto again = parse_corpus(corpus_csv(corpus.narratives));
  ASSERT_EQ(again.narratives.size(), 1u);
  EXPECT_EQ(again.narratives[0].clause_texts(), corpus.narratives[0].clause_texts());
  EXPECT_EQ(again.narratives[0].title, corpus.narratives[0].title);
}

}  // namespace
}  // namespace narrinfo
