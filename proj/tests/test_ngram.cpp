// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "narrinfo/error.hpp"
#include "narrinfo/ngram.hpp"
#include "ngram_oracle.hpp"

namespace narrinfo {
namespace {

constexpr std::string_view kAlphabet27 = "abcdefghijklmnopqrstuvwxyz ";

std::string random_string(std::mt19937_64& rng, std::string_view alphabet, std::size_t n) {
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += alphabet[pick(rng)];
  return s;
}

TEST(Ngram, HandCountedBigram) {
  const auto m = NgramModel::train("aaaa", 1, 1.0, "b");
  EXPECT_EQ(m.count(U"a", U'a'), 3u);
  EXPECT_DOUBLE_EQ(m.probability(U"a", U'a'), 0.8);
  EXPECT_DOUBLE_EQ(m.probability(U"a", U'b'), 0.2);
}

TEST(Ngram, UniformAlphabetScoresLog27) {
  const NgramBackend b(NgramModel::uniform(kAlphabet27));
  const auto s = b.score("abc");
  ASSERT_EQ(s.tokens.size(), 3u);
  for (const auto& t : s.tokens) EXPECT_NEAR(t.info_bits, std::log2(27.0), 1e-12);
  EXPECT_NEAR(s.total_bits, 3 * std::log2(27.0), 1e-12);
}

TEST(Ngram, ContinuationWithEmptyContext) {
  const NgramBackend b(NgramModel::uniform(kAlphabet27));
  const auto s = b.score_continuation("", "abc");
  ASSERT_EQ(s.tokens.size(), 3u);
  for (const auto& t : s.tokens) EXPECT_NEAR(t.info_bits, 4.755, 1e-3);
}

TEST(Ngram, ConditionalsNormalise) {
  std::mt19937_64 rng(3);
  const std::string text = random_string(rng, "abcde ", 300);
  const auto m = NgramModel::train(text, 2, 0.5);
  const auto chars = utf8_decode(text);
  for (std::size_t i = 2; i < chars.size(); ++i) {
    const auto ctx = chars.substr(i - 2, 2);
    double sum = 0.0;
    for (char32_t c : m.alphabet()) sum += m.probability(ctx, c);
    ASSERT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(Ngram, OrderBeyondTextLengthIsUniform) {
  const auto m = NgramModel::train("abc", 5, 1.0);
  EXPECT_DOUBLE_EQ(m.probability(U"abcab", U'c'), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.probability(U"", U'a'), 1.0 / 3.0);
}

TEST(Ngram, TrainingErrors) {
  EXPECT_THROW(NgramModel::train("", 3, 1.0), Error);
  EXPECT_THROW(NgramModel::train("ab", 0, 1.0), Error);
  EXPECT_THROW(NgramModel::train("ab", 1, 0.0), Error);
  const NgramBackend b(NgramModel::train("ab", 1, 1.0));
  try {
    b.score("abz");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutOfAlphabet);
  }
}

TEST(Ngram, MatchesBruteForceProduct) {
  std::mt19937_64 rng(11);
  const std::string alphabet = "abcdefgh .";
  const std::string training = random_string(rng, alphabet, 200);
  const NgramBackend b(NgramModel::train(training, 3, 1.0));
  const testing::BruteForceNgram oracle(training, 3, 1.0);
  for (int i = 0; i < 60; ++i) {
    const std::string text = random_string(rng, alphabet, 10);
    EXPECT_NEAR(b.score(text).total_bits, oracle.bits("", text), 1e-9) << text;
  }
}

TEST(Ngram, ContinuationMatchesBruteForceConditional) {
  std::mt19937_64 rng(12);
  const std::string alphabet = "abcd xy";
  const std::string training = random_string(rng, alphabet, 250);
  const NgramBackend b(NgramModel::train(training, 3, 1.0));
  const testing::BruteForceNgram oracle(training, 3, 1.0);
  for (int i = 0; i < 60; ++i) {
    const std::string ctx = random_string(rng, alphabet, 1 + i % 9);
    const std::string cont = random_string(rng, "abcdxy", 1 + i % 7);
    const auto s = b.score_continuation(ctx, cont);
    EXPECT_EQ(s.text, cont);
    EXPECT_NEAR(s.total_bits, oracle.bits(ctx, cont), 1e-9);
    // Chain rule: score(ctx + cont) = score(ctx) + score_continuation(ctx, cont).
    EXPECT_NEAR(b.score(ctx + cont).total_bits, b.score(ctx).total_bits + s.total_bits, 1e-9);
  }
}

TEST(Ngram, MultibyteCodepointsAreSingleTokens) {
  const NgramBackend b(NgramModel::train("a–b–a", 1, 1.0));
  const auto s = b.score("–a");
  ASSERT_EQ(s.tokens.size(), 2u);
  EXPECT_EQ(s.tokens[0].text, "–");
  EXPECT_EQ(s.tokens[0].bytes, (ByteSpan{0, 3}));
  check_coverage(s);
}

TEST(Ngram, IdentifierReflectsTraining) {
  const NgramBackend a(NgramModel::train("abc", 3, 1.0));
  const NgramBackend b(NgramModel::train("abd", 3, 1.0));
  EXPECT_NE(a.id(), b.id());
  EXPECT_EQ(a.id().rfind("ngram-o3-a1-", 0), 0u);
}

TEST(Ngram, GenerationIsUnsupported) {
  const NgramBackend b(NgramModel::train("abc", 1, 1.0));
  const std::vector<ChatMessage> msgs = {{"user", "hi"}};
  try {
    b.generate(msgs, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedBackend);
  }
}

}  // namespace
}  // namespace narrinfo
