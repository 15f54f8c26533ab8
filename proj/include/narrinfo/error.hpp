// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace narrinfo {

enum class ErrorKind {
  // corpus
  MissingColumn,
  NonContiguousClauseNumbers,
  EmptyClauseText,
  DuplicateNarrativeId,
  EmptyContext,
  CsvParse,
  // lm_backend
  ContextOverflow,
  EndpointError,
  TokenCoverageMismatch,
  UnsupportedBackend,
  EmptyTraining,
  OutOfAlphabet,
  // align
  TextMismatch,
  EmptyClauseTokens,
  RangeOutOfBounds,
  // infocalc
  EmptyInput,
  ClauseCountMismatch,
  LengthMismatch,
  IncompleteRecords,
  // rephrase
  EmptyPart,
  UnparseableNumbering,
  // predictability
  EmptyRecords,
  EmptyPrefix,
  FormatNotFound,
  VerdictNotFound,
  SchemaError,
  // synthworld
  UnknownSymbol,
  ZeroProbability,
  SingleMeaningViolation,
  InvalidDistribution,
  DecompositionViolation,
  // report
  AlignmentMismatch,
  // shared
  InvalidArgument,
  Io,
  Config,
};

std::string_view to_string(ErrorKind kind);

/// True for failures that originate in a scoring or generation backend.
bool is_backend_failure(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace narrinfo
