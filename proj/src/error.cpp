// Copyright 2026 The narrinfo Authors
// SPDX-License-Identifier: Apache-2.0

#include "narrinfo/error.hpp"

namespace narrinfo {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingColumn: return "MissingColumn";
    case ErrorKind::NonContiguousClauseNumbers: return "NonContiguousClauseNumbers";
    case ErrorKind::EmptyClauseText: return "EmptyClauseText";
    case ErrorKind::DuplicateNarrativeId: return "DuplicateNarrativeId";
    case ErrorKind::EmptyContext: return "EmptyContext";
    case ErrorKind::CsvParse: return "CsvParse";
    case ErrorKind::ContextOverflow: return "ContextOverflow";
    case ErrorKind::EndpointError: return "EndpointError";
    case ErrorKind::TokenCoverageMismatch: return "TokenCoverageMismatch";
    case ErrorKind::UnsupportedBackend: return "UnsupportedBackend";
    case ErrorKind::EmptyTraining: return "EmptyTraining";
    case ErrorKind::OutOfAlphabet: return "OutOfAlphabet";
    case ErrorKind::TextMismatch: return "TextMismatch";
    case ErrorKind::EmptyClauseTokens: return "EmptyClauseTokens";
    case ErrorKind::RangeOutOfBounds: return "RangeOutOfBounds";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::ClauseCountMismatch: return "ClauseCountMismatch";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::IncompleteRecords: return "IncompleteRecords";
    case ErrorKind::EmptyPart: return "EmptyPart";
    case ErrorKind::UnparseableNumbering: return "UnparseableNumbering";
    case ErrorKind::EmptyRecords: return "EmptyRecords";
    case ErrorKind::EmptyPrefix: return "EmptyPrefix";
    case ErrorKind::FormatNotFound: return "FormatNotFound";
    case ErrorKind::VerdictNotFound: return "VerdictNotFound";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::ZeroProbability: return "ZeroProbability";
    case ErrorKind::SingleMeaningViolation: return "SingleMeaningViolation";
    case ErrorKind::InvalidDistribution: return "InvalidDistribution";
    case ErrorKind::DecompositionViolation: return "DecompositionViolation";
    case ErrorKind::AlignmentMismatch: return "AlignmentMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

bool is_backend_failure(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ContextOverflow:
    case ErrorKind::EndpointError:
    case ErrorKind::TokenCoverageMismatch:
    case ErrorKind::UnsupportedBackend:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace narrinfo
