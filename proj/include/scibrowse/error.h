// Copyright (C) 2026 The scibrowse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SCIBROWSE_ERROR_H_
#define SCIBROWSE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace scibrowse {

enum class ErrorCode {
  // ingest
  kMalformedXml,
  kUnrecognizedSchema,
  // article model / navigation
  kUnknownBlock,
  kOutOfRange,
  kUnknownSection,
  kUnknownSpan,
  // references
  kIncompleteOrder,
  kUnknownReference,
  // concept knowledgebase
  kCycleError,
  kUnknownClass,
  kUnknownDimension,
  kUnknownState,
  kUnresolvedParticipant,
  kInvalidState,
  kUnknownFlow,
  kConceptualModelNotInstantiable,
  kMethodFlowNotQuestionable,
  kUnknownModel,
  kUnknownEntity,
  kNotMeasurementFlow,
  kNotMethodFlow,
  kDuplicateId,
  kUnknownRQ,
  kInvalidArgument,
  // anchors
  kUnknownTarget,
  kUnknownMark,
  kUnknownAnchor,
  kUnknownRole,
  // library
  kUnknownArticle,
  kUnknownInstrument,
  kCorruptStore,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// All recoverable failures in the library are reported as Error. The code is
// the stable, machine-readable part; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  Error(ErrorCode code, const std::string& message, long line, long column)
      : std::runtime_error(message), code_(code), line_(line), column_(column) {}

  ErrorCode code() const { return code_; }
  long line() const { return line_; }
  long column() const { return column_; }

 private:
  ErrorCode code_;
  long line_ = 0;
  long column_ = 0;
};

// Non-fatal diagnostic. Line/column are 1-based source positions, 0 when
// the warning has no source location.
struct Warning {
  std::string code;
  std::string message;
  long line = 0;
  long column = 0;

  bool operator==(const Warning&) const = default;
};

}  // namespace scibrowse

#endif  // SCIBROWSE_ERROR_H_
