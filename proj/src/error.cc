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

#include "scibrowse/error.h"

namespace scibrowse {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedXml: return "MalformedXml";
    case ErrorCode::kUnrecognizedSchema: return "UnrecognizedSchema";
    case ErrorCode::kUnknownBlock: return "UnknownBlock";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kUnknownSection: return "UnknownSection";
    case ErrorCode::kUnknownSpan: return "UnknownSpan";
    case ErrorCode::kIncompleteOrder: return "IncompleteOrder";
    case ErrorCode::kUnknownReference: return "UnknownReference";
    case ErrorCode::kCycleError: return "CycleError";
    case ErrorCode::kUnknownClass: return "UnknownClass";
    case ErrorCode::kUnknownDimension: return "UnknownDimension";
    case ErrorCode::kUnknownState: return "UnknownState";
    case ErrorCode::kUnresolvedParticipant: return "UnresolvedParticipant";
    case ErrorCode::kInvalidState: return "InvalidState";
    case ErrorCode::kUnknownFlow: return "UnknownFlow";
    case ErrorCode::kConceptualModelNotInstantiable:
      return "ConceptualModelNotInstantiable";
    case ErrorCode::kMethodFlowNotQuestionable:
      return "MethodFlowNotQuestionable";
    case ErrorCode::kUnknownModel: return "UnknownModel";
    case ErrorCode::kUnknownEntity: return "UnknownEntity";
    case ErrorCode::kNotMeasurementFlow: return "NotMeasurementFlow";
    case ErrorCode::kNotMethodFlow: return "NotMethodFlow";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kUnknownRQ: return "UnknownRQ";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kUnknownTarget: return "UnknownTarget";
    case ErrorCode::kUnknownMark: return "UnknownMark";
    case ErrorCode::kUnknownAnchor: return "UnknownAnchor";
    case ErrorCode::kUnknownRole: return "UnknownRole";
    case ErrorCode::kUnknownArticle: return "UnknownArticle";
    case ErrorCode::kUnknownInstrument: return "UnknownInstrument";
    case ErrorCode::kCorruptStore: return "CorruptStore";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace scibrowse
