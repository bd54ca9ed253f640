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

// Canonical article serialization, the persistence and API format.

#ifndef SCIBROWSE_ARTICLE_JSON_H_
#define SCIBROWSE_ARTICLE_JSON_H_

#include "scibrowse/article.h"
#include "scibrowse/canonical_json.h"

namespace scibrowse {

Json SpanToJson(const Span& span);
Span SpanFromJson(const Json& j, std::string_view where);

Json PersonNameToJson(const PersonName& name);
Json ReferenceToJson(const Reference& ref);
Json BlockToJson(const ContentBlock& block);

Json ArticleToJson(const Article& article);
// Throws Error(kCorruptStore) naming the offending field.
Article ArticleFromJson(const Json& j);

}  // namespace scibrowse

#endif  // SCIBROWSE_ARTICLE_JSON_H_
