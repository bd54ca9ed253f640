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

#ifndef SCIBROWSE_CANONICAL_JSON_H_
#define SCIBROWSE_CANONICAL_JSON_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"
#include "scibrowse/error.h"

namespace scibrowse {

// Insertion-ordered JSON. Serializers emit keys in a fixed order, which is
// what makes the canonical form byte-stable.
using Json = nlohmann::ordered_json;

// Canonical text: UTF-8 (invalid sequences replaced), two-space indent,
// non-ASCII kept as-is, LF line endings, trailing newline.
inline std::string CanonicalDump(const Json& j) {
  return j.dump(2, ' ', false, Json::error_handler_t::replace) + "\n";
}

// Single-line form used for JSON lines files and the command log.
inline std::string CompactDump(const Json& j) {
  return j.dump(-1, ' ', false, Json::error_handler_t::replace);
}

inline uint64_t Fnv1a64(std::string_view bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string Hex64(uint64_t v);

// Typed field access that reports schema violations as kCorruptStore with
// the JSON pointer of the offending field.
const Json& RequireField(const Json& obj, std::string_view key,
                         std::string_view where);
std::string RequireString(const Json& obj, std::string_view key,
                          std::string_view where);
int64_t RequireInt(const Json& obj, std::string_view key,
                   std::string_view where);
bool RequireBool(const Json& obj, std::string_view key, std::string_view where);
const Json& RequireArray(const Json& obj, std::string_view key,
                         std::string_view where);
std::string OptionalString(const Json& obj, std::string_view key,
                           std::string_view where);

}  // namespace scibrowse

#endif  // SCIBROWSE_CANONICAL_JSON_H_
