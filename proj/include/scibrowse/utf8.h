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

// UTF-8 helpers. Text offsets everywhere in the document model count Unicode
// scalar values (code points), not bytes.

#ifndef SCIBROWSE_UTF8_H_
#define SCIBROWSE_UTF8_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scibrowse::utf8 {

// Decodes into code points. Invalid bytes decode as U+FFFD.
std::vector<char32_t> Decode(std::string_view s);
void Append(std::string& out, char32_t cp);

size_t Length(std::string_view s);

// Code-point substring [start, end). nullopt when end > Length(s) or start > end.
std::optional<std::string> Substr(std::string_view s, size_t start, size_t end);

bool IsXmlSpace(char c);

// Collapses runs of whitespace to one space and trims both ends.
std::string CollapseWhitespace(std::string_view s);

// Simple case folding for Latin, Greek and Cyrillic. Other scripts pass
// through unchanged.
char32_t FoldCase(char32_t cp);
std::string FoldCase(std::string_view s);

}  // namespace scibrowse::utf8

#endif  // SCIBROWSE_UTF8_H_
