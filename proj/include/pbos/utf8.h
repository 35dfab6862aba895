// Copyright 2026 The PBoS Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PBOS_UTF8_H_
#define PBOS_UTF8_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace pbos::utf8 {

// Byte offsets of every character boundary in a UTF-8 string, including 0
// and s.size(). A string of n characters yields n + 1 offsets. Throws
// std::invalid_argument on malformed UTF-8.
std::vector<std::size_t> CharBoundaries(std::string_view s);

// Number of Unicode scalar values in s.
std::size_t Length(std::string_view s);

bool IsValid(std::string_view s);

// Appends the UTF-8 encoding of a scalar value.
void Append(std::string& out, char32_t cp);

// Simple per-character lowercase mapping (ASCII, Latin-1, Latin Extended-A,
// Greek and Cyrillic). No context-sensitive or multi-character mappings.
std::string Lowercase(std::string_view s);

// True if s contains ASCII whitespace or a Unicode space separator.
bool ContainsWhitespace(std::string_view s);

}  // namespace pbos::utf8

#endif  // PBOS_UTF8_H_
