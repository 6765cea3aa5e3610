// Copyright 2026 The mgkb Authors.
//
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

#ifndef MGKB_COMMON_H_
#define MGKB_COMMON_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mgkb {

// All fatal conditions are reported as exceptions derived from Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-fatal problems (skipped lines, unmatched ids) are collected here and
// returned to the caller alongside the result.
struct Warnings {
  std::vector<std::string> messages;

  void Add(std::string message) { messages.push_back(std::move(message)); }
  std::size_t size() const { return messages.size(); }
  bool empty() const { return messages.empty(); }
};

std::string ReadFile(const std::string &path);
void WriteFile(const std::string &path, std::string_view contents);
std::vector<std::string> ReadLines(const std::string &path);

std::vector<std::string> Split(std::string_view text, char sep);
std::string_view Trim(std::string_view text);
std::string AsciiLower(std::string_view text);
bool StartsWith(std::string_view text, std::string_view prefix);
bool EndsWith(std::string_view text, std::string_view suffix);

// Splits one CSV record. Double-quoted fields may contain separators and
// doubled quotes. Throws Error on an unterminated quote.
std::vector<std::string> SplitCsv(std::string_view line, char sep = ',');

// Hex-encoded SHA-256 of a byte string.
std::string Sha256Hex(std::string_view bytes);

// Shortest decimal representation that round-trips through strtod.
std::string FormatDouble(double value);

}  // namespace mgkb

#endif  // MGKB_COMMON_H_
