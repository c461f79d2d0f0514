/*
 * Copyright 2026 The corpuskit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "corpuskit/cleaner.hpp"

namespace corpuskit {

// JSON-lines corpus records: {"id": string, "text": string,
// "lang_prob": optional number, "sentences": optional [string]}.
// Throws Error(kParseError) naming the line number (and id when known).
Page parse_page(std::string_view json_line, size_t line_no);

// Emits {"id", "text", "lang_prob"?, "sentences"} on one line, no trailing
// newline. Invalid UTF-8 is replaced rather than rejected.
std::string serialize_page(const Page& page);

// Reads up to `max_records` non-blank lines. Returns false at end of input.
struct RawRecord {
  std::string line;
  size_t line_no = 0;
};

class JsonlReader {
 public:
  explicit JsonlReader(std::istream& in) : in_(in) {}
  bool next_batch(size_t max_records, std::vector<RawRecord>& batch);

 private:
  std::istream& in_;
  size_t line_no_ = 0;
};

}  // namespace corpuskit
