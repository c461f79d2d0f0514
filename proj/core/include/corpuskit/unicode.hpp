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
#include <string>
#include <string_view>
#include <vector>

namespace corpuskit::unicode {

// Decodes UTF-8 into scalar values. Malformed bytes decode to U+FFFD, one
// replacement per offending byte.
std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);
void append_utf8(char32_t cp, std::string& out);

size_t count_scalars(std::string_view text);

bool is_uppercase(char32_t cp);    // general category Lu
bool is_digit(char32_t cp);        // general category Nd
bool is_punctuation(char32_t cp);  // general category P*
bool is_whitespace(char32_t cp);

// Simple one-to-one lowercase mapping of Lu letters; other scalars map to
// themselves. No locale tailoring.
char32_t to_lower(char32_t cp);
std::string fold_case(std::string_view text);

// Maximal runs of non-whitespace scalars.
std::vector<std::string_view> split_words(std::string_view text);

std::string_view trim(std::string_view text);

// Trims and collapses internal whitespace runs to a single ASCII space.
std::string collapse_whitespace(std::string_view text);

}  // namespace corpuskit::unicode
