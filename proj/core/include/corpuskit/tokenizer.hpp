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
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace corpuskit {

using TokenId = int32_t;
using TokenSeq = std::vector<TokenId>;

inline constexpr TokenId kPadId = 0;
inline constexpr TokenId kUnkId = 1;
inline constexpr TokenId kBosId = 2;
inline constexpr TokenId kEosId = 3;
inline constexpr TokenId kMaskId = 4;
inline constexpr TokenId kNumSpecialIds = 5;

inline constexpr double kUnkLogProb = -20.0;

// U+2581, prefixed to every word before segmentation.
inline constexpr std::string_view kWordBoundary = "\xE2\x96\x81";

struct VocabPiece {
  std::string piece;
  double log_prob = 0.0;
};

// Unigram vocabulary. Ids are dense; 0..4 are the special tokens
// <pad>, <unk>, <s>, </s>, <mask>, followed by the loaded pieces in file order.
class Vocab {
 public:
  Vocab();

  // Throws Error(kDuplicatePiece) or Error(kParseError).
  static Vocab from_pieces(std::span<const VocabPiece> pieces);

  // TSV `piece \t log_prob`, UTF-8, specials implicit.
  static Vocab parse(std::istream& in);
  static Vocab load(const std::string& path);

  size_t size() const { return pieces_.size(); }
  const VocabPiece& piece(TokenId id) const { return pieces_.at(static_cast<size_t>(id)); }
  bool is_special(TokenId id) const { return id >= 0 && id < kNumSpecialIds; }

  // Returns -1 for unknown pieces. Specials are not matchable.
  TokenId find(std::u32string_view piece) const;
  size_t max_piece_scalars() const { return max_piece_scalars_; }

 private:
  void add(std::string piece, double log_prob, size_t line_no);

  struct PieceHash {
    using is_transparent = void;
    size_t operator()(std::u32string_view s) const {
      return std::hash<std::u32string_view>{}(s);
    }
  };

  std::vector<VocabPiece> pieces_;
  std::unordered_map<std::u32string, TokenId, PieceHash, std::equal_to<>> index_;
  size_t max_piece_scalars_ = 0;
};

// Applies the word-boundary transform: each whitespace-separated word is
// prefixed with U+2581 and the words are concatenated.
std::u32string to_unigram_input(std::string_view text);

struct Segmentation {
  TokenSeq ids;
  double log_prob = 0.0;
};

// Viterbi segmentation maximizing the summed piece log-probabilities. A
// maximal run of positions at which no piece starts emits one <unk>, scored
// kUnkLogProb per scalar in the run. Ties prefer fewer tokens, then the
// lexicographically smaller first piece.
Segmentation segment_unigram(const Vocab& vocab, std::string_view text);
TokenSeq encode_unigram(const Vocab& vocab, std::string_view text);

// Concatenates pieces, maps U+2581 to a space and strips the leading space.
// Special ids are dropped. Throws Error(kUnknownId).
std::string decode(const Vocab& vocab, std::span<const TokenId> ids);

// Test tokenizer: each whitespace-separated word hashed into
// [kNumSpecialIds, kNumSpecialIds + kWhitespaceIdSpace).
inline constexpr TokenId kWhitespaceIdSpace = 1 << 20;
TokenSeq encode_whitespace(std::string_view text);

}  // namespace corpuskit
