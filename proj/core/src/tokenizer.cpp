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

#include "corpuskit/tokenizer.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <system_error>

#include "corpuskit/error.hpp"
#include "corpuskit/random.hpp"
#include "corpuskit/unicode.hpp"

namespace corpuskit {

namespace {

constexpr std::string_view kSpecialNames[kNumSpecialIds] = {"<pad>", "<unk>", "<s>", "</s>",
                                                            "<mask>"};

constexpr char32_t kBoundaryScalar = 0x2581;

}  // namespace

Vocab::Vocab() {
  for (std::string_view name : kSpecialNames) pieces_.push_back({std::string(name), 0.0});
}

void Vocab::add(std::string piece, double log_prob, size_t line_no) {
  const std::string where = line_no ? "line " + std::to_string(line_no) + ": " : "";
  if (piece.empty()) throw Error(ErrorCode::kParseError, where + "empty piece");
  if (!(log_prob <= 0.0) || std::isinf(log_prob)) {
    throw Error(ErrorCode::kParseError, where + "log_prob must be finite and <= 0");
  }
  for (std::string_view name : kSpecialNames) {
    if (piece == name) throw Error(ErrorCode::kDuplicatePiece, where + "'" + piece + "' is reserved");
  }
  std::u32string key = unicode::decode_utf8(piece);
  const auto id = static_cast<TokenId>(pieces_.size());
  if (!index_.emplace(key, id).second) {
    throw Error(ErrorCode::kDuplicatePiece, where + "duplicate piece '" + piece + "'");
  }
  max_piece_scalars_ = std::max(max_piece_scalars_, key.size());
  pieces_.push_back({std::move(piece), log_prob});
}

Vocab Vocab::from_pieces(std::span<const VocabPiece> pieces) {
  Vocab v;
  for (const VocabPiece& p : pieces) v.add(p.piece, p.log_prob, 0);
  return v;
}

Vocab Vocab::parse(std::istream& in) {
  Vocab v;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const size_t tab = line.rfind('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": missing tab");
    }
    const std::string_view field(line.data() + tab + 1, line.size() - tab - 1);
    double lp = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), lp);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_no) + ": bad log_prob '" + std::string(field) + "'");
    }
    v.add(line.substr(0, tab), lp, line_no);
  }
  return v;
}

Vocab Vocab::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open vocab " + path);
  return parse(in);
}

TokenId Vocab::find(std::u32string_view piece) const {
  const auto it = index_.find(piece);
  return it == index_.end() ? -1 : it->second;
}

std::u32string to_unigram_input(std::string_view text) {
  std::u32string out;
  for (std::string_view word : unicode::split_words(text)) {
    out.push_back(kBoundaryScalar);
    out += unicode::decode_utf8(word);
  }
  return out;
}

Segmentation segment_unigram(const Vocab& vocab, std::string_view text) {
  const std::u32string input = to_unigram_input(text);
  const size_t n = input.size();
  if (n == 0) return {};

  // Backward pass: best[i] is the best segmentation of input[i..n). Ordering
  // the suffixes this way makes "smaller first piece" a local decision.
  struct Cell {
    double score = -std::numeric_limits<double>::infinity();
    size_t tokens = 0;
    TokenId first = -1;
    size_t next = 0;
  };
  std::vector<Cell> best(n + 1);
  best[n].score = 0.0;
  const std::u32string_view view(input);
  const size_t max_len = vocab.max_piece_scalars();
  std::vector<bool> coverable(n, false);  // some piece starts here

  for (size_t i = n; i-- > 0;) {
    Cell& cell = best[i];
    for (size_t len = 1; len <= max_len && i + len <= n; ++len) {
      const TokenId id = vocab.find(view.substr(i, len));
      if (id < 0) continue;
      const Cell& rest = best[i + len];
      const double score = vocab.piece(id).log_prob + rest.score;
      const size_t tokens = rest.tokens + 1;
      bool better = false;
      if (cell.first < 0 || score > cell.score) {
        better = true;
      } else if (score == cell.score) {
        if (tokens < cell.tokens) {
          better = true;
        } else if (tokens == cell.tokens) {
          better = vocab.piece(id).piece < vocab.piece(cell.first).piece;
        }
      }
      if (better) cell = {score, tokens, id, i + len};
    }
    if (cell.first < 0) {
      size_t j = i + 1;
      while (j < n && !coverable[j]) ++j;
      cell = {kUnkLogProb * static_cast<double>(j - i) + best[j].score, best[j].tokens + 1, kUnkId,
              j};
    } else {
      coverable[i] = true;
    }
  }

  Segmentation out;
  out.log_prob = best[0].score;
  out.ids.reserve(best[0].tokens);
  for (size_t i = 0; i < n; i = best[i].next) out.ids.push_back(best[i].first);
  return out;
}

TokenSeq encode_unigram(const Vocab& vocab, std::string_view text) {
  return segment_unigram(vocab, text).ids;
}

std::string decode(const Vocab& vocab, std::span<const TokenId> ids) {
  std::string joined;
  for (TokenId id : ids) {
    if (id < 0 || static_cast<size_t>(id) >= vocab.size()) {
      throw Error(ErrorCode::kUnknownId, "token id " + std::to_string(id));
    }
    if (vocab.is_special(id)) continue;
    joined += vocab.piece(id).piece;
  }
  std::string out;
  out.reserve(joined.size());
  size_t pos = 0;
  while (pos < joined.size()) {
    if (joined.compare(pos, kWordBoundary.size(), kWordBoundary) == 0) {
      out.push_back(' ');
      pos += kWordBoundary.size();
    } else {
      out.push_back(joined[pos++]);
    }
  }
  if (!out.empty() && out.front() == ' ') out.erase(0, 1);
  return out;
}

TokenSeq encode_whitespace(std::string_view text) {
  TokenSeq ids;
  for (std::string_view word : unicode::split_words(text)) {
    ids.push_back(kNumSpecialIds + static_cast<TokenId>(fnv1a64(word) % kWhitespaceIdSpace));
  }
  return ids;
}

}  // namespace corpuskit
