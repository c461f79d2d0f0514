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

#include "corpuskit/corpus.hpp"

#include <istream>

#include <nlohmann/json.hpp>

#include "corpuskit/error.hpp"

namespace corpuskit {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void parse_fail(size_t line_no, const std::string& id, const std::string& what) {
  std::string msg = "line " + std::to_string(line_no);
  if (!id.empty()) msg += " (id '" + id + "')";
  throw Error(ErrorCode::kParseError, msg + ": " + what);
}

}  // namespace

Page parse_page(std::string_view json_line, size_t line_no) {
  json j;
  try {
    j = json::parse(json_line);
  } catch (const json::parse_error& e) {
    parse_fail(line_no, "", e.what());
  }
  if (!j.is_object()) parse_fail(line_no, "", "record is not an object");
  Page page;
  const auto id = j.find("id");
  if (id == j.end() || !id->is_string()) parse_fail(line_no, "", "missing string 'id'");
  page.id = id->get<std::string>();
  const auto text = j.find("text");
  if (text == j.end() || !text->is_string()) parse_fail(line_no, page.id, "missing string 'text'");
  page.text = text->get<std::string>();
  if (const auto lp = j.find("lang_prob"); lp != j.end() && !lp->is_null()) {
    if (!lp->is_number()) parse_fail(line_no, page.id, "'lang_prob' is not a number");
    const double v = lp->get<double>();
    if (!(v >= 0.0 && v <= 1.0)) parse_fail(line_no, page.id, "'lang_prob' outside [0, 1]");
    page.lang_prob = v;
  }
  if (const auto s = j.find("sentences"); s != j.end()) {
    if (!s->is_array()) parse_fail(line_no, page.id, "'sentences' is not an array");
    for (const auto& item : *s) {
      if (!item.is_string()) parse_fail(line_no, page.id, "non-string sentence");
      page.sentences.push_back(Sentence::from_text(item.get<std::string>()));
    }
  }
  return page;
}

std::string serialize_page(const Page& page) {
  ordered_json j;
  j["id"] = page.id;
  j["text"] = page.text;
  if (page.lang_prob) j["lang_prob"] = *page.lang_prob;
  ordered_json sentences = ordered_json::array();
  for (const Sentence& s : page.sentences) sentences.push_back(s.text);
  j["sentences"] = std::move(sentences);
  return j.dump(-1, ' ', false, ordered_json::error_handler_t::replace);
}

bool JsonlReader::next_batch(size_t max_records, std::vector<RawRecord>& batch) {
  batch.clear();
  std::string line;
  while (batch.size() < max_records && std::getline(in_, line)) {
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    batch.push_back({std::move(line), line_no_});
  }
  if (in_.bad()) throw Error(ErrorCode::kIo, "read error at line " + std::to_string(line_no_));
  return !batch.empty();
}

}  // namespace corpuskit
