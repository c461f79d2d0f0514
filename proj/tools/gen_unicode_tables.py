#!/usr/bin/env python3
# Copyright 2026 The corpuskit Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates core/src/unicode_tables.inc from Python's unicodedata."""

import sys
import unicodedata

MAX_CP = 0x110000


def ranges(pred):
    out, start = [], None
    for cp in range(MAX_CP):
        if pred(cp):
            if start is None:
                start = cp
        elif start is not None:
            out.append((start, cp - 1))
            start = None
    if start is not None:
        out.append((start, MAX_CP - 1))
    return out


def cat(cp):
    return unicodedata.category(chr(cp))


LICENSE = """/*
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
"""


def emit_ranges(name, rs, f):
    f.write(f"constexpr CodepointRange {name}[] = {{\n")
    for a, b in rs:
        f.write(f"    {{0x{a:04X}, 0x{b:04X}}},\n")
    f.write("};\n\n")


def main(path):
    upper = ranges(lambda cp: cat(cp) == "Lu")
    digit = ranges(lambda cp: cat(cp) == "Nd")
    punct = ranges(lambda cp: cat(cp).startswith("P"))
    space = ranges(lambda cp: chr(cp).isspace())
    lower_map = []
    for cp in range(MAX_CP):
        if cat(cp) != "Lu":
            continue
        low = chr(cp).lower()
        # Multi-scalar lowerings (U+0130) keep only the base letter.
        tgt = ord(low[0])
        if tgt != cp:
            lower_map.append((cp, tgt))
    with open(path, "w", encoding="utf-8") as f:
        f.write(LICENSE + "\n")
        f.write("// Generated by tools/gen_unicode_tables.py "
                f"(Unicode {unicodedata.unidata_version}). Do not edit.\n\n")
        emit_ranges("kUppercaseRanges", upper, f)
        emit_ranges("kDigitRanges", digit, f)
        emit_ranges("kPunctuationRanges", punct, f)
        emit_ranges("kWhitespaceRanges", space, f)
        f.write("constexpr CaseMapping kLowercaseMap[] = {\n")
        for a, b in lower_map:
            f.write(f"    {{0x{a:04X}, 0x{b:04X}}},\n")
        f.write("};\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "core/src/unicode_tables.inc")
