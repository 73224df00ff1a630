/* Copyright (c) 2026 The sednas Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sednas/arch.hpp"
#include "sednas/io_error.hpp"

namespace sednas {

/// Malformed input. Text encodings report a byte offset into the (untrimmed)
/// input; JSON schema problems report a JSON path such as "$.space.skeleton".
class ParseError : public std::runtime_error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at byte " + std::to_string(offset)),
        offset_(offset) {}
  ParseError(const std::string& what, std::string path)
      : std::runtime_error(what + " at " + path), path_(std::move(path)) {}

  std::size_t offset() const { return offset_; }
  const std::string& path() const { return path_; }

 private:
  std::size_t offset_ = npos;
  std::string path_;
};

/// NATS-Bench cell string, e.g.
/// `|nor_conv_3x3~0|+|nor_conv_3x3~0|skip_connect~1|+|...|`. The cell is
/// tiled over every stage of the space's skeleton.
Architecture parse_tss(std::string_view encoding, const SearchSpaceDescriptor& space);

/// One DARTS cell as (op, input) pairs, two consecutive pairs per node.
using DartsCell = std::vector<std::pair<std::string, int>>;

struct DartsGenotype {
  DartsCell normal;
  DartsCell reduce;
};

/// Accepts the Python repr `Genotype(normal=[('sep_conv_3x3', 0), ...], ...)`
/// or JSON `{"normal": [["sep_conv_3x3", 0], ...], "reduce": [...]}`. JSON
/// cells may also group pairs per node: `[[["op", 0], ["op", 1]], ...]`.
DartsGenotype parse_darts_genotype(std::string_view genotype);
std::string to_string(const DartsGenotype& g);

Architecture parse_darts(std::string_view genotype, const SearchSpaceDescriptor& space);

/// Space document (schema 1). Throws ParseError with a JSON path.
SearchSpaceDescriptor parse_space(const nlohmann::json& doc);
SearchSpaceDescriptor parse_space(std::string_view json_text);
nlohmann::ordered_json space_to_json(const SearchSpaceDescriptor& space);

/// Built-in space name ("tss", "darts", "darts-search") or path to a JSON
/// document holding a space, either bare or under a "space" key.
SearchSpaceDescriptor load_space(const std::string& name_or_path);

struct GenericDocument {
  SearchSpaceDescriptor space;
  Architecture arch;
};

/// Self-contained document {"schema": 1, "space": {...}, "arch": {...}}.
/// The returned architecture has passed validate().
GenericDocument parse_generic(std::string_view json_text);

/// Generic document for `arch`; parse_generic(serialize(a, s)).arch == a.
std::string serialize(const Architecture& arch, const SearchSpaceDescriptor& space);

/// Dispatches on space.encoding().
Architecture parse_encoding(std::string_view text, const SearchSpaceDescriptor& space);

}  // namespace sednas
