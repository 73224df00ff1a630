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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sednas/arch.hpp"
#include "sednas/sed.hpp"

namespace sednas {

/// Invalid search or sampling configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Distinct cell encodings the sampler can produce; nullopt if that count
/// does not fit in 64 bits.
std::optional<std::uint64_t> encoding_space_size(const SearchSpaceDescriptor& space);

/// n encodings in the space's native format, each slot drawn uniformly from
/// the sampleable operations. With `dedup` no encoding repeats.
std::vector<std::string> sample_encodings(const SearchSpaceDescriptor& space, std::int64_t n,
                                          std::uint64_t seed, bool dedup = false);

/// sample_encodings followed by parse_encoding.
std::vector<Architecture> sample_random(const SearchSpaceDescriptor& space, std::int64_t n,
                                        std::uint64_t seed, bool dedup = false);

/// Every cell string of a cell-string space in lexicographic slot order
/// (5^6 = 15,625 for the NATS topology space).
std::vector<std::string> enumerate_cell_strings(const SearchSpaceDescriptor& space);

struct SearchConfig {
  SearchSpaceDescriptor space;
  std::int64_t n_samples = 2000;
  std::uint64_t seed = 0;
  bool dedup = false;
  /// Result JSON is written here when non-empty.
  std::string output;
  unsigned threads = 1;
};

struct SearchResult {
  std::string best_encoding;
  double best_sed = 0.0;
  SedBreakdown breakdown;
  std::int64_t evaluated = 0;
  /// Wall-clock seconds spent scoring; sampling and parsing excluded.
  double elapsed_seconds = 0.0;
};

/// Samples, scores and returns the highest-SED architecture. Equal scores
/// go to the lexicographically smallest encoding.
SearchResult search(const SearchConfig& config);

nlohmann::ordered_json to_json(const SearchResult& r, const SearchConfig& config);

}  // namespace sednas
