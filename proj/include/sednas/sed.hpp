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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sednas/arch.hpp"

namespace sednas {

/// Logistic function 1 / (1 + e^-x).
double sig(double x);

/// sig(n_skip) * n_skip for the block's skip connections.
double skip_sed(const Block& block);

/// Sum over kernel kinds K_i that dominate the largest pool O_1 (under the
/// block's pool stride) of sig(c_out) * count(K_i). Without pooling in the
/// space every kernel counts.
double conv_sed(const Block& block, const SearchSpaceDescriptor& space);

/// D^2 + T^2 - S^2 where D counts dominating kernels, T counts every
/// operation (none only if space.count_none()), S counts pools plus
/// non-dominating kernels. Can be negative.
double pool_sed(const Block& block, const SearchSpaceDescriptor& space);

struct BlockScore {
  double skip_sed = 0.0;
  double conv_sed = 0.0;
  double pool_sed = 0.0;
  /// sig(c_out) * f_in / f_out
  double ratio = 0.0;
  double block_score = 0.0;
};

struct SedBreakdown {
  std::vector<BlockScore> per_block;
  double sed = 0.0;
};

/// Scores every block and averages. A space without skip connections uses
/// skip_sed = 1 and a space without pooling uses pool_sed = 1.
/// Throws ValidationError if the architecture does not validate.
SedBreakdown sed(const Architecture& arch, const SearchSpaceDescriptor& space);

nlohmann::ordered_json to_json(const SedBreakdown& b);

struct ScoredArch {
  std::size_t index = 0;
  std::string id;
  std::optional<double> sed;
  std::string error;
};

/// Order-preserving batch scoring. Invalid items carry an error message and
/// no score. Results do not depend on `threads`.
std::vector<ScoredArch> batch_score(std::span<const Architecture> archs,
                                    const SearchSpaceDescriptor& space,
                                    unsigned threads = 1);

/// Worker count from SED_THREADS, clamped to [1, hardware_concurrency].
unsigned default_threads();

}  // namespace sednas
