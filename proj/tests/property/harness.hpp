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
#include <exception>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "sednas/rng.hpp"

namespace sednas::prop {

struct Outcome {
  std::string name;
  std::int64_t cases = 0;
  std::int64_t failures = 0;
  std::string first_failure;

  bool ok() const { return failures == 0 && cases > 0; }
};

/// Runs `check(gen(rng))` for `cases` independent inputs. `check` returns an
/// empty string on success and a description of the failure otherwise.
/// Case i always sees the same generator stream for a given seed.
template <class Gen, class Check>
Outcome for_all(std::string name, std::int64_t cases, std::uint64_t seed, Gen gen, Check check) {
  Outcome out;
  out.name = std::move(name);
  for (std::int64_t i = 0; i < cases; ++i) {
    std::mt19937_64 rng = trial_rng(seed, static_cast<std::uint64_t>(i));
    std::string why;
    try {
      why = check(gen(rng));
    } catch (const std::exception& e) {
      why = std::string("threw: ") + e.what();
    }
    ++out.cases;
    if (!why.empty()) {
      ++out.failures;
      if (out.first_failure.empty()) out.first_failure = "case " + std::to_string(i) + ": " + why;
    }
  }
  return out;
}

std::vector<Outcome> arch_properties(std::uint64_t seed);
std::vector<Outcome> parser_properties(std::uint64_t seed);
std::vector<Outcome> sed_properties(std::uint64_t seed);
std::vector<Outcome> entropy_properties(std::uint64_t seed);
std::vector<Outcome> bench_properties(std::uint64_t seed);
std::vector<Outcome> search_properties(std::uint64_t seed);

std::vector<Outcome> all_properties(std::uint64_t seed);

}  // namespace sednas::prop
