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

#include "sednas/search.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <random>
#include <unordered_set>

#include "sednas/bench.hpp"
#include "sednas/parser.hpp"
#include "sednas/rng.hpp"

namespace sednas {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kEnumerateLimit = 1u << 20;

std::vector<std::string> sampleable_names(const SearchSpaceDescriptor& space) {
  std::vector<std::string> names;
  for (const OpDef& d : space.ops()) {
    if (d.sampleable) names.push_back(d.name);
  }
  if (names.empty()) throw ConfigError("space " + space.id() + " has no sampleable operations");
  return names;
}

int slots_for(const SearchSpaceDescriptor& space, CellType cell) {
  const auto it = space.cell_slots().find(cell);
  if (it == space.cell_slots().end() || it->second <= 0) {
    throw ConfigError("space " + space.id() + " does not declare slots for " + to_string(cell) +
                      " cells");
  }
  return it->second;
}

/// Intermediate nodes of a cell-string DAG with `slots` edges.
int dag_nodes(int slots) {
  int nodes = 0;
  int edges = 0;
  while (edges < slots) edges += ++nodes;
  if (edges != slots) throw ConfigError("cell-string slot count must be triangular");
  return nodes;
}

std::vector<CellType> cell_types_in_use(const SearchSpaceDescriptor& space) {
  std::vector<CellType> out;
  for (const Stage& st : space.skeleton()) {
    if (std::find(out.begin(), out.end(), st.cell) == out.end()) out.push_back(st.cell);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool mul_checked(std::uint64_t& acc, std::uint64_t f) {
  if (f != 0 && acc > UINT64_MAX / f) return false;
  acc *= f;
  return true;
}

std::string cell_string(const std::vector<std::string>& names, const std::vector<int>& choice) {
  std::string s;
  std::size_t e = 0;
  for (int node = 1; e < choice.size(); ++node) {
    if (node > 1) s += '+';
    s += '|';
    for (int in = 0; in < node; ++in, ++e) {
      s += names[static_cast<std::size_t>(choice[e])] + "~" + std::to_string(in) + "|";
    }
  }
  return s;
}

class Sampler {
 public:
  Sampler(const SearchSpaceDescriptor& space, std::uint64_t seed)
      : space_(space), names_(sampleable_names(space)), rng_(splitmix64(seed)) {}

  std::string draw() {
    switch (space_.encoding()) {
      case EncodingFormat::tss_cell_string:
        return draw_cell_string();
      case EncodingFormat::darts_genotype:
        return draw_genotype();
      case EncodingFormat::generic_json:
        return draw_generic();
    }
    return {};
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  const std::string& pick_op() { return names_[static_cast<std::size_t>(pick(static_cast<int>(names_.size())))]; }

  std::string draw_cell_string() {
    const int slots = slots_for(space_, CellType::normal);
    dag_nodes(slots);
    std::vector<int> choice(static_cast<std::size_t>(slots));
    for (int& c : choice) c = pick(static_cast<int>(names_.size()));
    return cell_string(names_, choice);
  }

  DartsCell draw_darts_cell(CellType cell) {
    const int slots = slots_for(space_, cell);
    if (slots % 2 != 0) throw ConfigError("genotype cells need an even slot count");
    DartsCell out;
    for (int node = 0; node < slots / 2; ++node) {
      const int inputs = node + 2;
      const int a = pick(inputs);
      int b = pick(inputs - 1);
      if (b >= a) ++b;
      const auto [lo, hi] = std::minmax(a, b);
      const std::string& op_lo = pick_op();
      const std::string& op_hi = pick_op();
      out.emplace_back(op_lo, lo);
      out.emplace_back(op_hi, hi);
    }
    return out;
  }

  std::string draw_genotype() {
    DartsGenotype g;
    g.normal = draw_darts_cell(CellType::normal);
    g.reduce = draw_darts_cell(CellType::reduce);
    return to_string(g);
  }

  std::string draw_generic() {
    json cells = json::object();
    for (CellType ct : cell_types_in_use(space_)) {
      json counts = json::object();
      for (int s = slots_for(space_, ct); s > 0; --s) {
        const std::string& op = pick_op();
        counts[op] = counts.value(op, 0) + 1;
      }
      cells[to_string(ct)] = counts;
    }
    return json{{"cells", cells}}.dump();
  }

  const SearchSpaceDescriptor& space_;
  std::vector<std::string> names_;
  std::mt19937_64 rng_;
};

}  // namespace

std::optional<std::uint64_t> encoding_space_size(const SearchSpaceDescriptor& space) {
  const auto k = static_cast<std::uint64_t>(sampleable_names(space).size());
  std::uint64_t total = 1;
  switch (space.encoding()) {
    case EncodingFormat::tss_cell_string: {
      const int slots = slots_for(space, CellType::normal);
      for (int i = 0; i < slots; ++i) {
        if (!mul_checked(total, k)) return std::nullopt;
      }
      return total;
    }
    case EncodingFormat::darts_genotype:
      for (CellType ct : {CellType::normal, CellType::reduce}) {
        const int slots = slots_for(space, ct);
        for (int node = 0; node < slots / 2; ++node) {
          const auto inputs = static_cast<std::uint64_t>(node + 2);
          if (!mul_checked(total, k * k) || !mul_checked(total, inputs * (inputs - 1) / 2)) {
            return std::nullopt;
          }
        }
      }
      return total;
    case EncodingFormat::generic_json:
      for (CellType ct : cell_types_in_use(space)) {
        // multisets of size s over k operations: C(k + s - 1, s)
        const auto s = static_cast<std::uint64_t>(slots_for(space, ct));
        std::uint64_t c = 1;
        for (std::uint64_t i = 1; i <= s; ++i) {
          const std::uint64_t num = k + i - 1;
          if (c > UINT64_MAX / num) return std::nullopt;
          c = c * num / i;
        }
        if (!mul_checked(total, c)) return std::nullopt;
      }
      return total;
  }
  return std::nullopt;
}

std::vector<std::string> enumerate_cell_strings(const SearchSpaceDescriptor& space) {
  if (space.encoding() != EncodingFormat::tss_cell_string) {
    throw ConfigError("enumeration is only supported for cell-string spaces");
  }
  const auto size = encoding_space_size(space);
  if (!size || *size > kEnumerateLimit * 16) {
    throw ConfigError("space " + space.id() + " is too large to enumerate");
  }
  const auto names = sampleable_names(space);
  const int slots = slots_for(space, CellType::normal);
  dag_nodes(slots);
  std::vector<int> choice(static_cast<std::size_t>(slots), 0);
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(*size));
  const int k = static_cast<int>(names.size());
  while (true) {
    out.push_back(cell_string(names, choice));
    int pos = slots - 1;
    while (pos >= 0 && ++choice[static_cast<std::size_t>(pos)] == k) {
      choice[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

std::vector<std::string> sample_encodings(const SearchSpaceDescriptor& space, std::int64_t n,
                                          std::uint64_t seed, bool dedup) {
  if (n < 1) throw ConfigError("number of samples must be at least 1");
  if (!dedup) {
    Sampler sampler(space, seed);
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) out.push_back(sampler.draw());
    return out;
  }
  const auto size = encoding_space_size(space);
  if (size && static_cast<std::uint64_t>(n) > *size) {
    throw ConfigError("cannot draw " + std::to_string(n) + " distinct architectures from a space of " +
                      std::to_string(*size));
  }
  if (space.encoding() == EncodingFormat::tss_cell_string && size && *size <= kEnumerateLimit) {
    // Partial Fisher-Yates over the full listing.
    auto all = enumerate_cell_strings(space);
    std::mt19937_64 rng(splitmix64(seed));
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
      std::uniform_int_distribution<std::size_t> d(i, all.size() - 1);
      std::swap(all[i], all[d(rng)]);
    }
    all.resize(static_cast<std::size_t>(n));
    return all;
  }
  Sampler sampler(space, seed);
  std::unordered_set<std::string> seen;
  std::vector<std::string> out;
  const std::int64_t max_draws = std::max<std::int64_t>(1000, 1000 * n);
  for (std::int64_t draws = 0; static_cast<std::int64_t>(out.size()) < n; ++draws) {
    if (draws >= max_draws) {
      throw ConfigError("gave up finding " + std::to_string(n) + " distinct architectures after " +
                        std::to_string(max_draws) + " draws");
    }
    std::string e = sampler.draw();
    if (seen.insert(e).second) out.push_back(std::move(e));
  }
  return out;
}

std::vector<Architecture> sample_random(const SearchSpaceDescriptor& space, std::int64_t n,
                                        std::uint64_t seed, bool dedup) {
  std::vector<Architecture> out;
  for (const std::string& e : sample_encodings(space, n, seed, dedup)) {
    out.push_back(parse_encoding(e, space));
  }
  return out;
}

SearchResult search(const SearchConfig& config) {
  const auto encodings =
      sample_encodings(config.space, config.n_samples, config.seed, config.dedup);
  std::vector<Architecture> archs;
  archs.reserve(encodings.size());
  for (const std::string& e : encodings) archs.push_back(parse_encoding(e, config.space));

  const auto t0 = std::chrono::steady_clock::now();
  const auto scored = batch_score(archs, config.space, std::max(1u, config.threads));
  const auto t1 = std::chrono::steady_clock::now();

  std::optional<std::size_t> best;
  for (const ScoredArch& s : scored) {
    if (!s.sed) throw ValidationError({{ViolationKind::space_mismatch, -1, s.error}});
    if (!best) {
      best = s.index;
      continue;
    }
    const double cur = *scored[*best].sed;
    if (*s.sed > cur || (*s.sed == cur && encodings[s.index] < encodings[*best])) best = s.index;
  }

  SearchResult r;
  r.best_encoding = encodings[*best];
  r.best_sed = *scored[*best].sed;
  r.breakdown = sed(archs[*best], config.space);
  r.evaluated = static_cast<std::int64_t>(archs.size());
  r.elapsed_seconds = std::chrono::duration<double>(t1 - t0).count();

  if (!config.output.empty()) {
    std::ofstream out(config.output, std::ios::trunc);
    if (!out) throw IoError("cannot open for writing", config.output);
    out << to_json(r, config).dump(2) << "\n";
    if (!out) throw IoError("cannot write", config.output);
  }
  return r;
}

ordered_json to_json(const SearchResult& r, const SearchConfig& config) {
  ordered_json j;
  j["space"] = config.space.id();
  j["n_samples"] = config.n_samples;
  j["seed"] = config.seed;
  j["dedup"] = config.dedup;
  j["evaluated"] = r.evaluated;
  j["best_encoding"] = r.best_encoding;
  j["best_sed"] = r.best_sed;
  j["elapsed_seconds"] = r.elapsed_seconds;
  j["breakdown"] = to_json(r.breakdown);
  return j;
}

}  // namespace sednas
