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

#include "sednas/sed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace sednas {

namespace {

struct Tally {
  double dominating = 0;      // D
  double total = 0;           // T
  double suppressive = 0;     // S
  double dominating_conv = 0; // conv_SED before the sig(c_out) factor
};

Tally tally(const Block& block, const SearchSpaceDescriptor& space) {
  Tally t;
  const bool has_pool = space.has_pool();
  const PoolSpec* o1 = has_pool ? &space.pools().front() : nullptr;
  for (const auto& [op, count] : block.op_counts) {
    if (op.tag == OpTag::none && !space.count_none()) continue;
    t.total += count;
    if (op.tag == OpTag::conv) {
      if (o1 == nullptr || dominates(op.kernel, *o1, block.pool_stride)) {
        t.dominating += count;
        t.dominating_conv += count;
      } else {
        t.suppressive += count;
      }
    } else if (op.tag == OpTag::pool) {
      t.suppressive += count;
    }
  }
  return t;
}

}  // namespace

double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double skip_sed(const Block& block) {
  const double n = block.count(OpKind::skip());
  return sig(n) * n;
}

double conv_sed(const Block& block, const SearchSpaceDescriptor& space) {
  return sig(block.c_out) * tally(block, space).dominating_conv;
}

double pool_sed(const Block& block, const SearchSpaceDescriptor& space) {
  const Tally t = tally(block, space);
  return t.dominating * t.dominating + t.total * t.total - t.suppressive * t.suppressive;
}

SedBreakdown sed(const Architecture& arch, const SearchSpaceDescriptor& space) {
  require_valid(arch, space);
  SedBreakdown out;
  out.per_block.reserve(arch.blocks.size());
  double sum = 0.0;
  for (const Block& b : arch.blocks) {
    BlockScore s;
    s.skip_sed = space.has_skip() ? skip_sed(b) : 1.0;
    s.conv_sed = conv_sed(b, space);
    s.pool_sed = space.has_pool() ? pool_sed(b, space) : 1.0;
    s.ratio = sig(b.c_out) * static_cast<double>(b.f_in) / static_cast<double>(b.f_out);
    s.block_score = s.ratio * s.pool_sed * sig(s.skip_sed * s.conv_sed);
    sum += s.block_score;
    out.per_block.push_back(s);
  }
  out.sed = sum / static_cast<double>(arch.blocks.size());
  return out;
}

nlohmann::ordered_json to_json(const SedBreakdown& b) {
  nlohmann::ordered_json j;
  j["sed"] = b.sed;
  j["blocks"] = nlohmann::ordered_json::array();
  for (const auto& s : b.per_block) {
    nlohmann::ordered_json e;
    e["skip_sed"] = s.skip_sed;
    e["conv_sed"] = s.conv_sed;
    e["pool_sed"] = s.pool_sed;
    e["ratio"] = s.ratio;
    e["block_score"] = s.block_score;
    j["blocks"].push_back(e);
  }
  return j;
}

std::vector<ScoredArch> batch_score(std::span<const Architecture> archs,
                                    const SearchSpaceDescriptor& space, unsigned threads) {
  std::vector<ScoredArch> out(archs.size());
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      ScoredArch& r = out[i];
      r.index = i;
      r.id = archs[i].encoding;
      try {
        r.sed = sed(archs[i], space).sed;
      } catch (const ValidationError& e) {
        r.error = e.what();
      }
    }
  };
  const std::size_t n = archs.size();
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
  if (workers <= 1) {
    work(0, n);
    return out;
  }
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t lo = w * chunk;
      const std::size_t hi = std::min(n, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(work, lo, hi);
    }
  }
  return out;
}

unsigned default_threads() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SED_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return std::min<unsigned>(static_cast<unsigned>(v), hw);
  }
  return hw;
}

}  // namespace sednas
