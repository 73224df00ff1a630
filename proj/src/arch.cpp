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

#include "sednas/arch.hpp"

#include <algorithm>
#include <sstream>

namespace sednas {

namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

std::string join_messages(const std::vector<Violation>& vs) {
  std::ostringstream os;
  os << "invalid architecture";
  for (std::size_t i = 0; i < vs.size(); ++i) {
    os << (i == 0 ? ": " : "; ") << vs[i].message;
  }
  return os.str();
}

}  // namespace

KernelSpec effective_kernel(const KernelSpec& kernel) {
  KernelSpec out = kernel;
  const int extra = kernel.dilation - 1;
  out.k_w = kernel.k_w + (kernel.k_w - 1) * extra;
  out.k_h = kernel.k_h + (kernel.k_h - 1) * extra;
  out.dilation = 1;
  return out;
}

bool dominates(const KernelSpec& kernel, const PoolSpec& pool,
               const StrideSpec& pool_stride) {
  return kernel.k_w >= ceil_div(pool.o_w, pool_stride.s_1) &&
         kernel.k_h >= ceil_div(pool.o_h, pool_stride.s_2);
}

std::string describe(const OpKind& op) {
  switch (op.tag) {
    case OpTag::none:
      return "none";
    case OpTag::skip:
      return "skip";
    case OpTag::conv: {
      std::string s = "conv" + std::to_string(op.kernel.k_w) + "x" +
                       std::to_string(op.kernel.k_h);
      if (op.kernel.k_c != 1) s += "x" + std::to_string(op.kernel.k_c);
      return s;
    }
    case OpTag::pool:
      return std::string(op.pool.kind == PoolKind::max ? "maxpool" : "avgpool") +
             std::to_string(op.pool.o_w) + "x" + std::to_string(op.pool.o_h);
    case OpTag::other:
      return "other:" + op.label;
  }
  return "?";
}

std::string to_string(EncodingFormat f) {
  switch (f) {
    case EncodingFormat::tss_cell_string:
      return "tss_cell_string";
    case EncodingFormat::darts_genotype:
      return "darts_genotype";
    case EncodingFormat::generic_json:
      return "generic_json";
  }
  return "generic_json";
}

std::optional<EncodingFormat> encoding_format_from_string(const std::string& s) {
  if (s == "tss_cell_string") return EncodingFormat::tss_cell_string;
  if (s == "darts_genotype") return EncodingFormat::darts_genotype;
  if (s == "generic_json") return EncodingFormat::generic_json;
  return std::nullopt;
}

std::string to_string(CellType c) {
  return c == CellType::reduce ? "reduce" : "normal";
}

SearchSpaceDescriptor SearchSpaceDescriptor::make(
    std::string id, std::vector<OpDef> ops, std::vector<Stage> skeleton,
    std::map<CellType, int> cell_slots, EncodingFormat encoding,
    bool count_none) {
  SearchSpaceDescriptor s;
  s.id_ = std::move(id);
  s.ops_ = std::move(ops);
  s.skeleton_ = std::move(skeleton);
  s.cell_slots_ = std::move(cell_slots);
  s.encoding_ = encoding;
  s.count_none_ = count_none;

  for (auto& def : s.ops_) {
    if (def.kind.tag == OpTag::conv) def.kind.kernel = effective_kernel(def.kind.kernel);
    s.opt_.insert(def.kind);
    switch (def.kind.tag) {
      case OpTag::conv:
        if (std::find(s.kernels_.begin(), s.kernels_.end(), def.kind.kernel) ==
            s.kernels_.end()) {
          s.kernels_.push_back(def.kind.kernel);
        }
        break;
      case OpTag::pool:
        if (std::find(s.pools_.begin(), s.pools_.end(), def.kind.pool) ==
            s.pools_.end()) {
          s.pools_.push_back(def.kind.pool);
        }
        break;
      case OpTag::skip:
        s.has_skip_ = true;
        break;
      default:
        break;
    }
  }
  // Most involved features first; ties by width, then height.
  std::sort(s.kernels_.begin(), s.kernels_.end(),
            [](const KernelSpec& a, const KernelSpec& b) {
              if (a.features() != b.features()) return a.features() > b.features();
              if (a.k_w != b.k_w) return a.k_w > b.k_w;
              if (a.k_h != b.k_h) return a.k_h > b.k_h;
              return a.k_c > b.k_c;
            });
  std::sort(s.pools_.begin(), s.pools_.end(),
            [](const PoolSpec& a, const PoolSpec& b) {
              if (a.features() != b.features()) return a.features() > b.features();
              if (a.o_w != b.o_w) return a.o_w > b.o_w;
              if (a.o_h != b.o_h) return a.o_h > b.o_h;
              return a.kind < b.kind;
            });
  s.has_pool_ = !s.pools_.empty();
  return s;
}

int SearchSpaceDescriptor::block_count() const {
  int n = 0;
  for (const auto& st : skeleton_) n += st.repeat;
  return n;
}

std::vector<Stage> SearchSpaceDescriptor::expanded_skeleton() const {
  std::vector<Stage> out;
  out.reserve(static_cast<std::size_t>(std::max(0, block_count())));
  for (const auto& st : skeleton_) {
    for (int i = 0; i < st.repeat; ++i) {
      Stage one = st;
      one.repeat = 1;
      out.push_back(one);
    }
  }
  return out;
}

const OpDef* SearchSpaceDescriptor::find_op(const std::string& name) const {
  for (const auto& d : ops_) {
    if (d.name == name) return &d;
  }
  return nullptr;
}

const OpDef* SearchSpaceDescriptor::find_op(const OpKind& kind) const {
  for (const auto& d : ops_) {
    if (d.kind == kind) return &d;
  }
  return nullptr;
}

SearchSpaceDescriptor SearchSpaceDescriptor::with_count_none(bool v) const {
  SearchSpaceDescriptor s = *this;
  s.count_none_ = v;
  return s;
}

int Block::count(const OpKind& op) const {
  auto it = op_counts.find(op);
  return it == op_counts.end() ? 0 : it->second;
}

int Block::total_ops() const {
  int n = 0;
  for (const auto& [op, c] : op_counts) n += c;
  return n;
}

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::runtime_error(join_messages(violations)),
      violations_(std::move(violations)) {}

std::vector<Violation> validate(const Architecture& arch,
                                const SearchSpaceDescriptor& space) {
  std::vector<Violation> out;
  if (!arch.space_id.empty() && !space.id().empty() && arch.space_id != space.id()) {
    out.push_back({ViolationKind::space_mismatch, -1,
                   "architecture belongs to space '" + arch.space_id +
                       "', not '" + space.id() + "'"});
  }
  if (arch.blocks.empty()) {
    out.push_back({ViolationKind::empty_architecture, -1, "empty architecture"});
    return out;
  }
  for (std::size_t i = 0; i < arch.blocks.size(); ++i) {
    const Block& b = arch.blocks[i];
    const int bi = static_cast<int>(i);
    const std::string where = "block " + std::to_string(i) + ": ";
    for (const auto& [op, c] : b.op_counts) {
      if (c < 0) {
        out.push_back({ViolationKind::negative_count, bi,
                       where + "negative count for " + describe(op)});
      }
      if (!space.opt().contains(op)) {
        out.push_back({ViolationKind::unknown_operation, bi,
                       where + "unknown operation " + describe(op)});
      }
    }
    if (b.c_in < 1 || b.c_out < 1 || b.f_in < 1 || b.f_out < 1 ||
        b.pool_stride.s_1 < 1 || b.pool_stride.s_2 < 1) {
      out.push_back({ViolationKind::bad_geometry, bi,
                     where + "channel, feature and stride counts must be >= 1"});
    }
    auto slots = space.cell_slots().find(b.cell);
    if (slots != space.cell_slots().end() && b.total_ops() != slots->second) {
      out.push_back({ViolationKind::slot_count_mismatch, bi,
                     where + "has " + std::to_string(b.total_ops()) +
                         " operations, " + to_string(b.cell) + " cell declares " +
                         std::to_string(slots->second)});
    }
  }
  return out;
}

void require_valid(const Architecture& arch, const SearchSpaceDescriptor& space) {
  auto vs = validate(arch, space);
  if (!vs.empty()) throw ValidationError(std::move(vs));
}

SearchSpaceDescriptor tss_space() {
  std::vector<OpDef> ops = {
      {"none", OpKind::none()},
      {"skip_connect", OpKind::skip()},
      {"nor_conv_1x1", OpKind::conv({1, 1, 1, 1})},
      {"nor_conv_3x3", OpKind::conv({3, 3, 1, 1})},
      {"avg_pool_3x3", OpKind::pool_op({3, 3, PoolKind::avg})},
  };
  std::vector<Stage> skeleton = {
      {5, CellType::normal, 16, 16, 32 * 32, 32 * 32, {1, 1, 0}},
      {5, CellType::normal, 32, 32, 16 * 16, 16 * 16, {1, 1, 0}},
      {5, CellType::normal, 64, 64, 8 * 8, 8 * 8, {1, 1, 0}},
  };
  return SearchSpaceDescriptor::make("nats-tss", std::move(ops), std::move(skeleton),
                                     {{CellType::normal, 6}},
                                     EncodingFormat::tss_cell_string);
}

SearchSpaceDescriptor darts_space(int cells, int init_channels) {
  std::vector<OpDef> ops = {
      {"none", OpKind::none(), false},
      {"max_pool_3x3", OpKind::pool_op({3, 3, PoolKind::max})},
      {"avg_pool_3x3", OpKind::pool_op({3, 3, PoolKind::avg})},
      {"skip_connect", OpKind::skip()},
      {"sep_conv_3x3", OpKind::conv({3, 3, 1, 1})},
      {"sep_conv_5x5", OpKind::conv({5, 5, 1, 1})},
      {"dil_conv_3x3", OpKind::conv({3, 3, 1, 2})},
      {"dil_conv_5x5", OpKind::conv({5, 5, 1, 2})},
  };
  constexpr int kMultiplier = 4;  // intermediate nodes concatenated per cell
  const int r1 = cells / 3;
  const int r2 = 2 * cells / 3;
  std::vector<Stage> skeleton;
  int c = init_channels;
  std::int64_t f = 32 * 32;
  int c_prev = 3 * init_channels;  // stem output
  auto add_normal = [&](int repeat) {
    if (repeat <= 0) return;
    skeleton.push_back({repeat, CellType::normal, c_prev, kMultiplier * c, f, f, {1, 1, 0}});
    c_prev = kMultiplier * c;
  };
  auto add_reduce = [&] {
    c *= 2;
    skeleton.push_back({1, CellType::reduce, c_prev, kMultiplier * c, f, f / 4, {2, 2, 0}});
    f /= 4;
    c_prev = kMultiplier * c;
  };
  // Stages with a differing c_in for the first cell are split so every
  // block keeps exact bookkeeping.
  auto add_normal_run = [&](int repeat) {
    if (repeat <= 0) return;
    add_normal(1);
    add_normal(repeat - 1);
  };
  add_normal_run(r1);
  add_reduce();
  add_normal_run(r2 - r1 - 1);
  add_reduce();
  add_normal_run(cells - r2 - 1);
  return SearchSpaceDescriptor::make(
      cells == 20 ? "darts" : "darts-" + std::to_string(cells), std::move(ops),
      std::move(skeleton), {{CellType::normal, 8}, {CellType::reduce, 8}},
      EncodingFormat::darts_genotype);
}

}  // namespace sednas
