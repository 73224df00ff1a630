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

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace sednas {

/// Convolution kernel geometry. `k_c` is the number of channels a single
/// kernel application reads; it only matters for ordering kernels.
struct KernelSpec {
  int k_w = 1;
  int k_h = 1;
  int k_c = 1;
  int dilation = 1;

  /// Entries touched by one application of the kernel.
  std::int64_t features() const {
    return std::int64_t{k_w} * k_h * k_c;
  }

  auto operator<=>(const KernelSpec&) const = default;
};

enum class PoolKind { max, avg };

struct PoolSpec {
  int o_w = 1;
  int o_h = 1;
  PoolKind kind = PoolKind::max;

  std::int64_t features() const { return std::int64_t{o_w} * o_h; }

  auto operator<=>(const PoolSpec&) const = default;
};

struct StrideSpec {
  int s_1 = 1;
  int s_2 = 1;
  int s_3 = 0;

  auto operator<=>(const StrideSpec&) const = default;
};

/// Folds dilation into the kernel's width and height:
/// k' = k + (k - 1)(d - 1). The result always has dilation 1.
KernelSpec effective_kernel(const KernelSpec& kernel);

/// True iff the kernel covers the pooled footprint on both axes, i.e.
/// k_w >= ceil(o_w / s_1) and k_h >= ceil(o_h / s_2). Channels are ignored.
/// Expects a kernel with dilation already folded (see effective_kernel).
bool dominates(const KernelSpec& kernel, const PoolSpec& pool,
               const StrideSpec& pool_stride);

enum class OpTag { none, skip, conv, pool, other };

/// One optional operation of a search space. Convolutions are identified by
/// their effective kernel, so a dilated 3x3 and a plain 5x5 are the same kind.
struct OpKind {
  OpTag tag = OpTag::none;
  KernelSpec kernel{};
  PoolSpec pool{};
  std::string label;

  static OpKind none() { return {}; }
  static OpKind skip() { return {OpTag::skip, {}, {}, {}}; }
  static OpKind conv(const KernelSpec& k) {
    return {OpTag::conv, effective_kernel(k), {}, {}};
  }
  static OpKind pool_op(const PoolSpec& p) { return {OpTag::pool, {}, p, {}}; }
  static OpKind other(std::string name) {
    return {OpTag::other, {}, {}, std::move(name)};
  }

  auto operator<=>(const OpKind&) const = default;
};

/// Short human readable name, e.g. "conv3x3", "avgpool3x3", "skip".
std::string describe(const OpKind& op);

/// A named operation token of an encoding ("nor_conv_3x3") and the kind it
/// denotes.
struct OpDef {
  std::string name;
  OpKind kind;
  bool sampleable = true;
};

enum class CellType { normal, reduce };

/// One stage of the macro skeleton: `repeat` consecutive searched cells that
/// share channel and spatial bookkeeping.
struct Stage {
  int repeat = 1;
  CellType cell = CellType::normal;
  int c_in = 1;
  int c_out = 1;
  std::int64_t f_in = 1;
  std::int64_t f_out = 1;
  StrideSpec pool_stride{};

  bool operator==(const Stage&) const = default;
};

enum class EncodingFormat { tss_cell_string, darts_genotype, generic_json };

std::string to_string(EncodingFormat f);
std::optional<EncodingFormat> encoding_format_from_string(const std::string& s);
std::string to_string(CellType c);

/// Ordered operation inventory and macro structure of a search space.
///
/// Build it with SearchSpaceDescriptor::make; the derived members (opt,
/// kernels, pools, has_skip, has_pool) are computed there and kept consistent
/// with `ops`.
class SearchSpaceDescriptor {
 public:
  /// `cell_slots` maps a cell type to the number of operation slots a cell of
  /// that type has; cell types without an entry are unconstrained.
  static SearchSpaceDescriptor make(std::string id, std::vector<OpDef> ops,
                                    std::vector<Stage> skeleton,
                                    std::map<CellType, int> cell_slots,
                                    EncodingFormat encoding,
                                    bool count_none = true);

  const std::string& id() const { return id_; }
  const std::vector<OpDef>& ops() const { return ops_; }
  const std::set<OpKind>& opt() const { return opt_; }
  /// K_A: distinct effective kernels, most involved features first.
  const std::vector<KernelSpec>& kernels() const { return kernels_; }
  /// O_A: distinct pools, most involved features first.
  const std::vector<PoolSpec>& pools() const { return pools_; }
  bool has_skip() const { return has_skip_; }
  bool has_pool() const { return has_pool_; }
  const std::vector<Stage>& skeleton() const { return skeleton_; }
  const std::map<CellType, int>& cell_slots() const { return cell_slots_; }
  EncodingFormat encoding() const { return encoding_; }
  /// Whether `none` placements count towards the total-operation term.
  bool count_none() const { return count_none_; }

  /// Number of blocks the skeleton expands to.
  int block_count() const;
  /// Per-block stages, one entry per block, in network order.
  std::vector<Stage> expanded_skeleton() const;

  const OpDef* find_op(const std::string& name) const;
  const OpDef* find_op(const OpKind& kind) const;

  SearchSpaceDescriptor with_count_none(bool v) const;

 private:
  std::string id_;
  std::vector<OpDef> ops_;
  std::set<OpKind> opt_;
  std::vector<KernelSpec> kernels_;
  std::vector<PoolSpec> pools_;
  bool has_skip_ = false;
  bool has_pool_ = false;
  std::vector<Stage> skeleton_;
  std::map<CellType, int> cell_slots_;
  EncodingFormat encoding_ = EncodingFormat::generic_json;
  bool count_none_ = true;
};

struct Block {
  std::map<OpKind, int> op_counts;
  int c_in = 1;
  int c_out = 1;
  std::int64_t f_in = 1;
  std::int64_t f_out = 1;
  CellType cell = CellType::normal;
  StrideSpec pool_stride{};

  int count(const OpKind& op) const;
  int total_ops() const;

  bool operator==(const Block&) const = default;
};

struct Architecture {
  std::vector<Block> blocks;
  std::string space_id;
  std::string encoding;

  bool operator==(const Architecture&) const = default;
};

enum class ViolationKind {
  empty_architecture,
  unknown_operation,
  slot_count_mismatch,
  negative_count,
  bad_geometry,
  space_mismatch,
};

struct Violation {
  ViolationKind kind;
  int block = -1;
  std::string message;
};

/// Structural checks of an architecture against its space. Never throws; an
/// empty result means the architecture is valid.
std::vector<Violation> validate(const Architecture& arch,
                                const SearchSpaceDescriptor& space);

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Throws ValidationError unless validate() is clean.
void require_valid(const Architecture& arch, const SearchSpaceDescriptor& space);

/// NATS-Bench topology space: 5 candidate ops on 6 edges, 3 stages of 5 cells
/// at 16/32/64 channels on 32x32 inputs.
SearchSpaceDescriptor tss_space();

/// DARTS space. `cells` is 20 for evaluation networks and 8 for search
/// networks; reduction cells sit at cells/3 and 2*cells/3.
SearchSpaceDescriptor darts_space(int cells = 20, int init_channels = 36);

}  // namespace sednas
