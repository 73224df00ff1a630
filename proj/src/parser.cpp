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

#include "sednas/parser.hpp"

#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

namespace sednas {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::pair<std::size_t, std::size_t> trimmed_range(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return {b, e};
}

std::vector<Block> tile_cells(const SearchSpaceDescriptor& space,
                              const std::map<OpKind, int>& normal,
                              const std::map<OpKind, int>* reduce) {
  std::vector<Block> blocks;
  for (const Stage& st : space.expanded_skeleton()) {
    if (st.cell == CellType::reduce && reduce == nullptr) continue;
    Block b;
    b.op_counts = st.cell == CellType::reduce ? *reduce : normal;
    b.c_in = st.c_in;
    b.c_out = st.c_out;
    b.f_in = st.f_in;
    b.f_out = st.f_out;
    b.cell = st.cell;
    b.pool_stride = st.pool_stride;
    blocks.push_back(std::move(b));
  }
  return blocks;
}

// ---------------------------------------------------------------------------
// Python literal reader for DARTS genotype reprs.

struct PyNode {
  enum class Kind { str, num, seq, call } kind = Kind::seq;
  std::string text;  // string value or call name
  long long num = 0;
  std::vector<PyNode> items;
  std::vector<std::pair<std::string, PyNode>> kwargs;
  std::size_t offset = 0;
};

class PyReader {
 public:
  explicit PyReader(std::string_view s) : s_(s) {}

  PyNode read_top() {
    PyNode n = value();
    ws();
    if (pos_ != s_.size()) throw ParseError("trailing characters in genotype", pos_);
    return n;
  }

 private:
  void ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) {
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
    ++pos_;
  }

  PyNode value() {
    if (++depth_ > 64) throw ParseError("genotype nested too deeply", pos_);
    ws();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of genotype", pos_);
    PyNode n;
    n.offset = pos_;
    const char c = s_[pos_];
    if (c == '[' || c == '(') {
      const char close = c == '[' ? ']' : ')';
      ++pos_;
      n.kind = PyNode::Kind::seq;
      while (!peek(close)) {
        n.items.push_back(value());
        if (peek(',')) {
          ++pos_;
        } else if (!peek(close)) {
          throw ParseError(std::string("expected ',' or '") + close + "'", pos_);
        }
      }
      ++pos_;
    } else if (c == '\'' || c == '"') {
      ++pos_;
      const std::size_t start = pos_;
      while (pos_ < s_.size() && s_[pos_] != c) ++pos_;
      if (pos_ >= s_.size()) throw ParseError("unterminated string", start - 1);
      n.kind = PyNode::Kind::str;
      n.text = std::string(s_.substr(start, pos_ - start));
      ++pos_;
    } else if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
      const char* first = s_.data() + pos_;
      const char* last = s_.data() + s_.size();
      auto [ptr, ec] = std::from_chars(first, last, n.num);
      if (ec != std::errc{}) throw ParseError("bad integer", pos_);
      pos_ += static_cast<std::size_t>(ptr - first);
      n.kind = PyNode::Kind::num;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        ++pos_;
      }
      n.kind = PyNode::Kind::call;
      n.text = std::string(s_.substr(start, pos_ - start));
      expect('(');
      while (!peek(')')) {
        ws();
        const std::size_t arg_start = pos_;
        std::size_t p = pos_;
        while (p < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[p])) || s_[p] == '_')) {
          ++p;
        }
        std::size_t q = p;
        while (q < s_.size() && std::isspace(static_cast<unsigned char>(s_[q]))) ++q;
        if (p > arg_start && q < s_.size() && s_[q] == '=') {
          std::string key(s_.substr(arg_start, p - arg_start));
          pos_ = q + 1;
          n.kwargs.emplace_back(std::move(key), value());
        } else {
          n.items.push_back(value());
        }
        if (peek(',')) {
          ++pos_;
        } else if (!peek(')')) {
          throw ParseError("expected ',' or ')'", pos_);
        }
      }
      ++pos_;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }
    --depth_;
    return n;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

bool is_pair_node(const PyNode& n) {
  return n.kind == PyNode::Kind::seq && n.items.size() == 2 &&
         n.items[0].kind == PyNode::Kind::str && n.items[1].kind == PyNode::Kind::num;
}

DartsCell cell_from_py(const PyNode& list, std::size_t base) {
  if (list.kind != PyNode::Kind::seq) {
    throw ParseError("cell must be a list of (op, input) pairs", base + list.offset);
  }
  DartsCell cell;
  const bool grouped = !list.items.empty() && !list.items[0].items.empty() &&
                       list.items[0].items[0].kind == PyNode::Kind::seq;
  if (grouped) {
    for (std::size_t node = 0; node < list.items.size(); ++node) {
      const PyNode& group = list.items[node];
      if (group.kind != PyNode::Kind::seq) {
        throw ParseError("node must be a list of inputs", base + group.offset);
      }
      if (group.items.size() != 2) {
        throw ParseError("arity mismatch: node " + std::to_string(node) + " has " +
                             std::to_string(group.items.size()) + " inputs, expected 2",
                         base + group.offset);
      }
      for (const PyNode& e : group.items) {
        if (!is_pair_node(e)) throw ParseError("expected (op, input) pair", base + e.offset);
        cell.emplace_back(e.items[0].text, static_cast<int>(e.items[1].num));
      }
    }
  } else {
    for (const PyNode& e : list.items) {
      if (!is_pair_node(e)) throw ParseError("expected (op, input) pair", base + e.offset);
      cell.emplace_back(e.items[0].text, static_cast<int>(e.items[1].num));
    }
    if (cell.size() % 2 != 0) {
      throw ParseError("arity mismatch: node " + std::to_string(cell.size() / 2) +
                           " has 1 input, expected 2",
                       base + list.items.back().offset);
    }
  }
  return cell;
}

PyNode py_from_json(const json& j) {
  PyNode n;
  if (j.is_string()) {
    n.kind = PyNode::Kind::str;
    n.text = j.get<std::string>();
  } else if (j.is_number_integer()) {
    n.kind = PyNode::Kind::num;
    n.num = j.get<long long>();
  } else if (j.is_array()) {
    n.kind = PyNode::Kind::seq;
    for (const auto& e : j) n.items.push_back(py_from_json(e));
  } else {
    n.kind = PyNode::Kind::call;  // never a valid cell element
  }
  return n;
}

std::map<OpKind, int> tally_darts_cell(const DartsCell& cell,
                                       const SearchSpaceDescriptor& space,
                                       const char* which) {
  std::map<OpKind, int> counts;
  for (std::size_t i = 0; i < cell.size(); ++i) {
    const auto& [name, input] = cell[i];
    const OpDef* def = space.find_op(name);
    if (def == nullptr) {
      throw ParseError("unknown operation " + name,
                       std::string("$.") + which + "[" + std::to_string(i) + "]");
    }
    const int node = static_cast<int>(i / 2);
    if (input < 0 || input >= node + 2) {
      throw ParseError("input " + std::to_string(input) + " out of range for node " +
                           std::to_string(node),
                       std::string("$.") + which + "[" + std::to_string(i) + "]");
    }
    ++counts[def->kind];
  }
  return counts;
}

// ---------------------------------------------------------------------------
// JSON schema helpers.

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ParseError("expected object", path);
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing field '") + key + "'", path + "." + key);
  return *it;
}

long long get_int(const json& j, const std::string& path, long long min_value) {
  if (!j.is_number_integer()) throw ParseError("expected integer", path);
  const long long v = j.get<long long>();
  if (v < min_value) {
    throw ParseError("value must be >= " + std::to_string(min_value), path);
  }
  return v;
}

long long int_field(const json& obj, const char* key, const std::string& path,
                    long long min_value, std::optional<long long> fallback = std::nullopt) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (fallback) return *fallback;
    throw ParseError(std::string("missing field '") + key + "'", path + "." + key);
  }
  return get_int(*it, path + "." + key, min_value);
}

std::string string_field(const json& obj, const char* key, const std::string& path,
                         std::optional<std::string> fallback = std::nullopt) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (fallback) return *fallback;
    throw ParseError(std::string("missing field '") + key + "'", path + "." + key);
  }
  if (!it->is_string()) throw ParseError("expected string", path + "." + key);
  return it->get<std::string>();
}

CellType cell_field(const json& obj, const std::string& path) {
  const std::string c = string_field(obj, "cell", path, "normal");
  if (c == "normal") return CellType::normal;
  if (c == "reduce") return CellType::reduce;
  throw ParseError("cell must be 'normal' or 'reduce'", path + ".cell");
}

StrideSpec stride_field(const json& obj, const std::string& path, StrideSpec fallback) {
  auto it = obj.find("pool_stride");
  if (it == obj.end()) return fallback;
  const std::string p = path + ".pool_stride";
  if (!it->is_array() || it->size() < 2 || it->size() > 3) {
    throw ParseError("pool_stride must be [s1, s2] or [s1, s2, s3]", p);
  }
  StrideSpec s;
  s.s_1 = static_cast<int>(get_int((*it)[0], p + "[0]", 1));
  s.s_2 = static_cast<int>(get_int((*it)[1], p + "[1]", 1));
  if (it->size() == 3) s.s_3 = static_cast<int>(get_int((*it)[2], p + "[2]", 0));
  return s;
}

OpDef op_def_from_json(const json& j, const std::string& path) {
  OpDef def;
  def.name = string_field(j, "name", path);
  const std::string type = string_field(j, "type", path);
  if (auto it = j.find("sample"); it != j.end()) {
    if (!it->is_boolean()) throw ParseError("expected boolean", path + ".sample");
    def.sampleable = it->get<bool>();
  }
  if (type == "none") {
    def.kind = OpKind::none();
  } else if (type == "skip") {
    def.kind = OpKind::skip();
  } else if (type == "conv") {
    const json& k = require(j, "kernel", path);
    const std::string kp = path + ".kernel";
    if (!k.is_array() || k.size() < 2 || k.size() > 3) {
      throw ParseError("kernel must be [k_w, k_h] or [k_w, k_h, k_c]", kp);
    }
    KernelSpec ks;
    ks.k_w = static_cast<int>(get_int(k[0], kp + "[0]", 1));
    ks.k_h = static_cast<int>(get_int(k[1], kp + "[1]", 1));
    if (k.size() == 3) ks.k_c = static_cast<int>(get_int(k[2], kp + "[2]", 1));
    ks.dilation = static_cast<int>(int_field(j, "dilation", path, 1, 1));
    def.kind = OpKind::conv(ks);
  } else if (type == "pool") {
    const json& p = require(j, "pool", path);
    const std::string pp = path + ".pool";
    if (!p.is_array() || p.size() != 2) throw ParseError("pool must be [o_w, o_h]", pp);
    PoolSpec ps;
    ps.o_w = static_cast<int>(get_int(p[0], pp + "[0]", 1));
    ps.o_h = static_cast<int>(get_int(p[1], pp + "[1]", 1));
    const std::string kind = string_field(j, "pool_kind", path, "max");
    if (kind == "max") {
      ps.kind = PoolKind::max;
    } else if (kind == "avg") {
      ps.kind = PoolKind::avg;
    } else {
      throw ParseError("pool_kind must be 'max' or 'avg'", path + ".pool_kind");
    }
    def.kind = OpKind::pool_op(ps);
  } else if (type == "other") {
    def.kind = OpKind::other(def.name);
  } else {
    throw ParseError("unknown op type '" + type + "'", path + ".type");
  }
  return def;
}

ordered_json op_def_to_json(const OpDef& def) {
  ordered_json j;
  j["name"] = def.name;
  switch (def.kind.tag) {
    case OpTag::none:
      j["type"] = "none";
      break;
    case OpTag::skip:
      j["type"] = "skip";
      break;
    case OpTag::conv:
      j["type"] = "conv";
      j["kernel"] = {def.kind.kernel.k_w, def.kind.kernel.k_h, def.kind.kernel.k_c};
      break;
    case OpTag::pool:
      j["type"] = "pool";
      j["pool"] = {def.kind.pool.o_w, def.kind.pool.o_h};
      j["pool_kind"] = def.kind.pool.kind == PoolKind::max ? "max" : "avg";
      break;
    case OpTag::other:
      j["type"] = "other";
      break;
  }
  if (!def.sampleable) j["sample"] = false;
  return j;
}

std::map<OpKind, int> counts_from_json(const json& ops, const SearchSpaceDescriptor& space,
                                       const std::string& path) {
  if (!ops.is_object()) throw ParseError("ops must be an object of name -> count", path);
  std::map<OpKind, int> counts;
  for (const auto& [name, value] : ops.items()) {
    const std::string p = path + "." + name;
    const long long c = get_int(value, p, 0);
    const OpDef* def = space.find_op(name);
    if (def == nullptr) {
      // Surfaces as an arch-model violation rather than a schema error.
      if (c > 0) counts[OpKind::other(name)] += static_cast<int>(c);
      continue;
    }
    if (c > 0) counts[def->kind] += static_cast<int>(c);
  }
  return counts;
}

Architecture arch_from_json(const json& a, const SearchSpaceDescriptor& space,
                            const std::string& path) {
  if (!a.is_object()) throw ParseError("expected object", path);
  Architecture arch;
  arch.space_id = string_field(a, "space_id", path, space.id());
  arch.encoding = string_field(a, "encoding", path, "");
  const std::vector<Stage> slots = space.expanded_skeleton();

  if (auto it = a.find("blocks"); it != a.end()) {
    const std::string bp = path + ".blocks";
    if (!it->is_array()) throw ParseError("expected array", bp);
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& bj = (*it)[i];
      const std::string p = bp + "[" + std::to_string(i) + "]";
      if (!bj.is_object()) throw ParseError("expected object", p);
      const Stage* st = i < slots.size() ? &slots[i] : nullptr;
      auto geom = [&](const char* key) -> std::optional<long long> {
        if (st == nullptr) return std::nullopt;
        const std::string k = key;
        if (k == "c_in") return st->c_in;
        if (k == "c_out") return st->c_out;
        if (k == "f_in") return st->f_in;
        return st->f_out;
      };
      Block b;
      b.op_counts = counts_from_json(require(bj, "ops", p), space, p + ".ops");
      b.c_in = static_cast<int>(int_field(bj, "c_in", p, 1, geom("c_in")));
      b.c_out = static_cast<int>(int_field(bj, "c_out", p, 1, geom("c_out")));
      b.f_in = int_field(bj, "f_in", p, 1, geom("f_in"));
      b.f_out = int_field(bj, "f_out", p, 1, geom("f_out"));
      if (bj.contains("cell")) {
        b.cell = cell_field(bj, p);
      } else if (st != nullptr) {
        b.cell = st->cell;
      }
      b.pool_stride = stride_field(bj, p, st != nullptr ? st->pool_stride : StrideSpec{});
      arch.blocks.push_back(std::move(b));
    }
  } else if (auto cells = a.find("cells"); cells != a.end()) {
    const std::string cp = path + ".cells";
    if (!cells->is_object()) throw ParseError("expected object", cp);
    std::map<OpKind, int> normal;
    std::map<OpKind, int> reduce;
    const bool has_reduce = cells->contains("reduce");
    if (cells->contains("normal")) normal = counts_from_json((*cells)["normal"], space, cp + ".normal");
    if (has_reduce) reduce = counts_from_json((*cells)["reduce"], space, cp + ".reduce");
    arch.blocks = tile_cells(space, normal, has_reduce ? &reduce : nullptr);
  } else {
    throw ParseError("missing field 'blocks'", path + ".blocks");
  }
  return arch;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(),
                     static_cast<std::size_t>(e.byte));
  }
}

void check_schema_version(const json& doc, const std::string& path) {
  if (auto it = doc.find("schema"); it != doc.end()) {
    if (!it->is_number_integer() || it->get<int>() != 1) {
      throw ParseError("unsupported schema version (expected 1)", path + ".schema");
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------

Architecture parse_tss(std::string_view encoding, const SearchSpaceDescriptor& space) {
  const auto [begin, end] = trimmed_range(encoding);
  std::size_t pos = begin;
  auto fail = [&](const std::string& msg, std::size_t at) -> ParseError {
    return ParseError(msg, at);
  };
  auto expect = [&](char c) {
    if (pos >= end || encoding[pos] != c) {
      throw fail(std::string("expected '") + c + "'", pos);
    }
    ++pos;
  };

  std::map<OpKind, int> counts;
  int node = 1;
  int edge = 0;
  expect('|');
  while (true) {
    const std::size_t tok_start = pos;
    while (pos < end && encoding[pos] != '~' && encoding[pos] != '|' && encoding[pos] != '+') {
      ++pos;
    }
    if (pos == tok_start) throw fail("empty operation name", pos);
    const std::string token(encoding.substr(tok_start, pos - tok_start));
    expect('~');
    const std::size_t idx_start = pos;
    int idx = 0;
    auto [ptr, ec] = std::from_chars(encoding.data() + pos, encoding.data() + end, idx);
    if (ec != std::errc{} || ptr == encoding.data() + pos) {
      throw fail("expected input index", idx_start);
    }
    pos = static_cast<std::size_t>(ptr - encoding.data());
    if (idx != edge) {
      throw fail("edge " + std::to_string(edge) + " of node " + std::to_string(node) +
                     " must read from node " + std::to_string(edge) + ", got " +
                     std::to_string(idx),
                 idx_start);
    }
    const OpDef* def = space.find_op(token);
    if (def == nullptr) throw fail("unknown operation " + token, tok_start);
    ++counts[def->kind];
    expect('|');
    ++edge;
    if (pos == end) {
      if (edge != node) {
        throw fail("node " + std::to_string(node) + " has " + std::to_string(edge) +
                       " inputs, expected " + std::to_string(node),
                   pos);
      }
      break;
    }
    if (encoding[pos] == '+') {
      if (edge != node) {
        throw fail("node " + std::to_string(node) + " has " + std::to_string(edge) +
                       " inputs, expected " + std::to_string(node),
                   pos);
      }
      ++pos;
      expect('|');
      ++node;
      edge = 0;
      if (node > 64) throw fail("too many nodes", pos);
    }
  }

  const auto slots = space.cell_slots().find(CellType::normal);
  const int edges = node * (node + 1) / 2;
  if (slots != space.cell_slots().end() && slots->second > 0 && edges != slots->second) {
    throw fail("cell string has " + std::to_string(edges) + " edges, space expects " +
                   std::to_string(slots->second),
               end);
  }

  Architecture arch;
  arch.space_id = space.id();
  arch.encoding = std::string(encoding.substr(begin, end - begin));
  arch.blocks = tile_cells(space, counts, nullptr);
  require_valid(arch, space);
  return arch;
}

DartsGenotype parse_darts_genotype(std::string_view genotype) {
  const auto [begin, end] = trimmed_range(genotype);
  const std::string_view body = genotype.substr(begin, end - begin);
  DartsGenotype g;
  if (!body.empty() && body.front() == '{') {
    json doc = parse_json_text(body);
    const json& normal = require(doc, "normal", "$");
    const json& reduce = require(doc, "reduce", "$");
    g.normal = cell_from_py(py_from_json(normal), 0);
    g.reduce = cell_from_py(py_from_json(reduce), 0);
    return g;
  }
  PyNode top = PyReader(body).read_top();
  if (top.kind != PyNode::Kind::call) {
    throw ParseError("expected Genotype(normal=..., reduce=...)", begin);
  }
  const PyNode* normal = nullptr;
  const PyNode* reduce = nullptr;
  for (const auto& [key, value] : top.kwargs) {
    if (key == "normal") normal = &value;
    if (key == "reduce") reduce = &value;
  }
  // Positional form: Genotype(normal, normal_concat, reduce, reduce_concat).
  if (normal == nullptr && !top.items.empty()) normal = &top.items[0];
  if (reduce == nullptr && top.items.size() >= 3) reduce = &top.items[2];
  if (normal == nullptr) throw ParseError("genotype has no normal cell", begin);
  if (reduce == nullptr) throw ParseError("genotype has no reduce cell", begin);
  g.normal = cell_from_py(*normal, begin);
  g.reduce = cell_from_py(*reduce, begin);
  return g;
}

std::string to_string(const DartsGenotype& g) {
  auto cell = [](const DartsCell& c) {
    std::string s = "[";
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) s += ", ";
      s += "('" + c[i].first + "', " + std::to_string(c[i].second) + ")";
    }
    return s + "]";
  };
  auto concat = [](const DartsCell& c) {
    return "[" + [&] {
      std::string s;
      for (std::size_t n = 0; n < c.size() / 2; ++n) {
        if (n) s += ", ";
        s += std::to_string(n + 2);
      }
      return s;
    }() + "]";
  };
  return "Genotype(normal=" + cell(g.normal) + ", normal_concat=" + concat(g.normal) +
         ", reduce=" + cell(g.reduce) + ", reduce_concat=" + concat(g.reduce) + ")";
}

Architecture parse_darts(std::string_view genotype, const SearchSpaceDescriptor& space) {
  const DartsGenotype g = parse_darts_genotype(genotype);
  const auto normal = tally_darts_cell(g.normal, space, "normal");
  const auto reduce = tally_darts_cell(g.reduce, space, "reduce");
  Architecture arch;
  arch.space_id = space.id();
  const auto [begin, end] = trimmed_range(genotype);
  arch.encoding = std::string(genotype.substr(begin, end - begin));
  arch.blocks = tile_cells(space, normal, &reduce);
  require_valid(arch, space);
  return arch;
}

SearchSpaceDescriptor parse_space(const json& doc) {
  const std::string path = "$";
  if (!doc.is_object()) throw ParseError("expected object", path);
  check_schema_version(doc, path);
  const std::string id = string_field(doc, "id", path, "custom");
  const auto enc_name = string_field(doc, "encoding", path, "generic_json");
  const auto enc = encoding_format_from_string(enc_name);
  if (!enc) throw ParseError("unknown encoding '" + enc_name + "'", path + ".encoding");
  bool count_none = true;
  if (auto it = doc.find("count_none"); it != doc.end()) {
    if (!it->is_boolean()) throw ParseError("expected boolean", path + ".count_none");
    count_none = it->get<bool>();
  }

  const json& ops = require(doc, "ops", path);
  if (!ops.is_array() || ops.empty()) throw ParseError("ops must be a non-empty array", path + ".ops");
  std::vector<OpDef> defs;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const std::string p = path + ".ops[" + std::to_string(i) + "]";
    OpDef def = op_def_from_json(ops[i], p);
    for (const auto& d : defs) {
      if (d.name == def.name) throw ParseError("duplicate op name '" + def.name + "'", p + ".name");
    }
    defs.push_back(std::move(def));
  }

  std::map<CellType, int> cell_slots;
  if (auto it = doc.find("cells"); it != doc.end()) {
    const std::string cp = path + ".cells";
    if (!it->is_object()) throw ParseError("expected object", cp);
    for (const auto& [name, v] : it->items()) {
      CellType ct;
      if (name == "normal") {
        ct = CellType::normal;
      } else if (name == "reduce") {
        ct = CellType::reduce;
      } else {
        throw ParseError("cell must be 'normal' or 'reduce'", cp + "." + name);
      }
      cell_slots[ct] = static_cast<int>(get_int(v, cp + "." + name, 0));
    }
  }

  const json& sk = require(doc, "skeleton", path);
  const std::string sp = path + ".skeleton";
  if (!sk.is_array() || sk.empty()) throw ParseError("skeleton must be a non-empty array", sp);
  std::vector<Stage> stages;
  for (std::size_t i = 0; i < sk.size(); ++i) {
    const std::string p = sp + "[" + std::to_string(i) + "]";
    const json& sj = sk[i];
    if (!sj.is_object()) throw ParseError("expected object", p);
    Stage st;
    st.repeat = static_cast<int>(int_field(sj, "repeat", p, 1, 1));
    st.cell = cell_field(sj, p);
    st.c_out = static_cast<int>(int_field(sj, "c_out", p, 1));
    st.c_in = static_cast<int>(int_field(sj, "c_in", p, 1, st.c_out));
    st.f_in = int_field(sj, "f_in", p, 1);
    st.f_out = int_field(sj, "f_out", p, 1, st.f_in);
    st.pool_stride = stride_field(sj, p, StrideSpec{});
    stages.push_back(st);
  }
  return SearchSpaceDescriptor::make(id, std::move(defs), std::move(stages),
                                     std::move(cell_slots), *enc, count_none);
}

SearchSpaceDescriptor parse_space(std::string_view json_text) {
  return parse_space(parse_json_text(json_text));
}

ordered_json space_to_json(const SearchSpaceDescriptor& space) {
  ordered_json j;
  j["schema"] = 1;
  j["id"] = space.id();
  j["encoding"] = to_string(space.encoding());
  j["count_none"] = space.count_none();
  j["ops"] = ordered_json::array();
  for (const auto& d : space.ops()) j["ops"].push_back(op_def_to_json(d));
  ordered_json cells = ordered_json::object();
  for (const auto& [ct, n] : space.cell_slots()) cells[to_string(ct)] = n;
  j["cells"] = cells;
  j["skeleton"] = ordered_json::array();
  for (const auto& st : space.skeleton()) {
    ordered_json s;
    s["repeat"] = st.repeat;
    s["cell"] = to_string(st.cell);
    s["c_in"] = st.c_in;
    s["c_out"] = st.c_out;
    s["f_in"] = st.f_in;
    s["f_out"] = st.f_out;
    s["pool_stride"] = {st.pool_stride.s_1, st.pool_stride.s_2, st.pool_stride.s_3};
    j["skeleton"].push_back(s);
  }
  return j;
}

SearchSpaceDescriptor load_space(const std::string& name_or_path) {
  if (name_or_path == "tss" || name_or_path == "nats-tss") return tss_space();
  if (name_or_path == "darts") return darts_space(20);
  if (name_or_path == "darts-search") return darts_space(8, 16);
  if (!std::filesystem::exists(name_or_path)) {
    throw IoError("no such space file or built-in space", name_or_path);
  }
  const json doc = parse_json_text(read_file(name_or_path));
  if (doc.is_object() && doc.contains("space")) {
    check_schema_version(doc, "$");
    return parse_space(doc["space"]);
  }
  return parse_space(doc);
}

GenericDocument parse_generic(std::string_view json_text) {
  const json doc = parse_json_text(json_text);
  if (!doc.is_object()) throw ParseError("expected object", "$");
  check_schema_version(doc, "$");
  const json& space_json = require(doc, "space", "$");
  SearchSpaceDescriptor space = [&] {
    try {
      return parse_space(space_json);
    } catch (const ParseError& e) {
      // Re-root paths under $.space.
      std::string p = e.path();
      if (p.rfind("$", 0) == 0) p = "$.space" + p.substr(1);
      std::string msg = e.what();
      msg = msg.substr(0, msg.rfind(" at "));
      throw ParseError(msg, p);
    }
  }();
  Architecture arch = arch_from_json(require(doc, "arch", "$"), space, "$.arch");
  require_valid(arch, space);
  return {std::move(space), std::move(arch)};
}

std::string serialize(const Architecture& arch, const SearchSpaceDescriptor& space) {
  ordered_json doc;
  doc["schema"] = 1;
  doc["space"] = space_to_json(space);
  ordered_json a;
  a["space_id"] = arch.space_id;
  a["encoding"] = arch.encoding;
  a["blocks"] = ordered_json::array();
  for (const Block& b : arch.blocks) {
    ordered_json bj;
    bj["cell"] = to_string(b.cell);
    bj["c_in"] = b.c_in;
    bj["c_out"] = b.c_out;
    bj["f_in"] = b.f_in;
    bj["f_out"] = b.f_out;
    bj["pool_stride"] = {b.pool_stride.s_1, b.pool_stride.s_2, b.pool_stride.s_3};
    ordered_json ops = ordered_json::object();
    for (const auto& [op, c] : b.op_counts) {
      if (c == 0) continue;
      const OpDef* def = space.find_op(op);
      ops[def != nullptr ? def->name : describe(op)] = c;
    }
    bj["ops"] = ops;
    a["blocks"].push_back(bj);
  }
  doc["arch"] = a;
  return doc.dump(2);
}

Architecture parse_encoding(std::string_view text, const SearchSpaceDescriptor& space) {
  switch (space.encoding()) {
    case EncodingFormat::tss_cell_string:
      return parse_tss(text, space);
    case EncodingFormat::darts_genotype:
      return parse_darts(text, space);
    case EncodingFormat::generic_json: {
      const json doc = parse_json_text(text);
      const bool wrapped = doc.is_object() && doc.contains("arch");
      Architecture arch =
          arch_from_json(wrapped ? doc["arch"] : doc, space, wrapped ? "$.arch" : "$");
      if (arch.encoding.empty()) {
        const auto [b, e] = trimmed_range(text);
        arch.encoding = std::string(text.substr(b, e - b));
      }
      require_valid(arch, space);
      return arch;
    }
  }
  throw ParseError("unsupported encoding", 0);
}

}  // namespace sednas
