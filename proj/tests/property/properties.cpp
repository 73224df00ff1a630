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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "generators.hpp"
#include "harness.hpp"
#include "sednas/bench.hpp"
#include "sednas/entropy.hpp"
#include "sednas/parser.hpp"
#include "sednas/search.hpp"
#include "sednas/sed.hpp"

namespace sednas::prop {

namespace {

std::string str(const KernelSpec& k) {
  return std::to_string(k.k_w) + "x" + std::to_string(k.k_h) + "d" + std::to_string(k.dilation);
}

std::string str(const PoolSpec& p, const StrideSpec& s) {
  return std::to_string(p.o_w) + "x" + std::to_string(p.o_h) + "/" + std::to_string(s.s_1) + "," +
         std::to_string(s.s_2);
}

bool same(const std::optional<double>& a, const std::optional<double>& b, double tol) {
  if (a.has_value() != b.has_value()) return false;
  return !a || std::abs(*a - *b) <= tol;
}

std::string show(const std::optional<double>& v) {
  std::ostringstream ss;
  ss.precision(17);
  if (v) {
    ss << *v;
  } else {
    ss << "undefined";
  }
  return ss.str();
}

double block_score(const Block& b) {
  return sed(single_block(b), free_space()).per_block.at(0).block_score;
}

std::vector<double> tied_sequence(std::mt19937_64& rng, int n) {
  const int levels = uniform_int(rng, 1, std::max(1, n));
  std::vector<double> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = uniform_int(rng, 0, levels - 1) + 0.25 * uniform_int(rng, 0, 1);
  return v;
}

}  // namespace

std::vector<Outcome> arch_properties(std::uint64_t seed) {
  std::vector<Outcome> out;
  struct DomCase {
    KernelSpec k;
    KernelSpec bigger;
    PoolSpec p;
    PoolSpec bigger_pool;
    StrideSpec s;
  };
  auto gen = [](std::mt19937_64& rng) {
    DomCase c;
    c.k = {uniform_int(rng, 1, 9), uniform_int(rng, 1, 9), uniform_int(rng, 1, 4), 1};
    c.bigger = {c.k.k_w + uniform_int(rng, 0, 4), c.k.k_h + uniform_int(rng, 0, 4), c.k.k_c, 1};
    c.p = {uniform_int(rng, 1, 9), uniform_int(rng, 1, 9), PoolKind::max};
    c.bigger_pool = {c.p.o_w + uniform_int(rng, 0, 4), c.p.o_h + uniform_int(rng, 0, 4), c.p.kind};
    c.s = {uniform_int(rng, 1, 4), uniform_int(rng, 1, 4), 0};
    return c;
  };
  out.push_back(for_all("dominance never lost by enlarging the kernel", 2000, seed + 1, gen,
                        [](const DomCase& c) -> std::string {
                          if (dominates(c.k, c.p, c.s) && !dominates(c.bigger, c.p, c.s)) {
                            return str(c.k) + " -> " + str(c.bigger) + " vs " + str(c.p, c.s);
                          }
                          return {};
                        }));
  out.push_back(for_all("dominance never gained by enlarging the pool", 1000, seed + 2, gen,
                        [](const DomCase& c) -> std::string {
                          if (!dominates(c.k, c.p, c.s) && dominates(c.k, c.bigger_pool, c.s)) {
                            return str(c.k) + " vs " + str(c.p, c.s) + " -> " + str(c.bigger_pool, c.s);
                          }
                          return {};
                        }));
  out.push_back(for_all(
      "stride covering the pool lets every kernel dominate", 500, seed + 3,
      [](std::mt19937_64& rng) {
        DomCase c;
        c.k = {uniform_int(rng, 1, 9), uniform_int(rng, 1, 9), 1, 1};
        c.p = {uniform_int(rng, 1, 6), uniform_int(rng, 1, 6), PoolKind::avg};
        c.s = {c.p.o_w + uniform_int(rng, 0, 3), c.p.o_h + uniform_int(rng, 0, 3), 0};
        return c;
      },
      [](const DomCase& c) -> std::string {
        return dominates(c.k, c.p, c.s) ? "" : str(c.k) + " vs " + str(c.p, c.s);
      }));
  out.push_back(for_all(
      "effective_kernel is idempotent", 500, seed + 4,
      [](std::mt19937_64& rng) {
        return KernelSpec{uniform_int(rng, 1, 9), uniform_int(rng, 1, 9), uniform_int(rng, 1, 8),
                          uniform_int(rng, 1, 4)};
      },
      [](const KernelSpec& k) -> std::string {
        const KernelSpec once = effective_kernel(k);
        return effective_kernel(once) == once && once.dilation == 1 ? "" : str(k);
      }));
  return out;
}

std::vector<Outcome> parser_properties(std::uint64_t seed) {
  std::vector<Outcome> out;
  out.push_back(for_all("generic documents survive serialize then parse", 600, seed + 11,
                        random_space_arch, [](const RandomSpaceArch& r) -> std::string {
                          const GenericDocument doc = parse_generic(serialize(r.arch, r.space));
                          if (!(doc.arch == r.arch)) return "architecture changed";
                          if (space_to_json(doc.space) != space_to_json(r.space)) return "space changed";
                          return {};
                        }));
  const SearchSpaceDescriptor tss = tss_space();
  out.push_back(for_all("every cell-string block holds six edges", 1000, seed + 12, random_tss,
                        [&](const std::string& cell) -> std::string {
                          const Architecture a = parse_tss(cell, tss);
                          if (a.blocks.size() != 15) return cell + ": block count";
                          for (const Block& b : a.blocks) {
                            if (b.total_ops() != 6) return cell + ": edge count";
                          }
                          return {};
                        }));

  const SearchSpaceDescriptor darts = darts_space();
  const std::string valid_darts =
      "Genotype(normal=[('sep_conv_3x3', 0), ('sep_conv_3x3', 1), ('skip_connect', 0), "
      "('sep_conv_3x3', 1), ('skip_connect', 0), ('sep_conv_3x3', 1), ('sep_conv_3x3', 0), "
      "('skip_connect', 2)], normal_concat=[2, 3, 4, 5], reduce=[('max_pool_3x3', 0), "
      "('max_pool_3x3', 1), ('skip_connect', 2), ('max_pool_3x3', 0), ('max_pool_3x3', 0), "
      "('skip_connect', 2), ('skip_connect', 2), ('avg_pool_3x3', 0)], reduce_concat=[2, 3, 4, 5])";
  const std::string valid_generic =
      R"({"schema":1,"space":{"id":"g","ops":[{"name":"c3","type":"conv","kernel":[3,3]},)"
      R"({"name":"p","type":"pool","pool":[3,3]}],"skeleton":[{"c_out":8,"f_in":64,"f_out":64}]},)"
      R"("arch":{"blocks":[{"ops":{"c3":2,"p":1}}]}})";
  auto fuzz_input = [&](std::mt19937_64& rng) {
    std::string s;
    const int mode = uniform_int(rng, 0, 3);
    if (mode == 0) {
      const int len = uniform_int(rng, 0, 60);
      for (int i = 0; i < len; ++i) s += static_cast<char>(uniform_int(rng, 0, 255));
      return s;
    }
    s = mode == 1 ? random_tss(rng) : mode == 2 ? valid_darts : valid_generic;
    const int edits = uniform_int(rng, 1, 4);
    static const std::string alphabet = "|~+0123456789_abcnorvskip()[]{}'\",: \x01\xff";
    for (int e = 0; e < edits && !s.empty(); ++e) {
      const auto pos = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(s.size()) - 1));
      const char ch = alphabet[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(alphabet.size()) - 1))];
      switch (uniform_int(rng, 0, 3)) {
        case 0:
          s.erase(pos, 1);
          break;
        case 1:
          s.insert(pos, 1, ch);
          break;
        case 2:
          s[pos] = ch;
          break;
        default:
          s.resize(pos);
      }
    }
    return s;
  };
  out.push_back(for_all(
      "parsers reject garbage with a located error", 2000, seed + 13, fuzz_input,
      [&](const std::string& s) -> std::string {
        auto attempt = [&](auto&& fn) -> std::string {
          try {
            fn();
          } catch (const ParseError& e) {
            if (e.offset() == ParseError::npos && e.path().empty()) return "unlocated: " + std::string(e.what());
          } catch (const ValidationError&) {
          }
          return {};
        };
        std::string why = attempt([&] { parse_tss(s, tss); });
        if (why.empty()) why = attempt([&] { parse_darts(s, darts); });
        if (why.empty()) why = attempt([&] { parse_generic(s); });
        return why;
      }));
  return out;
}

std::vector<Outcome> sed_properties(std::uint64_t seed) {
  std::vector<Outcome> out;
  const SearchSpaceDescriptor tss = tss_space();
  out.push_back(for_all(
      "SED ignores edge order within a cell", 1000, seed + 21,
      [](std::mt19937_64& rng) {
        const std::string a = random_tss(rng);
        auto edges = tss_edges(a);
        std::shuffle(edges.begin(), edges.end(), rng);
        return std::pair{a, tss_from_edges(edges)};
      },
      [&](const std::pair<std::string, std::string>& p) -> std::string {
        const double x = sed(parse_tss(p.first, tss), tss).sed;
        const double y = sed(parse_tss(p.second, tss), tss).sed;
        return x == y ? "" : p.first + " vs " + p.second;
      }));
  out.push_back(for_all(
      "batch scores are identical across runs and thread counts", 60, seed + 22,
      [&](std::mt19937_64& rng) {
        std::vector<Architecture> archs;
        for (int i = 0; i < 24; ++i) archs.push_back(parse_tss(random_tss(rng), tss));
        return archs;
      },
      [&](const std::vector<Architecture>& archs) -> std::string {
        const auto a = batch_score(archs, tss, 1);
        const auto b = batch_score(archs, tss, 3);
        const auto c = batch_score(archs, tss, 1);
        for (std::size_t i = 0; i < a.size(); ++i) {
          if (a[i].index != i || a[i].sed != b[i].sed || a[i].sed != c[i].sed) {
            return "item " + std::to_string(i);
          }
        }
        return {};
      }));
  const SearchSpaceDescriptor free = free_space();
  out.push_back(for_all(
      "one more skip raises the block score when D > 0", 1000, seed + 23, random_free_block,
      [&](const Block& b) -> std::string {
        if (conv_sed(b, free) <= 0.0) return {};
        Block more = b;
        ++more.op_counts[OpKind::skip()];
        if (pool_sed(more, free) <= 0.0) return {};
        const double before = block_score(b);
        const double after = block_score(more);
        return after > before ? "" : "score " + show(before) + " -> " + show(after);
      }));
  out.push_back(for_all(
      "trading a non-dominating kernel for a dominating one raises pool_sed", 1000, seed + 24,
      random_free_block, [&](const Block& b) -> std::string {
        const PoolSpec o1 = free.pools().front();
        std::optional<OpKind> weak;
        std::optional<OpKind> strong;
        for (const KernelSpec& k : free.kernels()) {
          const OpKind kind = OpKind::conv(k);
          if (dominates(k, o1, b.pool_stride)) {
            strong = kind;
          } else if (b.count(kind) > 0) {
            weak = kind;
          }
        }
        if (!weak || !strong) return {};
        Block swapped = b;
        if (--swapped.op_counts[*weak] == 0) swapped.op_counts.erase(*weak);
        ++swapped.op_counts[*strong];
        const double before = pool_sed(b, free);
        const double after = pool_sed(swapped, free);
        return after > before ? "" : "pool_sed " + show(before) + " -> " + show(after);
      }));
  out.push_back(for_all(
      "scaling f_in and f_out together leaves SED unchanged", 500, seed + 25,
      [](std::mt19937_64& rng) { return std::pair{random_space_arch(rng), uniform_int(rng, 2, 999)}; },
      [](const std::pair<RandomSpaceArch, int>& p) -> std::string {
        Architecture scaled = p.first.arch;
        for (Block& b : scaled.blocks) {
          b.f_in *= p.second;
          b.f_out *= p.second;
        }
        const double x = sed(p.first.arch, p.first.space).sed;
        const double y = sed(scaled, p.first.space).sed;
        const double tol = 1e-12 * std::max(1.0, std::abs(x));
        return std::abs(x - y) <= tol ? "" : show(x) + " vs " + show(y);
      }));
  return out;
}

std::vector<Outcome> entropy_properties(std::uint64_t seed) {
  std::vector<Outcome> out;
  out.push_back(for_all(
      "one-dimensional entropy lies in [0, log2 n] and vanishes only on constants", 1000,
      seed + 31,
      [](std::mt19937_64& rng) {
        std::vector<double> v(static_cast<std::size_t>(uniform_int(rng, 1, 64)));
        const int levels = uniform_int(rng, 1, 8);
        for (auto& x : v) x = uniform_int(rng, 0, levels - 1) * 0.5 - 1.0;
        return v;
      },
      [](const std::vector<double>& v) -> std::string {
        const double h = one_dim_entropy(v);
        const bool constant = std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
        if (h < 0.0 || h > std::log2(static_cast<double>(v.size())) + 1e-12) return "out of range " + show(h);
        if (constant != (h == 0.0)) return "zero iff constant violated, H = " + show(h);
        return {};
      }));
  out.push_back(for_all(
      "Gaussian entropy adds over block-diagonal covariance", 400, seed + 32,
      [](std::mt19937_64& rng) {
        const int n1 = uniform_int(rng, 1, 8);
        const int n2 = uniform_int(rng, 1, 8);
        const double e1 = std::pow(10.0, uniform_real(rng, -4.0, 1.0));
        const double e2 = std::pow(10.0, uniform_real(rng, -4.0, 1.0));
        return std::pair{random_pd(n1, e1, rng), random_pd(n2, e2, rng)};
      },
      [](const std::pair<Eigen::MatrixXd, Eigen::MatrixXd>& p) -> std::string {
        const auto n1 = p.first.rows();
        const auto n2 = p.second.rows();
        Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(n1 + n2, n1 + n2);
        joint.topLeftCorner(n1, n1) = p.first;
        joint.bottomRightCorner(n2, n2) = p.second;
        const double sum = gaussian_entropy(p.first) + gaussian_entropy(p.second);
        const double h = gaussian_entropy(joint);
        return std::abs(h - sum) <= 1e-9 ? "" : show(h) + " vs " + show(sum);
      }));
  out.push_back(for_all(
      "Gaussian entropy does not depend on the mean", 400, seed + 33,
      [](std::mt19937_64& rng) {
        const int n = uniform_int(rng, 1, 10);
        Eigen::MatrixXd cov = random_pd(n, std::pow(10.0, uniform_real(rng, -3.0, 0.0)), rng);
        Eigen::VectorXd mu(n);
        for (int i = 0; i < n; ++i) mu(i) = uniform_real(rng, -1e3, 1e3);
        return std::pair{mu, cov};
      },
      [](const std::pair<Eigen::VectorXd, Eigen::MatrixXd>& p) -> std::string {
        const auto n = p.first.size();
        const double shifted = gaussian_entropy(GaussianFieldSpec::make(p.first, p.second));
        const double centred = gaussian_entropy(GaussianFieldSpec::make(Eigen::VectorXd::Zero(n), p.second));
        return shifted == centred ? "" : show(shifted) + " vs " + show(centred);
      }));
  struct PoolCase {
    FeatureField x;
    FeatureField y;
    PoolSpec pool;
    StrideSpec stride;
  };
  out.push_back(for_all(
      "pooling is monotone", 800, seed + 34,
      [](std::mt19937_64& rng) {
        const int w = uniform_int(rng, 3, 10);
        const int h = uniform_int(rng, 3, 10);
        const int c = uniform_int(rng, 1, 2);
        std::normal_distribution<double> nd;
        std::vector<double> xs(static_cast<std::size_t>(w * h * c));
        for (auto& v : xs) v = nd(rng);
        std::vector<double> ys = xs;
        for (auto& v : ys) v += uniform_int(rng, 0, 1) * std::abs(nd(rng));
        const PoolSpec pool{uniform_int(rng, 1, 3), uniform_int(rng, 1, 3),
                            uniform_int(rng, 0, 1) ? PoolKind::max : PoolKind::avg};
        return PoolCase{FeatureField::from(w, h, c, xs), FeatureField::from(w, h, c, ys), pool,
                        StrideSpec{uniform_int(rng, 1, 2), uniform_int(rng, 1, 2), 0}};
      },
      [](const PoolCase& p) -> std::string {
        const FeatureField px = pool2d(p.x, p.pool, p.stride);
        const FeatureField py = pool2d(p.y, p.pool, p.stride);
        for (std::size_t i = 0; i < px.entries.size(); ++i) {
          if (px.entries[i] > py.entries[i]) return "entry " + std::to_string(i);
        }
        return {};
      }));
  struct SumCase {
    GaussianFieldSpec a;
    GaussianFieldSpec b;
  };
  out.push_back(for_all(
      "summing independent fields raises every window entropy", 300, seed + 35,
      [](std::mt19937_64& rng) {
        const int w = uniform_int(rng, 1, 3);
        const int h = uniform_int(rng, 1, 2);
        const int c = uniform_int(rng, 1, 2);
        const int n = w * h * c;
        const double e1 = std::pow(10.0, uniform_real(rng, -3.0, 0.0));
        const double e2 = std::pow(10.0, uniform_real(rng, -3.0, 0.0));
        return SumCase{GaussianFieldSpec::make(Eigen::VectorXd::Zero(n), random_pd(n, e1, rng), w, h, c),
                       GaussianFieldSpec::make(Eigen::VectorXd::Zero(n), random_pd(n, e2, rng), w, h, c)};
      },
      [](const SumCase& s) -> std::string {
        const auto r = verify_prop4(s.a, s.b, all_contiguous_windows(s.a.w, s.a.h, s.a.c));
        return r.pass ? "" : "min gap " + show(r.min_gap);
      }));
  out.push_back(for_all(
      "Monte-Carlo reports are reproducible from the seed", 30, seed + 36,
      [](std::mt19937_64& rng) { return rng(); },
      [](std::uint64_t s) -> std::string {
        const auto a = verify_prop2(8, 8, {3, 3, PoolKind::max}, {1, 1, 0}, 100, s);
        const auto b = verify_prop2(8, 8, {3, 3, PoolKind::max}, {1, 1, 0}, 100, s, {FieldDistribution::normal, 16, 2});
        if (a.hits != b.hits) return "prop2 hits differ";
        const auto c = verify_prop1({3, 3, 1, 1}, 10, s);
        const auto d = verify_prop1({3, 3, 1, 1}, 10, s);
        if (c.max_deviation != d.max_deviation || c.negative_control_fraction != d.negative_control_fraction) {
          return "prop1 differs";
        }
        return {};
      }));
  return out;
}

std::vector<Outcome> bench_properties(std::uint64_t seed) {
  std::vector<Outcome> out;
  struct Pair {
    std::vector<double> xs;
    std::vector<double> ys;
  };
  auto gen_pair = [](std::mt19937_64& rng) {
    const int n = uniform_int(rng, 2, 40);
    return Pair{tied_sequence(rng, n), tied_sequence(rng, n)};
  };
  out.push_back(for_all(
      "correlations are symmetric and invariant under increasing maps", 1500, seed + 41, gen_pair,
      [](const Pair& p) -> std::string {
        std::vector<double> fx(p.xs.size());
        std::transform(p.xs.begin(), p.xs.end(), fx.begin(),
                       [](double x) { return std::exp(x / 7.0) + x * x * x; });
        for (auto corr : {&spearman, &kendall}) {
          const auto base = corr(p.xs, p.ys);
          if (!same(base, corr(p.ys, p.xs), 1e-12)) return "asymmetric";
          if (!same(base, corr(fx, p.ys), 1e-12)) return "not rank invariant";
          if (base && (*base < -1.0 || *base > 1.0)) return "out of range " + show(base);
        }
        return {};
      }));
  out.push_back(for_all(
      "a sequence correlates perfectly with itself", 500, seed + 42,
      [](std::mt19937_64& rng) {
        auto v = tied_sequence(rng, uniform_int(rng, 2, 40));
        v[0] = -1.0;
        v[1] = 5.0;
        return v;
      },
      [](const std::vector<double>& v) -> std::string {
        const auto r = spearman(v, v);
        const auto t = kendall(v, v);
        if (!r || std::abs(*r - 1.0) > 1e-12) return "spearman " + show(r);
        if (!t || std::abs(*t - 1.0) > 1e-12) return "kendall " + show(t);
        return {};
      }));
  struct Table {
    std::vector<BenchmarkRecord> records;
    std::map<std::string, double> scores;
    std::int64_t k = 1;
    std::uint64_t shuffle_seed = 0;
  };
  auto gen_table = [](std::mt19937_64& rng) {
    Table t;
    const int n = uniform_int(rng, 1, 30);
    for (int i = 0; i < n; ++i) {
      BenchmarkRecord r;
      r.arch_id = "a" + std::to_string(i);
      r.encoding = "e" + std::to_string(uniform_int(rng, 0, n));
      r.metrics["d"] = 50.0 + uniform_int(rng, 0, 8) * 0.5;
      t.records.push_back(r);
      t.scores[r.arch_id] = uniform_int(rng, 0, 6) * 1.5;
    }
    t.k = uniform_int(rng, 1, n);
    t.shuffle_seed = rng();
    return t;
  };
  out.push_back(for_all("argmax_rank is 1 exactly when the top-scored net has the best accuracy",
                        800, seed + 43, gen_table, [](const Table& t) -> std::string {
                          const RankingReport r = rank_report(t.records, t.scores, "d", t.k);
                          double best = 0.0;
                          for (const auto& rec : t.records) best = std::max(best, rec.metrics.at("d"));
                          if ((r.argmax_rank == 1) != (r.argmax_acc == best)) return "rank/accuracy mismatch";
                          if (r.argmax_rank < 1 || r.argmax_rank > r.n) return "rank out of range";
                          if (r.topk_mean > best) return "top-k mean above max";
                          return {};
                        }));
  out.push_back(for_all("rank reports ignore record order", 500, seed + 44, gen_table,
                        [](const Table& t) -> std::string {
                          auto shuffled = t.records;
                          std::mt19937_64 rng(t.shuffle_seed);
                          std::shuffle(shuffled.begin(), shuffled.end(), rng);
                          const auto a = rank_report(t.records, t.scores, "d", t.k);
                          const auto b = rank_report(shuffled, t.scores, "d", t.k);
                          return a == b ? "" : "reports differ";
                        }));
  return out;
}

std::vector<Outcome> search_properties(std::uint64_t seed) {
  std::vector<Outcome> out;
  const SearchSpaceDescriptor tss = tss_space();
  const SearchSpaceDescriptor darts = darts_space();
  const auto listing = enumerate_cell_strings(tss);
  const std::set<std::string> members(listing.begin(), listing.end());
  out.push_back(for_all(
      "sampling is seeded and stays inside the space", 300, seed + 51,
      [](std::mt19937_64& rng) { return std::pair{rng(), static_cast<std::int64_t>(uniform_int(rng, 1, 20))}; },
      [&](const std::pair<std::uint64_t, std::int64_t>& p) -> std::string {
        const auto a = sample_encodings(tss, p.second, p.first);
        if (a != sample_encodings(tss, p.second, p.first)) return "cell strings not reproducible";
        for (const auto& e : a) {
          if (!members.contains(e)) return "not enumerated: " + e;
        }
        const auto d = sample_encodings(darts, p.second, p.first);
        if (d != sample_encodings(darts, p.second, p.first)) return "genotypes not reproducible";
        for (const auto& e : d) {
          if (!validate(parse_darts(e, darts), darts).empty()) return "invalid genotype " + e;
        }
        return {};
      }));
  return out;
}

std::vector<Outcome> all_properties(std::uint64_t seed) {
  std::vector<Outcome> out;
  for (auto suite : {&arch_properties, &parser_properties, &sed_properties, &entropy_properties,
                     &bench_properties, &search_properties}) {
    auto part = suite(seed);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace sednas::prop
