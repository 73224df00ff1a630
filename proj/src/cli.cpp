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

#include "sednas/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sednas/bench.hpp"
#include "sednas/entropy.hpp"
#include "sednas/parser.hpp"
#include "sednas/search.hpp"
#include "sednas/sed.hpp"

namespace sednas {

using nlohmann::ordered_json;

namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing", path);
  f << text;
  f.flush();
  if (!f) throw IoError("cannot write", path);
}

std::string slurp(const std::string& path, std::istream& in) {
  std::ostringstream ss;
  if (path == "-") {
    ss << in.rdbuf();
    return ss.str();
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open", path);
  ss << f.rdbuf();
  return ss.str();
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

/// One encoding per line; generic spaces also accept a JSON array of documents.
std::vector<std::string> split_encodings(const std::string& text, const SearchSpaceDescriptor& space) {
  std::vector<std::string> out;
  const std::string t = trim(text);
  if (space.encoding() == EncodingFormat::generic_json && !t.empty() && t.front() == '[') {
    nlohmann::json arr;
    try {
      arr = nlohmann::json::parse(t);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), static_cast<std::size_t>(e.byte));
    }
    for (const auto& a : arr) out.push_back(a.dump());
    return out;
  }
  std::istringstream ss(text);
  for (std::string line; std::getline(ss, line);) {
    line = trim(line);
    if (!line.empty() && line.front() != '#') out.push_back(line);
  }
  return out;
}

std::string fmt_num(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

struct ScoreOpts {
  std::string space = "tss";
  std::vector<std::string> archs;
  std::string archs_file;
  bool explain = false;
  std::string format = "json";
  std::string out;
};

int run_score(const ScoreOpts& o, unsigned threads, std::istream& in, std::ostream& out) {
  const SearchSpaceDescriptor space = load_space(o.space);
  std::vector<std::string> encodings = o.archs;
  if (!o.archs_file.empty()) {
    auto more = split_encodings(slurp(o.archs_file, in), space);
    encodings.insert(encodings.end(), more.begin(), more.end());
  }
  if (encodings.empty()) throw UsageError("no architectures given (use --arch or --archs-file)");
  std::vector<Architecture> archs;
  archs.reserve(encodings.size());
  for (std::size_t i = 0; i < encodings.size(); ++i) {
    try {
      archs.push_back(parse_encoding(encodings[i], space));
    } catch (const std::exception& e) {
      if (encodings.size() == 1) throw;
      throw UsageError("architecture " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  const auto t0 = std::chrono::steady_clock::now();
  const auto scored = batch_score(archs, space, threads);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (o.format == "csv") {
    std::string text = "arch_id,score\n";
    for (const auto& s : scored) {
      std::string id = encodings[s.index];
      if (id.find_first_of(",\"") != std::string::npos) {
        std::string q = "\"";
        for (char c : id) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        id = q + "\"";
      }
      text += id + "," + fmt_num(*s.sed) + "\n";
    }
    emit(text, o.out, out);
    return 0;
  }
  ordered_json doc;
  doc["space"] = space.id();
  doc["count"] = scored.size();
  doc["elapsed_seconds"] = elapsed;
  doc["results"] = ordered_json::array();
  for (const auto& s : scored) {
    ordered_json r;
    r["encoding"] = encodings[s.index];
    r["sed"] = *s.sed;
    if (o.explain) r["breakdown"] = to_json(sed(archs[s.index], space));
    doc["results"].push_back(r);
  }
  emit(doc.dump(2) + "\n", o.out, out);
  return 0;
}

struct RankOpts {
  std::string space = "tss";
  std::string records;
  std::string scores;
  std::vector<std::string> datasets;
  std::int64_t k = 10;
  bool k_set = false;
  std::string format = "json";
  std::string out;
};

std::map<std::string, double> scores_for(const RankOpts& o, const BenchmarkTable& table,
                                         unsigned threads) {
  if (!o.scores.empty()) return load_scores(o.scores);
  const SearchSpaceDescriptor space = load_space(o.space);
  std::vector<Architecture> archs;
  archs.reserve(table.records.size());
  for (const auto& r : table.records) {
    try {
      archs.push_back(parse_encoding(r.encoding, space));
    } catch (const std::exception& e) {
      throw UsageError("record " + r.arch_id + ": " + e.what());
    }
  }
  std::map<std::string, double> out;
  for (const auto& s : batch_score(archs, space, threads)) {
    out[table.records[s.index].arch_id] = *s.sed;
  }
  return out;
}

std::vector<RankingReport> reports_for(const RankOpts& o, unsigned threads) {
  const BenchmarkTable table = load_records(o.records);
  if (table.records.empty()) throw UsageError("no records in " + o.records);
  const auto scores = scores_for(o, table, threads);
  const std::vector<std::string> datasets = o.datasets.empty() ? table.datasets : o.datasets;
  const auto n = static_cast<std::int64_t>(table.records.size());
  const std::int64_t k = o.k_set ? o.k : std::min<std::int64_t>(o.k, n);
  std::vector<RankingReport> reports;
  for (const auto& d : datasets) reports.push_back(rank_report(table.records, scores, d, k));
  return reports;
}

int run_rank(const RankOpts& o, unsigned threads, std::ostream& out) {
  const auto reports = reports_for(o, threads);
  emit(format_reports(reports, o.format == "csv" ? ReportFormat::csv : ReportFormat::json), o.out,
       out);
  return 0;
}

int run_correlate(const RankOpts& o, unsigned threads, std::ostream& out) {
  const auto reports = reports_for(o, threads);
  if (o.format == "csv") {
    std::string text = "dataset,n,spearman,kendall\n";
    for (const auto& r : reports) {
      text += r.dataset + "," + std::to_string(r.n) + "," +
              (r.spearman ? fmt_num(*r.spearman) : "") + "," +
              (r.kendall ? fmt_num(*r.kendall) : "") + "\n";
    }
    emit(text, o.out, out);
    return 0;
  }
  ordered_json doc;
  doc["schema"] = 1;
  doc["correlations"] = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json c;
    c["dataset"] = r.dataset;
    c["n"] = r.n;
    c["spearman"] = r.spearman ? ordered_json(*r.spearman) : ordered_json(nullptr);
    c["kendall"] = r.kendall ? ordered_json(*r.kendall) : ordered_json(nullptr);
    doc["correlations"].push_back(c);
  }
  emit(doc.dump(2) + "\n", o.out, out);
  return 0;
}

struct SearchOpts {
  std::string space = "tss";
  std::int64_t n = 2000;
  std::uint64_t seed = 0;
  bool dedup = false;
  std::string out;
};

int run_search(const SearchOpts& o, unsigned threads, std::ostream& out) {
  SearchConfig cfg{load_space(o.space), o.n, o.seed, o.dedup, "", threads};
  const SearchResult r = search(cfg);
  const std::string text = to_json(r, cfg).dump(2) + "\n";
  if (!o.out.empty()) emit(text, o.out, out);
  out << (o.out.empty() ? text : r.best_encoding + "\n" + "sed " + fmt_num(r.best_sed) +
                                     "\nelapsed_seconds " + fmt_num(r.elapsed_seconds) + "\n");
  return 0;
}

struct VerifyOpts {
  int prop = 0;
  std::uint64_t seed = 0;
  std::int64_t trials = 0;
  int w = 32;
  int h = 32;
  int pool = 3;
  std::string pool_kind = "max";
  int stride = 1;
  int kernel = 3;
  int dilation = 1;
  std::string distribution = "normal";
  int levels = 16;
  std::string model = "iid";
  double sigma2 = 1.0;
  double rho = 0.5;
  std::vector<std::int64_t> volumes{1, 2, 3, 4, 6, 8, 12, 16, 24, 32};
  std::int64_t pairs = 1000;
  int max_dim = 16;
  std::string out;
};

int run_verify(const VerifyOpts& o, unsigned threads, std::ostream& out) {
  VerificationReport rep;
  switch (o.prop) {
    case 1: {
      const KernelSpec k{o.kernel, o.kernel, 1, o.dilation};
      rep = verify_prop1(k, o.trials > 0 ? o.trials : 1000, o.seed).report(k, o.seed);
      break;
    }
    case 2: {
      const PoolSpec pool{o.pool, o.pool, o.pool_kind == "avg" ? PoolKind::avg : PoolKind::max};
      const StrideSpec stride{o.stride, o.stride, 0};
      Prop2Options opts;
      opts.distribution = o.distribution == "uniform" ? FieldDistribution::discrete_uniform
                                                      : FieldDistribution::normal;
      opts.levels = o.levels;
      opts.threads = threads;
      rep = verify_prop2(o.w, o.h, pool, stride, o.trials > 0 ? o.trials : 10000, o.seed, opts)
                .report(o.w, o.h, pool, stride, o.seed);
      break;
    }
    case 3: {
      const CovModel m =
          o.model == "toeplitz" ? CovModel::toeplitz(o.rho, o.sigma2) : CovModel::iid(o.sigma2);
      rep = verify_prop3(m, o.volumes, o.seed).report(m, o.seed);
      break;
    }
    case 4:
      rep = verify_prop4_random(o.pairs, o.max_dim, o.seed).report(o.max_dim, o.seed);
      break;
    default:
      throw UsageError("--prop must be 1, 2, 3 or 4");
  }
  emit(rep.to_json().dump(2) + "\n", o.out, out);
  return 0;
}

struct EnumerateOpts {
  std::string space = "tss";
  bool score = false;
  std::string out;
};

int run_enumerate(const EnumerateOpts& o, unsigned threads, std::ostream& out) {
  const SearchSpaceDescriptor space = load_space(o.space);
  const auto encodings = enumerate_cell_strings(space);
  if (!o.score) {
    std::string text;
    for (const auto& e : encodings) text += e + "\n";
    emit(text, o.out, out);
    return 0;
  }
  std::vector<Architecture> archs;
  archs.reserve(encodings.size());
  for (const auto& e : encodings) archs.push_back(parse_encoding(e, space));
  const auto t0 = std::chrono::steady_clock::now();
  const auto scored = batch_score(archs, space, threads);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::size_t best = 0;
  for (const auto& s : scored) {
    const double b = *scored[best].sed;
    if (*s.sed > b || (*s.sed == b && encodings[s.index] < encodings[best])) best = s.index;
  }
  ordered_json doc;
  doc["space"] = space.id();
  doc["count"] = encodings.size();
  doc["threads"] = threads;
  doc["elapsed_seconds"] = elapsed;
  doc["best_encoding"] = encodings[best];
  doc["best_sed"] = *scored[best].sed;
  emit(doc.dump(2) + "\n", o.out, out);
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::istream& in, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Topology-only zero-shot NAS scoring"};
  app.name("sednas");
  app.require_subcommand(1);
  app.fallthrough();
  unsigned threads = default_threads();
  app.add_option("--threads", threads, "Worker threads (default: SED_THREADS or 1)")
      ->check(CLI::Range(1u, 1024u));

  ScoreOpts so;
  auto* score = app.add_subcommand("score", "Score architecture encodings");
  score->add_option("--space", so.space, "Space name (tss, darts, darts-search) or JSON file");
  score->add_option("--arch", so.archs, "Encoding to score (repeatable)");
  score->add_option("--archs-file", so.archs_file, "File with one encoding per line, - for stdin");
  score->add_flag("--explain", so.explain, "Include per-block breakdown");
  score->add_option("--format", so.format, "json or csv (arch_id,score)")
      ->check(CLI::IsMember({"json", "csv"}));
  score->add_option("--out", so.out, "Output path (default stdout)");

  RankOpts ro;
  auto* rank = app.add_subcommand("rank", "Ranking report against benchmark accuracies");
  RankOpts co;
  auto* correlate = app.add_subcommand("correlate", "Rank correlations against benchmark accuracies");
  for (auto [sub, o] : {std::pair{rank, &ro}, std::pair{correlate, &co}}) {
    sub->add_option("--records", o->records, "Benchmark table (.csv or .json)")->required();
    sub->add_option("--space", o->space, "Space used to score record encodings");
    sub->add_option("--scores", o->scores, "Precomputed arch_id,score CSV");
    sub->add_option("--dataset", o->datasets, "Dataset column (repeatable; default all)");
    sub->add_option("--format", o->format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", o->out, "Output path (default stdout)");
  }
  auto* k_opt = rank->add_option("--k", ro.k, "Top-k size for the mean accuracy")
                    ->check(CLI::PositiveNumber);

  SearchOpts sr;
  auto* srch = app.add_subcommand("search", "Random search for the highest-SED architecture");
  srch->add_option("--space", sr.space, "Space name or JSON file");
  srch->add_option("--n", sr.n, "Number of sampled architectures")->check(CLI::PositiveNumber);
  srch->add_option("--seed", sr.seed, "Sampling seed");
  srch->add_flag("--dedup", sr.dedup, "Sample without replacement");
  srch->add_option("--out", sr.out, "Write the full JSON result here");

  VerifyOpts vo;
  auto* verify = app.add_subcommand("verify-entropy", "Numerical checks of the local-entropy results");
  verify->set_help_flag("--help", "Print this help message and exit");
  verify->add_option("--prop", vo.prop, "Which proposition (1-4)")
      ->required()
      ->check(CLI::Range(1, 4));
  verify->add_option("--seed", vo.seed, "Seed");
  verify->add_option("--trials", vo.trials, "Trials (prop 1 default 1000, prop 2 default 10000)");
  verify->add_option("--w", vo.w, "Field width (prop 2)")->check(CLI::PositiveNumber);
  verify->add_option("--h", vo.h, "Field height (prop 2)")->check(CLI::PositiveNumber);
  verify->add_option("--pool", vo.pool, "Square pool size (prop 2)")->check(CLI::PositiveNumber);
  verify->add_option("--pool-kind", vo.pool_kind, "max or avg")->check(CLI::IsMember({"max", "avg"}));
  verify->add_option("--stride", vo.stride, "Pool stride (prop 2)")->check(CLI::PositiveNumber);
  verify->add_option("--kernel", vo.kernel, "Square kernel size (prop 1)")->check(CLI::PositiveNumber);
  verify->add_option("--dilation", vo.dilation, "Kernel dilation (prop 1)")->check(CLI::PositiveNumber);
  verify->add_option("--distribution", vo.distribution, "normal or uniform (prop 2)")
      ->check(CLI::IsMember({"normal", "uniform"}));
  verify->add_option("--levels", vo.levels, "Alphabet size for uniform fields")->check(CLI::Range(2, 1 << 20));
  verify->add_option("--model", vo.model, "iid or toeplitz (prop 3)")
      ->check(CLI::IsMember({"iid", "toeplitz"}));
  verify->add_option("--sigma2", vo.sigma2, "Variance (prop 3)");
  verify->add_option("--rho", vo.rho, "Toeplitz correlation (prop 3)");
  verify->add_option("--volumes", vo.volumes, "Window volumes (prop 3)")->delimiter(',');
  verify->add_option("--pairs", vo.pairs, "Random covariance pairs (prop 4)")->check(CLI::PositiveNumber);
  verify->add_option("--max-dim", vo.max_dim, "Largest field dimension (prop 4)")->check(CLI::Range(1, 64));
  verify->add_option("--out", vo.out, "Output path (default stdout)");

  EnumerateOpts eo;
  auto* enumerate = app.add_subcommand("enumerate", "List every cell string of a cell-string space");
  enumerate->add_option("--space", eo.space, "Space name or JSON file");
  enumerate->add_flag("--score", eo.score, "Score everything and report timing instead of listing");
  enumerate->add_option("--out", eo.out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code != 0) {
      CLI::App* failed = &app;
      for (CLI::App* sub : app.get_subcommands()) failed = sub;
      err << failed->help();
      return 1;
    }
    return 0;
  }
  ro.k_set = k_opt->count() > 0;

  try {
    if (score->parsed()) return run_score(so, threads, in, out);
    if (rank->parsed()) return run_rank(ro, threads, out);
    if (correlate->parsed()) return run_correlate(co, threads, out);
    if (srch->parsed()) return run_search(sr, threads, out);
    if (verify->parsed()) return run_verify(vo, threads, out);
    if (enumerate->parsed()) return run_enumerate(eo, threads, out);
  } catch (const IoError& e) {
    err << "sednas: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "sednas: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace sednas
