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

#include "sednas/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace sednas {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read", path);
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing", path);
  out << content;
  out.flush();
  if (!out) throw IoError("cannot write", path);
}

// RFC 4180 style fields; quoted fields may not span lines.
std::vector<std::string> split_csv_line(std::string_view line, std::size_t row) {
  std::vector<std::string> out;
  std::string cur;
  std::size_t i = 0;
  while (true) {
    cur.clear();
    if (i < line.size() && line[i] == '"') {
      ++i;
      bool closed = false;
      while (i < line.size()) {
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            cur += '"';
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        cur += line[i++];
      }
      if (!closed) throw LoadError("row " + std::to_string(row) + ": unterminated quoted field");
      if (i < line.size() && line[i] != ',') {
        throw LoadError("row " + std::to_string(row) + ": unexpected character after quoted field");
      }
    } else {
      while (i < line.size() && line[i] != ',') cur += line[i++];
    }
    out.push_back(cur);
    if (i >= line.size()) break;
    ++i;  // comma
  }
  return out;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  if (!lines.empty() && lines[0].rfind("\xEF\xBB\xBF", 0) == 0) lines[0].erase(0, 3);
  return lines;
}

std::optional<double> parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

double checked_accuracy(std::string_view cell, std::size_t row, const std::string& column) {
  const auto v = parse_double(cell);
  if (!v) {
    throw LoadError("row " + std::to_string(row) + ": column " + column +
                    ": unparsable accuracy '" + std::string(cell) + "'");
  }
  if (*v < 0.0 || *v > 100.0) {
    throw LoadError("row " + std::to_string(row) + ": column " + column +
                    ": accuracy outside [0, 100]");
  }
  return *v;
}

void check_duplicates(const std::vector<BenchmarkRecord>& records, std::size_t first_row) {
  std::map<std::string, std::vector<std::size_t>> rows;
  for (std::size_t i = 0; i < records.size(); ++i) rows[records[i].arch_id].push_back(i + first_row);
  std::string msg;
  for (const auto& [id, rs] : rows) {
    if (rs.size() < 2) continue;
    msg += (msg.empty() ? "" : "; ") + std::string("duplicate arch_id '") + id + "' at rows";
    for (auto r : rs) msg += " " + std::to_string(r);
  }
  if (!msg.empty()) throw LoadError(msg);
}

std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

ordered_json report_to_json(const RankingReport& r) {
  ordered_json j;
  j["dataset"] = r.dataset;
  j["n"] = r.n;
  j["spearman"] = r.spearman ? ordered_json(*r.spearman) : ordered_json(nullptr);
  j["kendall"] = r.kendall ? ordered_json(*r.kendall) : ordered_json(nullptr);
  j["argmax_arch"] = r.argmax_arch;
  j["argmax_acc"] = r.argmax_acc;
  j["argmax_rank"] = r.argmax_rank;
  j["k"] = r.k;
  j["topk_mean"] = r.topk_mean;
  return j;
}

RankingReport report_from_json(const json& j) {
  RankingReport r;
  r.dataset = j.at("dataset").get<std::string>();
  r.n = j.at("n").get<std::int64_t>();
  if (!j.at("spearman").is_null()) r.spearman = j.at("spearman").get<double>();
  if (!j.at("kendall").is_null()) r.kendall = j.at("kendall").get<double>();
  r.argmax_arch = j.at("argmax_arch").get<std::string>();
  r.argmax_acc = j.at("argmax_acc").get<double>();
  r.argmax_rank = j.at("argmax_rank").get<std::int64_t>();
  r.k = j.at("k").get<std::int64_t>();
  r.topk_mean = j.at("topk_mean").get<double>();
  return r;
}

void check_pair(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("length mismatch: " + std::to_string(xs.size()) + " vs " +
                                std::to_string(ys.size()));
  }
  if (xs.size() < 2) throw std::invalid_argument("need at least 2 observations");
}

}  // namespace

BenchmarkTable parse_records_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0].empty()) throw LoadError("row 1: missing header");
  const auto header = split_csv_line(lines[0], 1);
  if (header.size() < 3 || header[0] != "arch_id" || header[1] != "encoding") {
    throw LoadError("row 1: header must be arch_id,encoding,<dataset>[,...]");
  }
  BenchmarkTable table;
  for (std::size_t c = 2; c < header.size(); ++c) {
    if (header[c].empty()) throw LoadError("row 1: empty dataset column name");
    if (std::find(table.datasets.begin(), table.datasets.end(), header[c]) != table.datasets.end()) {
      throw LoadError("row 1: duplicate column " + header[c]);
    }
    table.datasets.push_back(header[c]);
  }
  std::vector<std::size_t> row_of;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t row = li + 1;
    if (lines[li].empty()) continue;
    const auto cells = split_csv_line(lines[li], row);
    if (cells.size() != header.size()) {
      throw LoadError("row " + std::to_string(row) + ": expected " + std::to_string(header.size()) +
                      " columns, found " + std::to_string(cells.size()));
    }
    BenchmarkRecord rec;
    rec.arch_id = cells[0];
    rec.encoding = cells[1];
    if (rec.arch_id.empty()) throw LoadError("row " + std::to_string(row) + ": empty arch_id");
    for (std::size_t c = 2; c < cells.size(); ++c) {
      rec.metrics[header[c]] = checked_accuracy(cells[c], row, header[c]);
    }
    table.records.push_back(std::move(rec));
    row_of.push_back(row);
  }
  // Duplicate detection reports file rows.
  std::map<std::string, std::vector<std::size_t>> rows;
  for (std::size_t i = 0; i < table.records.size(); ++i) rows[table.records[i].arch_id].push_back(row_of[i]);
  std::string msg;
  for (const auto& [id, rs] : rows) {
    if (rs.size() < 2) continue;
    msg += (msg.empty() ? "" : "; ") + std::string("duplicate arch_id '") + id + "' at rows";
    for (auto r : rs) msg += " " + std::to_string(r);
  }
  if (!msg.empty()) throw LoadError(msg);
  return table;
}

BenchmarkTable parse_records_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw LoadError(std::string("invalid JSON: ") + e.what());
  }
  const json* arr = &doc;
  if (doc.is_object()) {
    if (auto it = doc.find("schema"); it != doc.end() && (!it->is_number_integer() || *it != 1)) {
      throw LoadError("unsupported schema version (expected 1)");
    }
    if (!doc.contains("records")) throw LoadError("missing 'records'");
    arr = &doc["records"];
  }
  if (!arr->is_array()) throw LoadError("records must be an array");
  BenchmarkTable table;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    const json& r = (*arr)[i];
    const std::string where = "record " + std::to_string(i + 1);
    if (!r.is_object() || !r.contains("arch_id") || !r["arch_id"].is_string()) {
      throw LoadError(where + ": missing string arch_id");
    }
    BenchmarkRecord rec;
    rec.arch_id = r["arch_id"].get<std::string>();
    if (r.contains("encoding")) {
      if (!r["encoding"].is_string()) throw LoadError(where + ": encoding must be a string");
      rec.encoding = r["encoding"].get<std::string>();
    }
    if (!r.contains("metrics") || !r["metrics"].is_object()) {
      throw LoadError(where + ": missing metrics object");
    }
    for (const auto& [name, v] : r["metrics"].items()) {
      if (!v.is_number() || !std::isfinite(v.get<double>())) {
        throw LoadError(where + ": metric " + name + " is not a finite number");
      }
      const double acc = v.get<double>();
      if (acc < 0.0 || acc > 100.0) throw LoadError(where + ": metric " + name + " outside [0, 100]");
      rec.metrics[name] = acc;
      if (std::find(table.datasets.begin(), table.datasets.end(), name) == table.datasets.end()) {
        table.datasets.push_back(name);
      }
    }
    table.records.push_back(std::move(rec));
  }
  check_duplicates(table.records, 1);
  return table;
}

BenchmarkTable load_records(const std::string& path, TableFormat format) {
  const std::string text = read_file(path);
  return format == TableFormat::json ? parse_records_json(text) : parse_records_csv(text);
}

BenchmarkTable load_records(const std::string& path) {
  const bool is_json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  return load_records(path, is_json ? TableFormat::json : TableFormat::csv);
}

std::vector<double> average_ranks(std::span<const double> xs) {
  std::vector<std::size_t> idx(xs.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i + 1;
    while (j < idx.size() && xs[idx[j]] == xs[idx[i]]) ++j;
    // positions i..j-1 (0-based) share rank mean(i+1..j)
    const double r = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) ranks[idx[t]] = r;
    i = j;
  }
  return ranks;
}

std::optional<double> spearman(std::span<const double> xs, std::span<const double> ys) {
  check_pair(xs, ys);
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  const double n = static_cast<double>(rx.size());
  const double mean = (n + 1.0) / 2.0;  // average ranks always sum to n(n+1)/2
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::optional<double> kendall(std::span<const double> xs, std::span<const double> ys) {
  check_pair(xs, ys);
  const std::size_t n = xs.size();
  std::vector<std::pair<double, double>> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = {xs[i], ys[i]};
  std::sort(p.begin(), p.end());

  auto tied_pairs = [](std::int64_t t) { return t * (t - 1) / 2; };
  std::int64_t x_ties = 0;
  std::int64_t joint_ties = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && p[j].first == p[i].first) ++j;
    x_ties += tied_pairs(static_cast<std::int64_t>(j - i));
    for (std::size_t a = i; a < j;) {
      std::size_t b = a + 1;
      while (b < j && p[b].second == p[a].second) ++b;
      joint_ties += tied_pairs(static_cast<std::int64_t>(b - a));
      a = b;
    }
    i = j;
  }

  // Bottom-up merge sort on y counts strict inversions (discordant pairs).
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = p[i].second;
  std::vector<double> buf(n);
  std::int64_t discordant = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, n);
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t a = lo;
      std::size_t b = mid;
      std::size_t out = lo;
      while (a < mid && b < hi) {
        if (y[b] < y[a]) {
          discordant += static_cast<std::int64_t>(mid - a);
          buf[out++] = y[b++];
        } else {
          buf[out++] = y[a++];
        }
      }
      while (a < mid) buf[out++] = y[a++];
      while (b < hi) buf[out++] = y[b++];
    }
    std::swap(y, buf);
  }

  std::int64_t y_ties = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && y[j] == y[i]) ++j;
    y_ties += tied_pairs(static_cast<std::int64_t>(j - i));
    i = j;
  }

  const std::int64_t total = tied_pairs(static_cast<std::int64_t>(n));
  const std::int64_t con_minus_dis = total - x_ties - y_ties + joint_ties - 2 * discordant;
  const double denom = std::sqrt(static_cast<double>(total - x_ties) *
                                 static_cast<double>(total - y_ties));
  if (denom == 0.0) return std::nullopt;
  return std::clamp(static_cast<double>(con_minus_dis) / denom, -1.0, 1.0);
}

RankingReport rank_report(const std::vector<BenchmarkRecord>& records,
                          const std::map<std::string, double>& scores,
                          const std::string& dataset, std::int64_t k) {
  if (records.empty()) throw std::invalid_argument("no records");
  std::vector<std::string> missing_score;
  std::vector<std::string> missing_metric;
  for (const auto& r : records) {
    if (!scores.contains(r.arch_id)) missing_score.push_back(r.arch_id);
    if (!r.metrics.contains(dataset)) missing_metric.push_back(r.arch_id);
  }
  auto list = [](const std::vector<std::string>& ids) {
    std::string s;
    for (std::size_t i = 0; i < ids.size() && i < 20; ++i) s += (i ? ", " : "") + ids[i];
    if (ids.size() > 20) s += ", ... (" + std::to_string(ids.size()) + " total)";
    return s;
  };
  if (!missing_score.empty()) throw std::invalid_argument("missing score for: " + list(missing_score));
  if (!missing_metric.empty()) {
    throw std::invalid_argument("missing " + dataset + " accuracy for: " + list(missing_metric));
  }
  const auto n = static_cast<std::int64_t>(records.size());
  if (k < 1 || k > n) throw std::invalid_argument("k must be in [1, n]");

  struct Row {
    const BenchmarkRecord* rec;
    double score;
    double acc;
  };
  std::vector<Row> rows;
  rows.reserve(records.size());
  for (const auto& r : records) rows.push_back({&r, scores.at(r.arch_id), r.metrics.at(dataset)});
  // Canonical order so floating sums do not depend on input order.
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.rec->arch_id < b.rec->arch_id;
  });

  RankingReport rep;
  rep.dataset = dataset;
  rep.n = n;
  rep.k = k;
  std::vector<double> s(rows.size());
  std::vector<double> a(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    s[i] = rows[i].score;
    a[i] = rows[i].acc;
  }
  if (n >= 2) {
    rep.spearman = spearman(s, a);
    rep.kendall = kendall(s, a);
  }

  std::vector<const Row*> by_score;
  for (const auto& r : rows) by_score.push_back(&r);
  std::stable_sort(by_score.begin(), by_score.end(), [](const Row* x, const Row* y) {
    if (x->score != y->score) return x->score > y->score;
    if (x->rec->encoding != y->rec->encoding) return x->rec->encoding < y->rec->encoding;
    return x->rec->arch_id < y->rec->arch_id;
  });
  const Row& best = *by_score.front();
  rep.argmax_arch = best.rec->arch_id;
  rep.argmax_acc = best.acc;
  rep.argmax_rank = 1 + std::count_if(rows.begin(), rows.end(),
                                      [&](const Row& r) { return r.acc > best.acc; });
  double sum = 0.0;
  for (std::int64_t i = 0; i < k; ++i) sum += by_score[static_cast<std::size_t>(i)]->acc;
  rep.topk_mean = sum / static_cast<double>(k);
  return rep;
}

std::string format_reports(std::span<const RankingReport> reports, ReportFormat format) {
  if (format == ReportFormat::json) {
    ordered_json doc;
    doc["schema"] = 1;
    doc["reports"] = ordered_json::array();
    for (const auto& r : reports) doc["reports"].push_back(report_to_json(r));
    return doc.dump(2) + "\n";
  }
  std::string out = "dataset,metric,value\n";
  for (const auto& r : reports) {
    const std::string d = csv_quote(r.dataset);
    auto row = [&](const char* m, const std::string& v) { out += d + "," + m + "," + v + "\n"; };
    row("n", std::to_string(r.n));
    row("spearman", r.spearman ? fmt_double(*r.spearman) : "");
    row("kendall", r.kendall ? fmt_double(*r.kendall) : "");
    row("argmax_arch", csv_quote(r.argmax_arch));
    row("argmax_acc", fmt_double(r.argmax_acc));
    row("argmax_rank", std::to_string(r.argmax_rank));
    row("k", std::to_string(r.k));
    row("topk_mean", fmt_double(r.topk_mean));
  }
  return out;
}

std::vector<RankingReport> parse_reports(std::string_view text, ReportFormat format) {
  std::vector<RankingReport> out;
  if (format == ReportFormat::json) {
    try {
      const json doc = json::parse(text.begin(), text.end());
      for (const auto& r : doc.at("reports")) out.push_back(report_from_json(r));
    } catch (const json::exception& e) {
      throw LoadError(std::string("bad report JSON: ") + e.what());
    }
    return out;
  }
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0] != "dataset,metric,value") {
    throw LoadError("row 1: header must be dataset,metric,value");
  }
  std::map<std::string, std::size_t> index;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    const std::size_t row = li + 1;
    const auto cells = split_csv_line(lines[li], row);
    if (cells.size() != 3) throw LoadError("row " + std::to_string(row) + ": expected 3 columns");
    auto [it, fresh] = index.try_emplace(cells[0], out.size());
    if (fresh) {
      out.emplace_back();
      out.back().dataset = cells[0];
    }
    RankingReport& r = out[it->second];
    const std::string& m = cells[1];
    const std::string& v = cells[2];
    auto num = [&]() {
      const auto d = parse_double(v);
      if (!d) throw LoadError("row " + std::to_string(row) + ": bad number '" + v + "'");
      return *d;
    };
    if (m == "n") {
      r.n = static_cast<std::int64_t>(num());
    } else if (m == "spearman") {
      if (!v.empty()) r.spearman = num();
    } else if (m == "kendall") {
      if (!v.empty()) r.kendall = num();
    } else if (m == "argmax_arch") {
      r.argmax_arch = v;
    } else if (m == "argmax_acc") {
      r.argmax_acc = num();
    } else if (m == "argmax_rank") {
      r.argmax_rank = static_cast<std::int64_t>(num());
    } else if (m == "k") {
      r.k = static_cast<std::int64_t>(num());
    } else if (m == "topk_mean") {
      r.topk_mean = num();
    } else {
      throw LoadError("row " + std::to_string(row) + ": unknown metric '" + m + "'");
    }
  }
  return out;
}

void emit_report(std::span<const RankingReport> reports, const std::string& path,
                 ReportFormat format) {
  write_file(path, format_reports(reports, format));
}

void emit_report(const RankingReport& report, const std::string& path, ReportFormat format) {
  emit_report(std::span<const RankingReport>(&report, 1), path, format);
}

std::vector<RankingReport> load_reports(const std::string& path, ReportFormat format) {
  return parse_reports(read_file(path), format);
}

std::map<std::string, double> load_scores(const std::string& path) {
  const auto lines = split_lines(read_file(path));
  if (lines.empty() || split_csv_line(lines[0], 1) != std::vector<std::string>{"arch_id", "score"}) {
    throw LoadError("row 1: header must be arch_id,score");
  }
  std::map<std::string, double> out;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    const std::size_t row = li + 1;
    const auto cells = split_csv_line(lines[li], row);
    if (cells.size() != 2) throw LoadError("row " + std::to_string(row) + ": expected 2 columns");
    const auto v = parse_double(cells[1]);
    if (!v) throw LoadError("row " + std::to_string(row) + ": unparsable score '" + cells[1] + "'");
    if (!out.emplace(cells[0], *v).second) {
      throw LoadError("row " + std::to_string(row) + ": duplicate arch_id '" + cells[0] + "'");
    }
  }
  return out;
}

}  // namespace sednas
