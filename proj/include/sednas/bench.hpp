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
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sednas/io_error.hpp"

namespace sednas {

struct BenchmarkRecord {
  std::string arch_id;
  std::string encoding;
  /// dataset name -> test accuracy in percent
  std::map<std::string, double> metrics;

  bool operator==(const BenchmarkRecord&) const = default;
};

struct BenchmarkTable {
  std::vector<std::string> datasets;  // column order
  std::vector<BenchmarkRecord> records;
};

enum class TableFormat { csv, json };

/// Malformed table contents; messages carry row numbers (header = row 1).
class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// CSV header: arch_id,encoding,<dataset>[,<dataset>...]
BenchmarkTable parse_records_csv(std::string_view text);
/// Array of {arch_id, encoding, metrics} or {"schema": 1, "records": [...]}.
BenchmarkTable parse_records_json(std::string_view text);
BenchmarkTable load_records(const std::string& path, TableFormat format);
/// Picks the format from the extension (.json, otherwise csv).
BenchmarkTable load_records(const std::string& path);

/// Ranks starting at 1; tied values share the average of their positions.
std::vector<double> average_ranks(std::span<const double> xs);

/// Pearson correlation of average ranks. nullopt when either side has zero
/// rank variance. Throws std::invalid_argument for mismatched lengths or n < 2.
std::optional<double> spearman(std::span<const double> xs, std::span<const double> ys);

/// Kendall tau-b (tie corrected), O(n log n). Same error contract as spearman.
std::optional<double> kendall(std::span<const double> xs, std::span<const double> ys);

struct RankingReport {
  std::string dataset;
  std::int64_t n = 0;
  std::optional<double> spearman;
  std::optional<double> kendall;
  std::string argmax_arch;
  double argmax_acc = 0.0;
  /// 1 = best accuracy; ties share the better rank.
  std::int64_t argmax_rank = 0;
  std::int64_t k = 0;
  double topk_mean = 0.0;

  bool operator==(const RankingReport&) const = default;
};

/// Correlates proxy scores with one dataset's accuracies and reports how the
/// highest-scoring architecture ranks. Score ties are broken by encoding,
/// then arch_id, so the report does not depend on record order.
RankingReport rank_report(const std::vector<BenchmarkRecord>& records,
                          const std::map<std::string, double>& scores,
                          const std::string& dataset, std::int64_t k);

enum class ReportFormat { json, csv };

std::string format_reports(std::span<const RankingReport> reports, ReportFormat format);
std::vector<RankingReport> parse_reports(std::string_view text, ReportFormat format);
void emit_report(std::span<const RankingReport> reports, const std::string& path,
                 ReportFormat format);
void emit_report(const RankingReport& report, const std::string& path, ReportFormat format);
std::vector<RankingReport> load_reports(const std::string& path, ReportFormat format);

/// Two-column CSV `arch_id,score`.
std::map<std::string, double> load_scores(const std::string& path);

}  // namespace sednas
