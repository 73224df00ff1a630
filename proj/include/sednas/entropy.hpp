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
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "sednas/arch.hpp"

namespace sednas {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Dense w x h x c tensor. Entry (i, j, v) lives at (v * h + j) * w + i.
struct FeatureField {
  int w = 0;
  int h = 0;
  int c = 0;
  std::vector<double> entries;

  static FeatureField filled(int w, int h, int c, double value);
  /// Throws DomainError on a size mismatch or non-finite entry.
  static FeatureField from(int w, int h, int c, std::vector<double> entries);

  std::size_t index(int i, int j, int v) const {
    return (static_cast<std::size_t>(v) * h + j) * w + i;
  }
  double at(int i, int j, int v = 0) const { return entries[index(i, j, v)]; }
  double& at(int i, int j, int v = 0) { return entries[index(i, j, v)]; }
};

/// Index sequences selecting X[alpha; beta; gamma]. Indices are 0-based and
/// strictly increasing.
struct SubtensorWindow {
  std::vector<int> alpha;
  std::vector<int> beta;
  std::vector<int> gamma;

  static SubtensorWindow contiguous(int i0, int j0, int v0, int m, int n, int r);
  bool fits(int w, int h, int c) const;
  std::size_t volume() const { return alpha.size() * beta.size() * gamma.size(); }
};

FeatureField extract(const FeatureField& x, const SubtensorWindow& win);

/// Empirical entropy in bits over exact value frequencies.
double one_dim_entropy(std::span<const double> values);
double one_dim_entropy(const FeatureField& x);

/// Multivariate Gaussian N(mean, cov) over a w x h x c field.
struct GaussianFieldSpec {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  int w = 0;
  int h = 1;
  int c = 1;

  /// Field of shape (dim, 1, 1). Throws DomainError if cov is not a
  /// symmetric PSD matrix matching mean.
  static GaussianFieldSpec make(Eigen::VectorXd mean, Eigen::MatrixXd cov);
  static GaussianFieldSpec make(Eigen::VectorXd mean, Eigen::MatrixXd cov, int w, int h, int c);

  int dim() const { return static_cast<int>(mean.size()); }
};

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log2 det(cov) via Cholesky; kNegInf when cov is PSD but singular.
/// Throws DomainError when cov is asymmetric or has an eigenvalue < -1e-10.
double log2_det(const Eigen::MatrixXd& cov);

/// (1/2) log2((2 pi e)^n det cov) in bits; kNegInf for singular cov.
double gaussian_entropy(const Eigen::MatrixXd& cov);
double gaussian_entropy(const GaussianFieldSpec& spec);

/// Principal submatrix of `cov` for the entries a window selects.
Eigen::MatrixXd window_covariance(const GaussianFieldSpec& spec, const SubtensorWindow& win);

/// Per-channel sliding-window pooling honoring pool.kind.
/// Output is floor((w - o_w) / s_1) + 1 by floor((h - o_h) / s_2) + 1.
FeatureField pool2d(const FeatureField& x, const PoolSpec& pool, const StrideSpec& stride);
FeatureField max_pool(const FeatureField& x, const PoolSpec& pool, const StrideSpec& stride);

/// True iff some contiguous win_w x win_h single-channel window has all
/// entries equal (|a - b| <= epsilon).
bool zero_entropy_window_exists(const FeatureField& x, int win_w, int win_h,
                                double epsilon = 0.0);

/// 1 - 2 (max(o_w, o_h) - 2)(w + h) / (w h). Values <= 0 are vacuous.
double prop2_bound(int w, int h, int o_w, int o_h);

/// Common report shape: {proposition, parameters, seed, trials, statistic,
/// bound, pass, details}.
struct VerificationReport {
  int proposition = 0;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  std::uint64_t seed = 0;
  std::int64_t trials = 0;
  double statistic = 0.0;
  double bound = 0.0;
  bool pass = false;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();

  nlohmann::ordered_json to_json() const;
};

struct Prop1Report {
  std::int64_t trials = 0;
  /// Largest |conv(constant patch) - c * sum(K)| over all positions and trials,
  /// before and after ReLU.
  double max_deviation = 0.0;
  /// Largest |output| on all-zero patches.
  double zero_patch_max = 0.0;
  /// Share of non-constant patches whose outputs differ across positions.
  double negative_control_fraction = 0.0;
  bool pass = false;

  VerificationReport report(const KernelSpec& k, std::uint64_t seed) const;
};

/// Constant patches reduce a convolution to c * sum(K) at every position.
Prop1Report verify_prop1(const KernelSpec& kernel, std::int64_t trials, std::uint64_t seed);

enum class FieldDistribution { normal, discrete_uniform };

struct Prop2Options {
  FieldDistribution distribution = FieldDistribution::normal;
  int levels = 16;  // discrete_uniform alphabet size
  unsigned threads = 1;
};

struct Prop2Report {
  std::int64_t trials = 0;
  std::int64_t hits = 0;
  double empirical_freq = 0.0;
  double bound = 0.0;
  /// sqrt(bound (1 - bound) / trials)
  double std_error = 0.0;
  double threshold = 0.0;
  int window_w = 0;
  int window_h = 0;
  /// Bound is vacuous (<= 0) or trivial (>= 1); only the frequency is reported.
  bool trivially_pass = false;
  bool pass = false;

  VerificationReport report(int w, int h, const PoolSpec& pool, const StrideSpec& stride,
                            std::uint64_t seed) const;
};

/// Monte-Carlo: pool random w x h fields and look for a zero-entropy
/// ceil(o_w/s_1) x ceil(o_h/s_2) window. Requires trials >= 100.
Prop2Report verify_prop2(int w, int h, const PoolSpec& pool, const StrideSpec& stride,
                         std::int64_t trials, std::uint64_t seed,
                         const Prop2Options& options = {});

struct CovModel {
  enum class Kind { iid, toeplitz } kind = Kind::iid;
  double sigma2 = 1.0;
  double rho = 0.0;  // toeplitz only: cov(i, j) = sigma2 * rho^|i - j|

  static CovModel iid(double sigma2) { return {Kind::iid, sigma2, 0.0}; }
  static CovModel toeplitz(double rho, double sigma2 = 1.0) {
    return {Kind::toeplitz, sigma2, rho};
  }
};

struct Prop3Pair {
  std::int64_t larger = 0;
  std::int64_t smaller = 0;
  double h_larger = 0.0;
  double h_smaller = 0.0;
  bool holds = false;
  /// larger == 2 * smaller, excluded by the proposition's side condition.
  bool side_condition = false;
};

struct Prop3Report {
  std::vector<std::int64_t> volumes;
  std::vector<double> entropies;
  std::vector<Prop3Pair> pairs;
  /// 1 / (2 pi e): iid fields are monotone in volume iff sigma2 >= this.
  double iid_threshold = 0.0;
  std::int64_t holding = 0;
  std::int64_t counterexamples = 0;
  bool pass = false;  // every non-excluded pair holds

  VerificationReport report(const CovModel& model, std::uint64_t seed) const;
};

/// Entropy of nested windows of growing volume under the given covariance
/// model. Windows are prefixes of a seeded permutation of field coordinates.
Prop3Report verify_prop3(const CovModel& model, const std::vector<std::int64_t>& volumes,
                         std::uint64_t seed);

struct Prop4Window {
  double h1 = 0.0;
  double h2 = 0.0;
  double h_sum = 0.0;
  double gap = 0.0;
  bool degenerate = false;  // an addend window is singular
  bool holds = false;
};

struct Prop4Report {
  std::vector<Prop4Window> windows;
  std::int64_t holding = 0;
  double min_gap = std::numeric_limits<double>::infinity();
  bool pass = false;

  VerificationReport report(std::uint64_t seed) const;
};

/// Analytic check that H((X1 + X2)[W]) > max(H(X1[W]), H(X2[W])) for
/// independent fields, with cov(X1 + X2) = cov1 + cov2.
Prop4Report verify_prop4(const GaussianFieldSpec& spec1, const GaussianFieldSpec& spec2,
                         const std::vector<SubtensorWindow>& windows);

/// Every contiguous window of a w x h x c field (all channels selected).
std::vector<SubtensorWindow> all_contiguous_windows(int w, int h, int c);

/// B B^T / n + min_eig I with B standard normal.
Eigen::MatrixXd random_pd(int n, double min_eig, std::mt19937_64& rng);

struct Prop4BatchReport {
  std::int64_t pairs = 0;
  std::int64_t pairs_holding = 0;
  std::int64_t windows = 0;
  /// Smallest gap among windows whose lower-entropy addend has minimum
  /// eigenvalue >= 1e-3.
  double min_gap_well_conditioned = std::numeric_limits<double>::infinity();
  double min_gap = std::numeric_limits<double>::infinity();
  bool pass = false;

  VerificationReport report(int max_dim, std::uint64_t seed) const;
};

/// Random PD pairs of dimension 1..max_dim on random w x h shapes, all
/// contiguous windows each.
Prop4BatchReport verify_prop4_random(std::int64_t pairs, int max_dim, std::uint64_t seed);

}  // namespace sednas
