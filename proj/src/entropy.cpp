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

#include "sednas/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <thread>

#include "sednas/rng.hpp"

namespace sednas {

using nlohmann::ordered_json;

namespace {

const double kLog2TwoPiE = std::log2(2.0 * std::numbers::pi * std::numbers::e);

bool strictly_increasing_within(const std::vector<int>& v, int bound) {
  if (v.empty()) return false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 0 || v[i] >= bound) return false;
    if (i > 0 && v[i] <= v[i - 1]) return false;
  }
  return true;
}

int ceil_div(int a, int b) { return (a + b - 1) / b; }

ordered_json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

FeatureField FeatureField::filled(int w, int h, int c, double value) {
  if (w < 1 || h < 1 || c < 1) throw DomainError("field extents must be >= 1");
  FeatureField f;
  f.w = w;
  f.h = h;
  f.c = c;
  f.entries.assign(static_cast<std::size_t>(w) * h * c, value);
  return f;
}

FeatureField FeatureField::from(int w, int h, int c, std::vector<double> entries) {
  if (w < 1 || h < 1 || c < 1) throw DomainError("field extents must be >= 1");
  if (entries.size() != static_cast<std::size_t>(w) * h * c) {
    throw DomainError("field has " + std::to_string(entries.size()) + " entries, expected " +
                      std::to_string(static_cast<std::size_t>(w) * h * c));
  }
  for (double e : entries) {
    if (!std::isfinite(e)) throw DomainError("field entries must be finite");
  }
  FeatureField f;
  f.w = w;
  f.h = h;
  f.c = c;
  f.entries = std::move(entries);
  return f;
}

SubtensorWindow SubtensorWindow::contiguous(int i0, int j0, int v0, int m, int n, int r) {
  SubtensorWindow win;
  for (int a = 0; a < m; ++a) win.alpha.push_back(i0 + a);
  for (int b = 0; b < n; ++b) win.beta.push_back(j0 + b);
  for (int e = 0; e < r; ++e) win.gamma.push_back(v0 + e);
  return win;
}

bool SubtensorWindow::fits(int w, int h, int c) const {
  return strictly_increasing_within(alpha, w) && strictly_increasing_within(beta, h) &&
         strictly_increasing_within(gamma, c);
}

FeatureField extract(const FeatureField& x, const SubtensorWindow& win) {
  if (!win.fits(x.w, x.h, x.c)) throw DomainError("window does not fit the field");
  const int m = static_cast<int>(win.alpha.size());
  const int n = static_cast<int>(win.beta.size());
  const int r = static_cast<int>(win.gamma.size());
  FeatureField out = FeatureField::filled(m, n, r, 0.0);
  for (int e = 0; e < r; ++e) {
    for (int b = 0; b < n; ++b) {
      for (int a = 0; a < m; ++a) {
        out.at(a, b, e) = x.at(win.alpha[a], win.beta[b], win.gamma[e]);
      }
    }
  }
  return out;
}

double one_dim_entropy(std::span<const double> values) {
  if (values.empty()) throw DomainError("entropy of an empty tensor");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double h = 0.0;
  std::size_t run = 1;
  for (std::size_t i = 1; i <= sorted.size(); ++i) {
    if (i < sorted.size() && sorted[i] == sorted[i - 1]) {
      ++run;
      continue;
    }
    const double p = static_cast<double>(run) / n;
    h -= p * std::log2(p);
    run = 1;
  }
  return h == 0.0 ? 0.0 : h;  // avoid -0
}

double one_dim_entropy(const FeatureField& x) { return one_dim_entropy(x.entries); }

GaussianFieldSpec GaussianFieldSpec::make(Eigen::VectorXd mean, Eigen::MatrixXd cov) {
  const int n = static_cast<int>(mean.size());
  return make(std::move(mean), std::move(cov), n, 1, 1);
}

GaussianFieldSpec GaussianFieldSpec::make(Eigen::VectorXd mean, Eigen::MatrixXd cov, int w,
                                          int h, int c) {
  const Eigen::Index n = mean.size();
  if (n < 1) throw DomainError("gaussian field needs dim >= 1");
  if (cov.rows() != n || cov.cols() != n) throw DomainError("covariance shape does not match mean");
  if (static_cast<Eigen::Index>(w) * h * c != n) throw DomainError("field shape does not match dim");
  log2_det(cov);  // symmetry and PSD checks
  GaussianFieldSpec s;
  s.mean = std::move(mean);
  s.cov = std::move(cov);
  s.w = w;
  s.h = h;
  s.c = c;
  return s;
}

double log2_det(const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols() || cov.rows() == 0) throw DomainError("covariance must be square");
  if (!cov.allFinite()) throw DomainError("covariance must be finite");
  if (((cov - cov.transpose()).cwiseAbs().maxCoeff()) > 1e-12) {
    throw DomainError("covariance is not symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) {
    const Eigen::VectorXd diag = llt.matrixLLT().diagonal();
    double s = 0.0;
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
      if (!(diag[i] > 0.0)) return kNegInf;
      s += std::log2(diag[i]);
    }
    return 2.0 * s;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10) {
    throw DomainError("covariance is not positive semidefinite");
  }
  return kNegInf;
}

double gaussian_entropy(const Eigen::MatrixXd& cov) {
  const double ld = log2_det(cov);
  if (ld == kNegInf) return kNegInf;
  return 0.5 * (static_cast<double>(cov.rows()) * kLog2TwoPiE + ld);
}

double gaussian_entropy(const GaussianFieldSpec& spec) { return gaussian_entropy(spec.cov); }

Eigen::MatrixXd window_covariance(const GaussianFieldSpec& spec, const SubtensorWindow& win) {
  if (!win.fits(spec.w, spec.h, spec.c)) throw DomainError("window does not fit the field");
  std::vector<Eigen::Index> idx;
  idx.reserve(win.volume());
  for (int v : win.gamma) {
    for (int j : win.beta) {
      for (int i : win.alpha) {
        idx.push_back((static_cast<Eigen::Index>(v) * spec.h + j) * spec.w + i);
      }
    }
  }
  const auto k = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd sub(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) sub(a, b) = spec.cov(idx[a], idx[b]);
  }
  return sub;
}

FeatureField pool2d(const FeatureField& x, const PoolSpec& pool, const StrideSpec& stride) {
  if (pool.o_w < 1 || pool.o_h < 1 || stride.s_1 < 1 || stride.s_2 < 1) {
    throw DomainError("pool size and stride must be >= 1");
  }
  if (pool.o_w > x.w || pool.o_h > x.h) throw DomainError("pool is larger than the field");
  const int ow = (x.w - pool.o_w) / stride.s_1 + 1;
  const int oh = (x.h - pool.o_h) / stride.s_2 + 1;
  FeatureField out = FeatureField::filled(ow, oh, x.c, 0.0);
  const double area = static_cast<double>(pool.o_w) * pool.o_h;
  for (int v = 0; v < x.c; ++v) {
    for (int j = 0; j < oh; ++j) {
      for (int i = 0; i < ow; ++i) {
        const int i0 = i * stride.s_1;
        const int j0 = j * stride.s_2;
        double acc = pool.kind == PoolKind::max ? x.at(i0, j0, v) : 0.0;
        for (int b = 0; b < pool.o_h; ++b) {
          for (int a = 0; a < pool.o_w; ++a) {
            const double e = x.at(i0 + a, j0 + b, v);
            if (pool.kind == PoolKind::max) {
              acc = std::max(acc, e);
            } else {
              acc += e;
            }
          }
        }
        out.at(i, j, v) = pool.kind == PoolKind::max ? acc : acc / area;
      }
    }
  }
  return out;
}

FeatureField max_pool(const FeatureField& x, const PoolSpec& pool, const StrideSpec& stride) {
  PoolSpec p = pool;
  p.kind = PoolKind::max;
  return pool2d(x, p, stride);
}

bool zero_entropy_window_exists(const FeatureField& x, int win_w, int win_h, double epsilon) {
  if (win_w < 1 || win_h < 1 || win_w > x.w || win_h > x.h) {
    throw DomainError("window must fit inside the field");
  }
  for (int v = 0; v < x.c; ++v) {
    for (int j = 0; j + win_h <= x.h; ++j) {
      for (int i = 0; i + win_w <= x.w; ++i) {
        const double first = x.at(i, j, v);
        double lo = first;
        double hi = first;
        bool flat = true;
        for (int b = 0; b < win_h && flat; ++b) {
          for (int a = 0; a < win_w; ++a) {
            const double e = x.at(i + a, j + b, v);
            lo = std::min(lo, e);
            hi = std::max(hi, e);
            if (hi - lo > epsilon) {
              flat = false;
              break;
            }
          }
        }
        if (flat) return true;
      }
    }
  }
  return false;
}

double prop2_bound(int w, int h, int o_w, int o_h) {
  const double m = std::max(o_w, o_h) - 2.0;
  return 1.0 - 2.0 * m * (w + h) / (static_cast<double>(w) * h);
}

ordered_json VerificationReport::to_json() const {
  ordered_json j;
  j["proposition"] = proposition;
  j["parameters"] = parameters;
  j["seed"] = seed;
  j["trials"] = trials;
  j["statistic"] = finite_or_null(statistic);
  j["bound"] = finite_or_null(bound);
  j["pass"] = pass;
  j["details"] = details;
  return j;
}

// ---------------------------------------------------------------------------
// Constant patches through a convolution

Prop1Report verify_prop1(const KernelSpec& kernel, std::int64_t trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (kernel.k_w < 1 || kernel.k_h < 1 || kernel.k_c < 1) {
    throw DomainError("kernel extents must be >= 1");
  }
  const int kw = kernel.k_w;
  const int kh = kernel.k_h;
  const int kc = kernel.k_c;
  const auto kn = static_cast<std::size_t>(kw) * kh * kc;

  // Full-depth valid convolution with the flipped kernel, stride 1.
  auto convolve = [&](const FeatureField& x, const std::vector<double>& k) {
    std::vector<double> out;
    for (int y = 0; y + kh <= x.h; ++y) {
      for (int xx = 0; xx + kw <= x.w; ++xx) {
        double acc = 0.0;
        for (int v = 0; v < kc; ++v) {
          for (int b = 0; b < kh; ++b) {
            for (int a = 0; a < kw; ++a) {
              const std::size_t flipped =
                  (static_cast<std::size_t>(kc - 1 - v) * kh + (kh - 1 - b)) * kw + (kw - 1 - a);
              acc += x.at(xx + a, y + b, v) * k[flipped];
            }
          }
        }
        out.push_back(acc);
      }
    }
    return out;
  };
  auto relu = [](double v) { return v > 0.0 ? v : 0.0; };

  Prop1Report r;
  r.trials = trials;
  std::int64_t varying = 0;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> extra(1, 4);
  for (std::int64_t t = 0; t < trials; ++t) {
    auto rng = trial_rng(seed, static_cast<std::uint64_t>(t));
    normal.reset();
    std::vector<double> k(kn);
    for (double& e : k) e = normal(rng);
    double ksum = 0.0;
    for (double e : k) ksum += e;
    const int w = kw + extra(rng);
    const int h = kh + extra(rng);
    const double c = normal(rng);

    const FeatureField constant = FeatureField::filled(w, h, kc, c);
    const double expected = c * ksum;
    for (double out : convolve(constant, k)) {
      r.max_deviation = std::max(r.max_deviation, std::abs(out - expected));
      r.max_deviation = std::max(r.max_deviation, std::abs(relu(out) - relu(expected)));
    }

    const FeatureField zero = FeatureField::filled(w, h, kc, 0.0);
    for (double out : convolve(zero, k)) {
      r.zero_patch_max = std::max(r.zero_patch_max, std::abs(out));
    }

    FeatureField noise = FeatureField::filled(w, h, kc, 0.0);
    for (double& e : noise.entries) e = normal(rng);
    const auto outs = convolve(noise, k);
    const auto [lo, hi] = std::minmax_element(outs.begin(), outs.end());
    if (*hi - *lo > 1e-9) ++varying;
  }
  r.negative_control_fraction = static_cast<double>(varying) / static_cast<double>(trials);
  r.pass = r.max_deviation < 1e-12 && r.zero_patch_max == 0.0 &&
           r.negative_control_fraction >= 0.99;
  return r;
}

VerificationReport Prop1Report::report(const KernelSpec& k, std::uint64_t seed) const {
  VerificationReport v;
  v.proposition = 1;
  v.parameters["kernel"] = {k.k_w, k.k_h, k.k_c};
  v.seed = seed;
  v.trials = trials;
  v.statistic = max_deviation;
  v.bound = 1e-12;
  v.pass = pass;
  v.details["max_deviation"] = max_deviation;
  v.details["zero_patch_max"] = zero_patch_max;
  v.details["negative_control_fraction"] = negative_control_fraction;
  return v;
}

// ---------------------------------------------------------------------------
// Zero-entropy windows after pooling

Prop2Report verify_prop2(int w, int h, const PoolSpec& pool, const StrideSpec& stride,
                         std::int64_t trials, std::uint64_t seed, const Prop2Options& options) {
  if (trials < 100) throw std::invalid_argument("trials must be >= 100");
  if (pool.o_w < 1 || pool.o_h < 1 || pool.o_w > w || pool.o_h > h) {
    throw DomainError("pool must fit inside the field");
  }
  if (stride.s_1 < 1 || stride.s_2 < 1) throw DomainError("stride must be >= 1");
  if (options.distribution == FieldDistribution::discrete_uniform && options.levels < 1) {
    throw DomainError("levels must be >= 1");
  }
  Prop2Report r;
  r.trials = trials;
  r.window_w = ceil_div(pool.o_w, stride.s_1);
  r.window_h = ceil_div(pool.o_h, stride.s_2);
  const int out_w = (w - pool.o_w) / stride.s_1 + 1;
  const int out_h = (h - pool.o_h) / stride.s_2 + 1;
  if (r.window_w > out_w || r.window_h > out_h) {
    throw DomainError("pooled field is smaller than the scan window");
  }

  auto run = [&](std::int64_t lo, std::int64_t hi) {
    std::int64_t hits = 0;
    FeatureField x = FeatureField::filled(w, h, 1, 0.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_int_distribution<int> level(0, std::max(0, options.levels - 1));
    for (std::int64_t t = lo; t < hi; ++t) {
      auto rng = trial_rng(seed, static_cast<std::uint64_t>(t));
      normal.reset();
      for (double& e : x.entries) {
        e = options.distribution == FieldDistribution::normal ? normal(rng)
                                                              : static_cast<double>(level(rng));
      }
      if (zero_entropy_window_exists(pool2d(x, pool, stride), r.window_w, r.window_h)) ++hits;
    }
    return hits;
  };

  const unsigned workers =
      std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(trials)));
  if (workers == 1) {
    r.hits = run(0, trials);
  } else {
    std::vector<std::int64_t> partial(workers, 0);
    {
      std::vector<std::jthread> pool_threads;
      const std::int64_t chunk = (trials + workers - 1) / workers;
      for (unsigned t = 0; t < workers; ++t) {
        const std::int64_t lo = t * chunk;
        const std::int64_t hi = std::min<std::int64_t>(trials, lo + chunk);
        pool_threads.emplace_back([&, t, lo, hi] { partial[t] = lo < hi ? run(lo, hi) : 0; });
      }
    }
    r.hits = std::accumulate(partial.begin(), partial.end(), std::int64_t{0});
  }

  r.empirical_freq = static_cast<double>(r.hits) / static_cast<double>(trials);
  r.bound = prop2_bound(w, h, pool.o_w, pool.o_h);
  r.trivially_pass = r.bound <= 0.0 || r.bound >= 1.0;
  if (r.trivially_pass) {
    r.std_error = 0.0;
    r.threshold = r.bound;
    r.pass = true;
  } else {
    r.std_error = std::sqrt(r.bound * (1.0 - r.bound) / static_cast<double>(trials));
    r.threshold = r.bound - 2.0 * r.std_error;
    r.pass = r.empirical_freq >= r.threshold;
  }
  return r;
}

VerificationReport Prop2Report::report(int w, int h, const PoolSpec& pool,
                                       const StrideSpec& stride, std::uint64_t seed) const {
  VerificationReport v;
  v.proposition = 2;
  v.parameters["w"] = w;
  v.parameters["h"] = h;
  v.parameters["pool"] = {pool.o_w, pool.o_h};
  v.parameters["pool_kind"] = pool.kind == PoolKind::max ? "max" : "avg";
  v.parameters["stride"] = {stride.s_1, stride.s_2};
  v.seed = seed;
  v.trials = trials;
  v.statistic = empirical_freq;
  v.bound = bound;
  v.pass = pass;
  v.details["hits"] = hits;
  v.details["std_error"] = std_error;
  v.details["threshold"] = threshold;
  v.details["window"] = {window_w, window_h};
  v.details["trivially_pass"] = trivially_pass;
  return v;
}

// ---------------------------------------------------------------------------
// Entropy against window volume

Prop3Report verify_prop3(const CovModel& model, const std::vector<std::int64_t>& volumes,
                         std::uint64_t seed) {
  if (volumes.empty()) throw std::invalid_argument("at least one window volume is required");
  for (auto v : volumes) {
    if (v < 1) throw DomainError("window volumes must be >= 1");
  }
  if (!(model.sigma2 > 0.0)) throw DomainError("covariance is not positive definite (sigma2 <= 0)");
  if (model.kind == CovModel::Kind::toeplitz && !(std::abs(model.rho) < 1.0)) {
    throw DomainError("covariance is not positive definite (|rho| >= 1)");
  }
  const auto n = *std::max_element(volumes.begin(), volumes.end());
  if (n > 4096) throw DomainError("window volume too large");

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  auto rng = trial_rng(seed, 0);
  std::shuffle(order.begin(), order.end(), rng);

  auto entropy_of = [&](std::int64_t vol) {
    std::vector<int> idx(order.begin(), order.begin() + vol);
    std::sort(idx.begin(), idx.end());
    Eigen::MatrixXd cov(vol, vol);
    for (std::int64_t a = 0; a < vol; ++a) {
      for (std::int64_t b = 0; b < vol; ++b) {
        if (model.kind == CovModel::Kind::iid) {
          cov(a, b) = a == b ? model.sigma2 : 0.0;
        } else {
          cov(a, b) = model.sigma2 * std::pow(model.rho, std::abs(idx[a] - idx[b]));
        }
      }
    }
    return gaussian_entropy(cov);
  };

  Prop3Report r;
  r.volumes = volumes;
  r.iid_threshold = 1.0 / (2.0 * std::numbers::pi * std::numbers::e);
  for (auto v : volumes) r.entropies.push_back(entropy_of(v));
  constexpr double kTol = 1e-9;
  for (std::size_t a = 0; a < volumes.size(); ++a) {
    for (std::size_t b = 0; b < volumes.size(); ++b) {
      if (volumes[a] <= volumes[b]) continue;
      Prop3Pair p;
      p.larger = volumes[a];
      p.smaller = volumes[b];
      p.h_larger = r.entropies[a];
      p.h_smaller = r.entropies[b];
      p.side_condition = p.larger == 2 * p.smaller;
      p.holds = p.h_larger >= p.h_smaller - kTol;
      if (!p.side_condition) {
        if (p.holds) {
          ++r.holding;
        } else {
          ++r.counterexamples;
        }
      }
      r.pairs.push_back(p);
    }
  }
  r.pass = r.counterexamples == 0;
  return r;
}

VerificationReport Prop3Report::report(const CovModel& model, std::uint64_t seed) const {
  VerificationReport v;
  v.proposition = 3;
  v.parameters["model"] = model.kind == CovModel::Kind::iid ? "iid" : "toeplitz";
  v.parameters["sigma2"] = model.sigma2;
  if (model.kind == CovModel::Kind::toeplitz) v.parameters["rho"] = model.rho;
  v.parameters["volumes"] = volumes;
  v.seed = seed;
  v.trials = static_cast<std::int64_t>(pairs.size());
  const auto checked = holding + counterexamples;
  v.statistic = checked > 0 ? static_cast<double>(holding) / static_cast<double>(checked) : 1.0;
  v.bound = iid_threshold;
  v.pass = pass;
  ordered_json ents = ordered_json::array();
  for (std::size_t i = 0; i < volumes.size(); ++i) {
    ents.push_back({{"volume", volumes[i]}, {"entropy", finite_or_null(entropies[i])}});
  }
  v.details["entropies"] = ents;
  ordered_json ps = ordered_json::array();
  for (const auto& p : pairs) {
    ps.push_back({{"larger", p.larger},
                  {"smaller", p.smaller},
                  {"h_larger", finite_or_null(p.h_larger)},
                  {"h_smaller", finite_or_null(p.h_smaller)},
                  {"holds", p.holds},
                  {"side_condition_excluded", p.side_condition}});
  }
  v.details["pairs"] = ps;
  v.details["counterexamples"] = counterexamples;
  if (model.kind == CovModel::Kind::iid) {
    v.details["regime"] = model.sigma2 >= iid_threshold ? "confirming" : "refuting";
  }
  return v;
}

// ---------------------------------------------------------------------------
// Entropy of summed independent fields

Prop4Report verify_prop4(const GaussianFieldSpec& spec1, const GaussianFieldSpec& spec2,
                         const std::vector<SubtensorWindow>& windows) {
  if (spec1.dim() != spec2.dim() || spec1.w != spec2.w || spec1.h != spec2.h ||
      spec1.c != spec2.c) {
    throw std::invalid_argument("fields must have the same shape");
  }
  GaussianFieldSpec sum = spec1;
  sum.mean = spec1.mean + spec2.mean;
  sum.cov = spec1.cov + spec2.cov;

  Prop4Report r;
  for (const auto& win : windows) {
    Prop4Window pw;
    pw.h1 = gaussian_entropy(window_covariance(spec1, win));
    pw.h2 = gaussian_entropy(window_covariance(spec2, win));
    pw.h_sum = gaussian_entropy(window_covariance(sum, win));
    const double best = std::max(pw.h1, pw.h2);
    pw.degenerate = pw.h1 == kNegInf || pw.h2 == kNegInf;
    pw.gap = pw.h_sum - best;
    pw.holds = pw.degenerate || pw.h_sum > best;
    if (!pw.degenerate) r.min_gap = std::min(r.min_gap, pw.gap);
    if (pw.holds) ++r.holding;
    r.windows.push_back(pw);
  }
  r.pass = r.holding == static_cast<std::int64_t>(r.windows.size());
  return r;
}

VerificationReport Prop4Report::report(std::uint64_t seed) const {
  VerificationReport v;
  v.proposition = 4;
  v.seed = seed;
  v.trials = static_cast<std::int64_t>(windows.size());
  v.statistic = windows.empty() ? 1.0
                                : static_cast<double>(holding) / static_cast<double>(windows.size());
  v.bound = 1.0;
  v.pass = pass;
  v.details["min_gap_bits"] = finite_or_null(min_gap);
  ordered_json ws = ordered_json::array();
  for (const auto& w : windows) {
    ws.push_back({{"h1", finite_or_null(w.h1)},
                  {"h2", finite_or_null(w.h2)},
                  {"h_sum", finite_or_null(w.h_sum)},
                  {"gap", finite_or_null(w.gap)},
                  {"degenerate", w.degenerate},
                  {"holds", w.holds}});
  }
  v.details["windows"] = ws;
  return v;
}

std::vector<SubtensorWindow> all_contiguous_windows(int w, int h, int c) {
  std::vector<SubtensorWindow> out;
  for (int i0 = 0; i0 < w; ++i0) {
    for (int m = 1; i0 + m <= w; ++m) {
      for (int j0 = 0; j0 < h; ++j0) {
        for (int n = 1; j0 + n <= h; ++n) {
          out.push_back(SubtensorWindow::contiguous(i0, j0, 0, m, n, c));
        }
      }
    }
  }
  return out;
}

Eigen::MatrixXd random_pd(int n, double min_eig, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd b(n, n);
  for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = normal(rng);
  Eigen::MatrixXd a = b * b.transpose() / static_cast<double>(n);
  a += min_eig * Eigen::MatrixXd::Identity(n, n);
  return 0.5 * (a + a.transpose());
}

Prop4BatchReport verify_prop4_random(std::int64_t pairs, int max_dim, std::uint64_t seed) {
  if (pairs < 1) throw std::invalid_argument("pairs must be >= 1");
  if (max_dim < 1) throw std::invalid_argument("max_dim must be >= 1");
  Prop4BatchReport r;
  r.pairs = pairs;
  for (std::int64_t p = 0; p < pairs; ++p) {
    auto rng = trial_rng(seed, static_cast<std::uint64_t>(p));
    const int n = std::uniform_int_distribution<int>(1, max_dim)(rng);
    std::vector<int> divisors;
    for (int d = 1; d <= n; ++d) {
      if (n % d == 0) divisors.push_back(d);
    }
    const int w = divisors[std::uniform_int_distribution<std::size_t>(0, divisors.size() - 1)(rng)];
    const int h = n / w;
    std::uniform_real_distribution<double> log_eig(-6.0, 0.0);
    const double e1 = std::pow(10.0, log_eig(rng));
    const double e2 = std::pow(10.0, log_eig(rng));
    const auto s1 = GaussianFieldSpec::make(Eigen::VectorXd::Zero(n), random_pd(n, e1, rng), w, h, 1);
    const auto s2 = GaussianFieldSpec::make(Eigen::VectorXd::Zero(n), random_pd(n, e2, rng), w, h, 1);
    const auto windows = all_contiguous_windows(w, h, 1);
    const Prop4Report rep = verify_prop4(s1, s2, windows);
    r.windows += static_cast<std::int64_t>(windows.size());
    if (rep.pass) ++r.pairs_holding;
    for (std::size_t i = 0; i < windows.size(); ++i) {
      const Prop4Window& pw = rep.windows[i];
      if (pw.degenerate) continue;
      r.min_gap = std::min(r.min_gap, pw.gap);
      const GaussianFieldSpec& smaller = pw.h1 <= pw.h2 ? s1 : s2;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(window_covariance(smaller, windows[i]),
                                                         Eigen::EigenvaluesOnly);
      if (eig.eigenvalues().minCoeff() >= 1e-3) {
        r.min_gap_well_conditioned = std::min(r.min_gap_well_conditioned, pw.gap);
      }
    }
  }
  r.pass = r.pairs_holding == r.pairs &&
           (!std::isfinite(r.min_gap_well_conditioned) || r.min_gap_well_conditioned >= 1e-9);
  return r;
}

VerificationReport Prop4BatchReport::report(int max_dim, std::uint64_t seed) const {
  VerificationReport v;
  v.proposition = 4;
  v.parameters["max_dim"] = max_dim;
  v.parameters["pairs"] = pairs;
  v.seed = seed;
  v.trials = pairs;
  v.statistic = static_cast<double>(pairs_holding) / static_cast<double>(pairs);
  v.bound = 1.0;
  v.pass = pass;
  v.details["pairs_holding"] = pairs_holding;
  v.details["windows"] = windows;
  v.details["min_gap_bits"] = finite_or_null(min_gap);
  v.details["min_gap_well_conditioned_bits"] = finite_or_null(min_gap_well_conditioned);
  return v;
}

}  // namespace sednas
