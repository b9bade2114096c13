#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "satdyn/models.hpp"
#include "satdyn/rng.hpp"
#include "satdyn/tdist.hpp"

namespace satdyn {

enum class Model { standard, logistic_approx, saturated_exact, saturated_approx };

inline std::string model_name(Model m) {
  switch (m) {
    case Model::standard: return "standard";
    case Model::logistic_approx: return "logistic";
    case Model::saturated_exact: return "saturated";
    case Model::saturated_approx: return "saturated_approx";
  }
  return "unknown";
}

// One experiment: n_samples accumulated-noise draws mapped through a model.
// noise.scale == 0 disables the stochastic term entirely (w = 0 for every
// sample); any positive scale draws scaled t(nu) noise.
struct ExperimentConfig {
  Model model = Model::standard;
  ModelParams params{};
  TDistSpec noise{2.0, 0.157};
  std::size_t n_samples = 4096;
  double horizon_days = 1.0;
  std::uint64_t seed = 0;
};

// Descriptive statistics over paired (S, R) samples. std uses the n-1
// divisor; kurtosis is excess kurtosis g2 = m4/m2^2 - 3 with population
// moments. Undefined entries (n < 2, or zero variance for kurtosis) are NaN.
struct StatsSummary {
  double max_s, min_s, mean_s, std_s, kurt_s;
  double max_r, min_r, mean_r, std_r, kurt_r;
};

namespace detail {

// Samples are drawn in fixed partitions of 256 with stream_index equal to the
// partition ordinal, so results do not depend on how work is split across
// threads.
inline constexpr std::size_t kNoisePartition = 256;

template <class Fn>
void parallel_chunks(std::size_t count, unsigned workers, Fn fn) {
  if (count == 0) return;
  if (workers <= 1 || count == 1) {
    fn(std::size_t{0}, count);
    return;
  }
  const std::size_t n_threads = std::min<std::size_t>(workers, count);
  const std::size_t chunk = (count + n_threads - 1) / n_threads;
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  std::exception_ptr error;
  std::mutex error_mutex;
  for (std::size_t t = 0; t < n_threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(begin + chunk, count);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

inline PriceSample eval_model(Model model, const ModelParams& p, const AccumulatedNoise& noise) {
  switch (model) {
    case Model::standard: return standard_price(p, noise);
    case Model::logistic_approx: return logistic_price_approx(p, noise);
    case Model::saturated_exact: return saturated_price(p, noise);
    case Model::saturated_approx: return saturated_price_approx(p, noise);
  }
  throw std::domain_error("unknown model");
}

}  // namespace detail

// Accumulated noise draws W for n samples, partitioned into deterministic
// substreams. Identical (spec, seed, n) gives bit-identical output for any
// worker count.
inline std::vector<double> draw_accumulated_noise(const TDistSpec& spec, std::uint64_t seed,
                                                  std::size_t n, unsigned workers = 1) {
  if (n < 1) throw std::domain_error("noise draw: need at least one sample");
  if (spec.scale == 0.0) return std::vector<double>(n, 0.0);
  if (!(spec.scale > 0.0)) throw std::domain_error("noise draw: scale must be non-negative");
  detail::check_nu(spec.nu);
  std::vector<double> w(n);
  const std::size_t parts = (n + detail::kNoisePartition - 1) / detail::kNoisePartition;
  detail::parallel_chunks(parts, workers, [&](std::size_t pbegin, std::size_t pend) {
    for (std::size_t part = pbegin; part < pend; ++part) {
      RngStream rng({seed, part});
      const std::size_t begin = part * detail::kNoisePartition;
      const std::size_t end = std::min(begin + detail::kNoisePartition, n);
      for (std::size_t i = begin; i < end; ++i) {
        w[i] = spec.scale * rng.student_t(spec.nu);
      }
    }
  });
  return w;
}

inline StatsSummary descriptive_stats(std::span<const PriceSample> samples) {
  const std::size_t n = samples.size();
  if (n == 0) throw std::domain_error("descriptive stats: empty sample set");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto column = [&](auto accessor, double& mx, double& mn, double& mean, double& sd, double& kt) {
    mx = -std::numeric_limits<double>::infinity();
    mn = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (const auto& ps : samples) {
      const double v = accessor(ps);
      mx = std::max(mx, v);
      mn = std::min(mn, v);
      sum += v;
    }
    mean = sum / static_cast<double>(n);
    if (n < 2) {
      sd = nan;
      kt = nan;
      return;
    }
    double m2 = 0.0;
    double m4 = 0.0;
    for (const auto& ps : samples) {
      const double d = accessor(ps) - mean;
      const double d2 = d * d;
      m2 += d2;
      m4 += d2 * d2;
    }
    sd = std::sqrt(m2 / static_cast<double>(n - 1));
    m2 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    kt = m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : nan;
  };
  StatsSummary out{};
  column([](const PriceSample& ps) { return ps.s; }, out.max_s, out.min_s, out.mean_s, out.std_s,
         out.kurt_s);
  column([](const PriceSample& ps) { return ps.r; }, out.max_r, out.min_r, out.mean_r, out.std_r,
         out.kurt_r);
  return out;
}

struct ExperimentResult {
  std::vector<PriceSample> samples;
  StatsSummary stats;
};

namespace detail {

inline void check_config(const ExperimentConfig& cfg) {
  check_params(cfg.params);
  if (cfg.n_samples < 1) throw std::domain_error("experiment: need at least one sample");
  if (!(cfg.horizon_days > 0.0)) throw std::domain_error("experiment: horizon must be positive");
  if (cfg.model == Model::saturated_approx && !(cfg.params.beta * cfg.params.s0 < 1.0)) {
    throw std::domain_error("experiment: saturated approximation requires beta*s0 < 1");
  }
}

inline std::vector<PriceSample> map_noise(const ExperimentConfig& cfg,
                                          std::span<const double> w, unsigned workers) {
  std::vector<PriceSample> samples(w.size());
  parallel_chunks(w.size(), workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      samples[i] =
          eval_model(cfg.model, cfg.params, accumulate(cfg.params.alpha, cfg.horizon_days, w[i]));
    }
  });
  return samples;
}

}  // namespace detail

// Runs one experiment: draws the noise, maps it through the configured model
// and summarizes. Deterministic per config (seed included) regardless of the
// worker count.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned workers = 1) {
  detail::check_config(cfg);
  const auto w = draw_accumulated_noise(cfg.noise, cfg.seed, cfg.n_samples, workers);
  auto samples = detail::map_noise(cfg, w, workers);
  auto stats = descriptive_stats(samples);
  return {std::move(samples), stats};
}

struct ComparativeTable {
  std::vector<double> betas;
  std::vector<StatsSummary> columns;
};

// One column of summary statistics per beta value, all columns sharing the
// identical noise stream so they differ only in the saturation strength.
inline ComparativeTable comparative_table(const ExperimentConfig& base,
                                          std::span<const double> betas, unsigned workers = 1) {
  if (betas.empty()) throw std::domain_error("comparative table: need at least one beta");
  const auto w = draw_accumulated_noise(base.noise, base.seed, base.n_samples, workers);
  ComparativeTable table;
  table.betas.assign(betas.begin(), betas.end());
  table.columns.reserve(betas.size());
  for (const double beta : betas) {
    ExperimentConfig cfg = base;
    cfg.params.beta = beta;
    detail::check_config(cfg);
    const auto samples = detail::map_noise(cfg, w, workers);
    table.columns.push_back(descriptive_stats(samples));
  }
  return table;
}

}  // namespace satdyn
