#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sis/min_principle.hpp"
#include "sis/scenario.hpp"
#include "sis/stats.hpp"

namespace sis::bench {

enum class Method { MDP, OptCtrl, RHC };

std::string to_string(Method m);

struct BenchRecord {
  Method method = Method::MDP;
  std::size_t n = 0;
  std::size_t T = 0;
  std::size_t d = 0;          // max in/out degree
  double wall_time_s = 0.0;   // median solve time
  double mean_cost = 0.0;     // realized closed-loop cost
  double cost_se = 0.0;
  std::size_t replications = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string status = "ok";  // "ok" or "capability" (exact method skipped above the cap)
};

struct BenchConfig {
  std::size_t replications = 100;  // cost rollouts per method; at least 2
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::size_t state_cap = 14;
  mp::SolverOptions solver;
  std::size_t timing_runs = 3;
  double min_sample_seconds = 0.005;  // each timing sample repeats the call until this much time passes
  RandomScenarioSpec scenario;        // template for generated scenarios
};

/// Warm-up call, then the median of `runs` samples. Each sample repeats f
/// until min_seconds have elapsed and reports the mean time per call.
template <class F>
double time_median(F&& f, std::size_t runs, double min_seconds) {
  using clock = std::chrono::steady_clock;
  f();
  std::vector<double> samples;
  for (std::size_t r = 0; r < std::max<std::size_t>(runs, 1); ++r) {
    std::size_t calls = 0;
    const auto start = clock::now();
    double elapsed = 0.0;
    do {
      f();
      ++calls;
      elapsed = std::chrono::duration<double>(clock::now() - start).count();
    } while (elapsed < min_seconds);
    samples.push_back(elapsed / static_cast<double>(calls));
  }
  std::sort(samples.begin(), samples.end());
  return samples[samples.size() / 2];
}

/// Times and evaluates the requested methods on one scenario.
std::vector<BenchRecord> bench_scenario(const Scenario& sc, const BenchConfig& cfg,
                                        const std::vector<Method>& methods);

/// Seeded random scenarios of each size n at fixed horizon T.
std::vector<BenchRecord> sweep_n(const std::vector<std::size_t>& ns, std::size_t T, const BenchConfig& cfg,
                                 const std::vector<Method>& methods = {Method::MDP, Method::OptCtrl,
                                                                       Method::RHC});

/// One static scenario re-targeted to each horizon.
std::vector<BenchRecord> sweep_T(const Scenario& sc, const std::vector<std::size_t>& Ts, const BenchConfig& cfg,
                                 const std::vector<Method>& methods = {Method::MDP, Method::OptCtrl,
                                                                       Method::RHC});

struct MethodSummary {
  bool ran = false;
  MeanSe cost;
  double mean_protections = 0.0;  // per replication
};

struct CompareSummary {
  MethodSummary mdp, optctrl, rhc;
  std::size_t optctrl_schedule_protections = 0;
  /// Share of realized protections that the open-loop schedule also takes
  /// at the same (t, i); 1 when the controller never protects.
  double rhc_in_optctrl = 1.0;
  double mdp_in_optctrl = 1.0;
};

/// Runs all three controllers on common random numbers.
CompareSummary compare_costs(const Scenario& sc, std::uint64_t seed, std::size_t replications,
                             const BenchConfig& cfg = {});

/// Least-squares slope of log(y) against log(x).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

inline const char* kCsvColumns = "method,n,T,d,wall_time_s,mean_cost,cost_se,replications,seed,threads,status";
void write_csv_row(std::ostream& out, const BenchRecord& r);

}  // namespace sis::bench
