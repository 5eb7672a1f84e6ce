#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ncgossip/netmodel.hpp"

namespace ncg {

// Infection-style spread where each delivery fails independently with
// probability p_fault. Indexing starts at S_1 = start set; the process stops
// at the first t with S_t = V, so a complete graph with no faults stops at 2.
struct FloodTrajectory {
  std::vector<std::uint32_t> informed_sizes;       // informed_sizes[i] = |S_{i+1}|
  std::optional<std::uint32_t> stop_time;          // nullopt on timeout
  std::vector<std::vector<bool>> sets;             // only filled when keep_sets
};

FloodTrajectory flood(const ModelSpec& model, double p_fault, const std::vector<std::uint32_t>& start,
                      std::uint32_t max_rounds, RngStream stream, bool keep_sets = false);

// Flooding time T and throughput exponent alpha such that the stopping-time
// tail P[S_F >= T + k] stays below q^(-alpha k) on the observed data. The
// reported alpha is deliberately conservative: the least-squares slope is
// lowered to its one-sided 95% bound and clamped so the padded empirical tail
// satisfies the inequality pointwise at every observed offset.
struct FloodParams {
  double T = 0.0;
  double alpha = 0.0;
  std::uint32_t q = 2;
  std::uint32_t trials = 0;
  double residual = 0.0;      // rms residual of the tail fit
  double alpha_fit = 0.0;     // raw least-squares slope
  double alpha_se = 0.0;      // standard error of the slope
  bool insufficient_tail = false;
  std::uint32_t tail_points = 0;
};

struct StartDiagnostics {
  std::uint32_t start = 0;
  std::uint32_t T = 0;
  double alpha = 0.0;
  double alpha_fit = 0.0;
  double residual = 0.0;
  std::uint32_t tail_points = 0;
  bool insufficient_tail = false;
  std::vector<std::uint32_t> histogram;  // histogram[t] = #trials with S_F == t
};

struct FloodEstimate {
  FloodParams params;
  std::vector<StartDiagnostics> starts;
};

struct FloodEstimateOptions {
  std::uint32_t max_rounds = 4096;
  std::uint32_t max_starts = 8;
  double alpha_cap = 16.0;  // used when the tail is too short to fit
  unsigned threads = 1;
};

// Runs `trials` floods with p_fault = 1/q split over single-node starts,
// builds the empirical tail of S_F per start, sets T to the smallest t whose
// exceedance is below one, fits alpha on the tail, and reports the worst case
// over starts.
FloodEstimate estimate_flood_params(const ModelSpec& model, std::uint32_t q, std::uint32_t trials,
                                    RngStream stream, const FloodEstimateOptions& options = {});

// Checks the definition inequality P[S_F >= T + k] < q^(-alpha k) against a
// sample, at every offset k whose empirical exceedance is strictly inside
// (0, 1).
bool satisfies_flood_tail_bound(const std::vector<std::uint32_t>& stop_times, const FloodParams& params);

}  // namespace ncg
