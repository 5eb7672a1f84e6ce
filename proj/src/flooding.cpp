#include "ncgossip/flooding.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "ncgossip/util.hpp"

namespace ncg {

FloodTrajectory flood(const ModelSpec& model, double p_fault, const std::vector<std::uint32_t>& start,
                      std::uint32_t max_rounds, RngStream stream, bool keep_sets) {
  require(!start.empty(), Err::InvalidArgument, "flood start set must be nonempty");
  require(p_fault >= 0.0 && p_fault <= 1.0, Err::InvalidArgument, "fault probability must lie in [0,1]");
  const std::uint32_t n = model.n;

  std::vector<bool> informed(n, false);
  std::uint32_t count = 0;
  for (auto v : start) {
    require(v < n, Err::InvalidArgument, "start node out of range");
    if (!informed[v]) {
      informed[v] = true;
      ++count;
    }
  }

  FloodTrajectory traj;
  traj.informed_sizes.push_back(count);
  if (keep_sets) traj.sets.push_back(informed);
  if (count == n) {
    traj.stop_time = 1;
    return traj;
  }

  ModelSampler sampler(model, stream);
  for (std::uint32_t t = 1; t <= max_rounds; ++t) {
    ActiveEdgeSet round = sampler.next();
    RngStream fault_rng = stream.child(rngtag::kFloodFault, t);
    std::vector<std::uint32_t> newly;
    for (const auto& e : round.edges) {
      // fault coins are drawn for every active edge in a fixed order so runs
      // with shared seeds stay coupled across different start sets
      bool delivered = p_fault == 0.0 ? true : !fault_rng.bernoulli(p_fault);
      if (delivered && informed[e.from] && !informed[e.to]) newly.push_back(e.to);
    }
    for (auto v : newly) {
      if (!informed[v]) {
        informed[v] = true;
        ++count;
      }
    }
    traj.informed_sizes.push_back(count);
    if (keep_sets) traj.sets.push_back(informed);
    if (count == n) {
      traj.stop_time = t + 1;  // S_{t+1} is the first full set
      return traj;
    }
  }
  return traj;  // timeout: stop_time unset
}

namespace {

struct TailFit {
  double alpha = 0.0;
  double alpha_fit = 0.0;
  double alpha_se = 0.0;
  double residual = 0.0;
  std::uint32_t points = 0;
  bool insufficient = false;
};

// exceedance_ge(t) = P[S_F >= t]
double exceedance_ge(const std::vector<std::uint32_t>& hist, std::uint32_t total, std::uint32_t t) {
  std::uint64_t c = 0;
  for (std::size_t i = t; i < hist.size(); ++i) c += hist[i];
  return static_cast<double>(c) / total;
}

TailFit fit_tail(const std::vector<std::uint32_t>& hist, std::uint32_t total, std::uint32_t T, std::uint32_t q,
                 double alpha_cap) {
  TailFit fit;
  const double logq = std::log2(static_cast<double>(q));
  std::vector<double> ks, ys, ps;
  for (std::uint32_t k = 1; static_cast<std::size_t>(T) + k < hist.size(); ++k) {
    double p = exceedance_ge(hist, total, T + k);
    if (p <= 0.0) break;
    ks.push_back(k);
    ys.push_back(-std::log2(p) / logq);
    ps.push_back(p);
  }
  fit.points = static_cast<std::uint32_t>(ks.size());
  if (fit.points < 3) {
    // effectively deterministic absorption beyond T; report the cap so
    // downstream formulas stay finite
    fit.insufficient = true;
    fit.alpha = alpha_cap;
    fit.alpha_fit = alpha_cap;
    return fit;
  }

  // least squares y = a + b k
  double n = static_cast<double>(ks.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    sx += ks[i];
    sy += ys[i];
    sxx += ks[i] * ks[i];
    sxy += ks[i] * ys[i];
  }
  double denom = n * sxx - sx * sx;
  double slope = (n * sxy - sx * sy) / denom;
  double intercept = (sy - slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    double r = ys[i] - (intercept + slope * ks[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  double se = n > 2 ? std::sqrt((ss / (n - 2)) / (sxx - sx * sx / n)) : 0.0;
  fit.alpha_fit = slope;
  fit.alpha_se = se;

  // conservative: one-sided 95% lower bound on the slope, then clamp to the
  // largest exponent the padded empirical tail satisfies pointwise
  double alpha = slope - 1.645 * se;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    double sigma = std::sqrt(ps[i] * (1.0 - ps[i]) / total);
    double padded = std::min(ps[i] + 3.0 * sigma, 1.0 - 0.5 / total);
    double point = -std::log2(padded) / logq / ks[i];
    alpha = std::min(alpha, point);
  }
  fit.alpha = std::clamp(alpha, 1e-9, alpha_cap);
  return fit;
}

}  // namespace

FloodEstimate estimate_flood_params(const ModelSpec& model, std::uint32_t q, std::uint32_t trials,
                                    RngStream stream, const FloodEstimateOptions& options) {
  require(q >= 2, Err::InvalidArgument, "q must be at least 2");
  require(trials >= 1000, Err::InvalidArgument, "flood estimation requires at least 10^3 trials");
  const std::uint32_t n = model.n;

  std::uint32_t start_count = std::min(n, options.max_starts);
  std::vector<std::uint32_t> starts(start_count);
  for (std::uint32_t j = 0; j < start_count; ++j)
    starts[j] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(j) * n / start_count);

  const double p_fault = 1.0 / static_cast<double>(q);

  FloodEstimate est;
  est.starts.resize(start_count);
  std::mutex timeout_mutex;
  std::optional<std::uint32_t> timed_out_start;

  std::vector<std::vector<std::uint32_t>> samples(start_count);
  for (std::uint32_t j = 0; j < start_count; ++j) {
    std::uint32_t share = trials / start_count + (j < trials % start_count ? 1 : 0);
    samples[j].assign(share, 0);
  }

  for (std::uint32_t j = 0; j < start_count; ++j) {
    auto& sample = samples[j];
    parallel_for(sample.size(), options.threads, [&](std::size_t i) {
      RngStream tr = stream.child(rngtag::kFloodTrial, starts[j], static_cast<std::uint64_t>(i));
      auto traj = flood(model, p_fault, {starts[j]}, options.max_rounds, tr);
      if (!traj.stop_time.has_value()) {
        std::lock_guard<std::mutex> lock(timeout_mutex);
        if (!timed_out_start) timed_out_start = starts[j];
        sample[i] = 0;
        return;
      }
      sample[i] = *traj.stop_time;
    });
  }
  if (timed_out_start)
    fail(Err::Timeout, "flooding did not absorb within max_rounds from start node " + std::to_string(*timed_out_start));

  double worst_T = 0.0;
  double worst_alpha = options.alpha_cap;
  double worst_residual = 0.0;
  double alpha_fit = options.alpha_cap, alpha_se = 0.0;
  bool all_insufficient = true;
  std::uint32_t min_points = 0;
  bool first = true;

  for (std::uint32_t j = 0; j < start_count; ++j) {
    const auto& sample = samples[j];
    std::uint32_t max_t = *std::max_element(sample.begin(), sample.end());
    std::vector<std::uint32_t> hist(max_t + 2, 0);
    for (auto s : sample) hist[s]++;

    // T: smallest t with empirical P[S_F > t] < 1, i.e. the smallest observed
    // stopping time
    std::uint32_t T = *std::min_element(sample.begin(), sample.end());
    auto fit = fit_tail(hist, static_cast<std::uint32_t>(sample.size()), T, q, options.alpha_cap);

    auto& d = est.starts[j];
    d.start = starts[j];
    d.T = T;
    d.alpha = fit.alpha;
    d.alpha_fit = fit.alpha_fit;
    d.residual = fit.residual;
    d.tail_points = fit.points;
    d.insufficient_tail = fit.insufficient;
    d.histogram = hist;

    worst_T = std::max(worst_T, static_cast<double>(T));
    if (!fit.insufficient) all_insufficient = false;
    if (fit.alpha < worst_alpha || first) {
      worst_alpha = std::min(worst_alpha, fit.alpha);
      alpha_fit = fit.alpha_fit;
      alpha_se = fit.alpha_se;
    }
    worst_residual = std::max(worst_residual, fit.residual);
    min_points = first ? fit.points : std::min(min_points, fit.points);
    first = false;
  }

  est.params.T = worst_T;
  est.params.alpha = worst_alpha;
  est.params.q = q;
  est.params.trials = trials;
  est.params.residual = worst_residual;
  est.params.alpha_fit = alpha_fit;
  est.params.alpha_se = alpha_se;
  est.params.insufficient_tail = all_insufficient;
  est.params.tail_points = min_points;
  return est;
}

bool satisfies_flood_tail_bound(const std::vector<std::uint32_t>& stop_times, const FloodParams& params) {
  require(!stop_times.empty(), Err::InvalidArgument, "empty sample");
  const double logq = std::log2(static_cast<double>(params.q));
  std::uint32_t max_t = *std::max_element(stop_times.begin(), stop_times.end());
  std::uint32_t total = static_cast<std::uint32_t>(stop_times.size());
  std::vector<std::uint32_t> hist(max_t + 2, 0);
  for (auto s : stop_times) hist[s]++;
  std::uint32_t T = static_cast<std::uint32_t>(params.T);
  for (std::uint32_t k = 1; T + k <= max_t; ++k) {
    double p = exceedance_ge(hist, total, T + k);
    if (p <= 0.0 || p >= 1.0) continue;
    double bound = std::exp2(-params.alpha * k * logq);
    if (!(p < bound)) return false;
  }
  return true;
}

}  // namespace ncg
