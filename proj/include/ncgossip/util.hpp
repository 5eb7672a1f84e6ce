#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

namespace ncg {

// Ceiling with a small tolerance so values like 10 * 1.1 = 11.000000000000002
// do not round up to 12. Negative inputs clamp to 0.
inline std::uint32_t ceil_tol(double x, double tol = 1e-9) {
  if (x <= tol) return 0;
  return static_cast<std::uint32_t>(std::ceil(x - tol));
}

inline double log_base(double base, double x) { return std::log(x) / std::log(base); }

std::uint64_t fnv1a64(std::string_view s);

// Smallest value v in the sorted sample with empirical CDF(v) >= level.
double sorted_quantile(const std::vector<double>& sorted, double level);

// Runs fn(0..count-1); with threads > 1 the work is spread over a pool but fn
// must only touch per-index state so results do not depend on scheduling.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

unsigned default_thread_count();

}  // namespace ncg
