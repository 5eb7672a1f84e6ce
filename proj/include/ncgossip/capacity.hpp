#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncgossip/flooding.hpp"
#include "ncgossip/netmodel.hpp"
#include "ncgossip/sources.hpp"

namespace ncg {

// Exact nonnegative rational with a small denominator; demands and path
// weights stay rational so feasibility never hinges on floating point.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d);
  static Rational parse(const std::string& text);  // "3", "1/8"
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

Rational rat_add(const Rational& a, const Rational& b);
bool rat_less_equal(const Rational& a, const Rational& b);

struct DemandSource {
  std::uint32_t node = 0;
  Rational c;
};

struct CapacityDemand {
  std::vector<DemandSource> sources;
  std::uint32_t sink = 0;
};

// Flow network over (node, round) copies: memory arcs (v,t)->(v,t+1) with
// unbounded capacity and one unit-capacity communication arc (u,t-1)->(v,t)
// for each (u,v) active in round t.
class TimeExpandedGraph {
public:
  TimeExpandedGraph(std::uint32_t n, std::vector<std::vector<Edge>> rounds);

  std::uint32_t n() const { return n_; }
  std::uint32_t horizon() const { return static_cast<std::uint32_t>(rounds_.size()); }  // T
  const std::vector<std::vector<Edge>>& rounds() const { return rounds_; }
  std::uint64_t arc_count() const;  // communication arcs + memory arcs

private:
  std::uint32_t n_ = 0;
  std::vector<std::vector<Edge>> rounds_;
};

// A time-respecting path v_0..v_T (stay or use an active edge each round)
// carrying a rational weight, attributed to one demand source.
struct WeightedPath {
  std::uint32_t source = 0;
  std::vector<std::uint32_t> nodes;
  Rational weight;
};

struct FeasibilityResult {
  bool feasible = false;
  std::vector<WeightedPath> paths;  // witness; empty when infeasible
};

// Scales demands by the common denominator, runs integral max-flow from a
// super-source, and recovers witness paths by flow decomposition.
FeasibilityResult feasible(const TimeExpandedGraph& graph, const CapacityDemand& demand,
                           std::int64_t max_denominator = 1024);

// Checks that every path is a legal time-respecting path, per-edge-per-round
// weights sum to at most one, and each source's paths carry at least its
// demanded capacity. Exact rational arithmetic throughout.
bool validate_paths(const std::vector<WeightedPath>& paths, const std::vector<std::vector<Edge>>& rounds,
                    const CapacityDemand& demand, std::uint32_t n);

// Samples rounds from the model until the demand becomes feasible; nullopt on
// timeout.
std::optional<std::uint32_t> first_feasible_time(const ModelSpec& model, const CapacityDemand& demand,
                                                 std::uint32_t max_rounds, RngStream stream,
                                                 std::int64_t max_denominator = 1024);

// Round bound for multi-source decoding driven by a sufficient capacity
// vector. delta appears twice in the printed formula; both occurrences are
// exposed so either reading can be probed.
double theorem5_bound(const FloodParams& params, const JointSource& source, std::uint32_t node,
                      std::span<const double> caps, std::uint32_t l, std::uint32_t s, double epsilon,
                      double delta_rate, double delta_rounds);

}  // namespace ncg
