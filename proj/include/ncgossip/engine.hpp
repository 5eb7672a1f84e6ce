#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "ncgossip/coding.hpp"
#include "ncgossip/flooding.hpp"
#include "ncgossip/netmodel.hpp"
#include "ncgossip/sources.hpp"

namespace ncg {

// Which event counts as "node v can decode".
enum class Scenario {
  PlainMessages,        // k opaque messages, one block each; decode = full rank k
  SingleSourceSideInfo, // k = 1, per-node threshold from H(X | Y_v)
  TwoSourceJoint,       // k = 2, shared threshold from H(X1, X2)
};

struct StopRule {
  enum class Kind { AllNodes, SingleNode } kind = Kind::AllNodes;
  std::uint32_t node = 0;
};

struct ExperimentSpec {
  ModelSpec model;
  FieldRef field;
  Scenario scenario = Scenario::PlainMessages;
  std::shared_ptr<const JointSource> source;  // unused for PlainMessages
  std::uint32_t k_plain = 1;
  std::map<std::uint32_t, std::vector<std::uint32_t>> placement;  // message -> source nodes
  std::uint32_t l = 1;
  std::uint32_t s = 1;
  double delta = 0.1;
  double epsilon = 0.1;
  StopRule stop;
  std::uint32_t max_rounds = 1000;
  std::uint32_t trials = 100;
  std::vector<std::uint32_t> trace_nodes;
  bool check_consistency = false;  // verify payload == header * true blocks each round
};

// Decode rounds are communication rounds starting at 1; nodes meeting their
// threshold before any communication decode at round 0. Flooding-time units
// are decode round + 1 (the start set is S_1).
struct TrialResult {
  std::vector<std::uint32_t> thresholds;
  std::vector<std::optional<std::uint32_t>> decode_round;  // per node
  std::optional<std::uint32_t> stop_round;                 // per the stop rule
  std::vector<std::vector<std::uint32_t>> rank_trace;      // per trace node, index 0 = before round 1
};

std::vector<std::uint32_t> compute_thresholds(const ExperimentSpec& spec);

TrialResult run_trial(const ExperimentSpec& spec, RngStream trial_stream);

struct StoppingSummary {
  std::uint32_t trials = 0;
  std::uint32_t timeouts = 0;
  std::vector<double> stop_flood_times;  // sorted, one per finished trial (flood units)
  double quantile(double level) const;   // over flood-unit stopping times
  double mean = 0.0;
  // set when a bound was supplied
  std::optional<double> bound;
  double exceed_fraction = 0.0;  // trials with stop (flood units) > bound; timeouts count
  std::vector<TrialResult> per_trial;    // kept when keep_trials
};

StoppingSummary stopping_time_distribution(const ExperimentSpec& spec, RngStream root,
                                           std::optional<double> bound_flood_units, unsigned threads,
                                           bool keep_trials = false);

// Round bounds in flooding-time units. Logarithms are base q throughout,
// matching the tail exponent convention.
double theorem1_bound(const FloodParams& params, std::uint32_t k, double epsilon);
double theorem2_bound(const FloodParams& params, std::uint32_t l, std::uint32_t s, double h_cond, double delta,
                      double epsilon);
double theorem3_bound(const FloodParams& params, std::uint32_t l, std::uint32_t s, double h_joint, double delta,
                      double epsilon);

}  // namespace ncg
