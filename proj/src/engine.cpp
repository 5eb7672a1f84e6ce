#include "ncgossip/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ncgossip/util.hpp"

namespace ncg {

namespace {

struct CodeLayout {
  std::vector<BinningCode> codes;       // one per message
  std::vector<std::uint32_t> offsets;   // first block column per message
  std::uint32_t total_blocks = 0;
  std::uint32_t payload_width = 0;
};

CodeLayout build_layout(const ExperimentSpec& spec) {
  const Field& f = *spec.field;
  require(f.characteristic() == 2, Err::Config, "gossip experiments require a characteristic-2 field");
  require(spec.s % f.degree() == 0, Err::Config, "packet size s must be a multiple of log2(q)");
  CodeLayout layout;
  layout.payload_width = spec.s / f.degree();

  std::uint32_t k = spec.scenario == Scenario::PlainMessages ? spec.k_plain : spec.source->k();
  for (std::uint32_t i = 0; i < k; ++i) {
    BinningCode code;
    if (spec.scenario == Scenario::PlainMessages) {
      // opaque messages: one block of raw payload, no binning
      code.source_index = i;
      code.l = spec.l;
      code.s = spec.s;
      code.bits_per_symbol = f.degree();
      code.symbols_per_block = layout.payload_width;
      code.h = layout.payload_width;
      code.block_count = 1;
      code.seed = 0;
    } else {
      code = BinningCode::make(f, i, spec.l, spec.s, spec.delta, spec.source->entropy_x(i), /*seed=*/0);
    }
    layout.offsets.push_back(layout.total_blocks);
    layout.total_blocks += code.block_count;
    layout.codes.push_back(code);
  }
  return layout;
}

}  // namespace

std::vector<std::uint32_t> compute_thresholds(const ExperimentSpec& spec) {
  const std::uint32_t n = spec.model.n;
  std::vector<std::uint32_t> thresholds(n, 0);
  switch (spec.scenario) {
    case Scenario::PlainMessages:
      std::fill(thresholds.begin(), thresholds.end(), spec.k_plain);
      break;
    case Scenario::SingleSourceSideInfo: {
      require(spec.source && spec.source->k() == 1, Err::Config, "single-source scenario requires k == 1");
      for (std::uint32_t v = 0; v < n; ++v)
        thresholds[v] = spec.source->decode_threshold_single(v, spec.l, spec.s, spec.delta);
      break;
    }
    case Scenario::TwoSourceJoint: {
      require(spec.source && spec.source->k() == 2, Err::Config, "joint scenario requires k == 2");
      std::uint32_t t = spec.source->decode_threshold_joint(spec.l, spec.s, spec.delta);
      std::fill(thresholds.begin(), thresholds.end(), t);
      break;
    }
  }
  return thresholds;
}

TrialResult run_trial(const ExperimentSpec& spec, RngStream trial_stream) {
  const Field& f = *spec.field;
  const std::uint32_t n = spec.model.n;
  require(n >= 1, Err::Config, "empty network");

  CodeLayout layout = build_layout(spec);
  std::uint32_t k = static_cast<std::uint32_t>(layout.codes.size());
  for (const auto& [msg, nodes] : spec.placement) {
    require(msg < k, Err::Config, "placement references unknown message " + std::to_string(msg));
    require(!nodes.empty(), Err::Config, "every message needs at least one source node");
    for (auto v : nodes) require(v < n, Err::Config, "placement node out of range");
  }
  for (std::uint32_t i = 0; i < k; ++i)
    require(spec.placement.count(i) == 1, Err::Config, "message " + std::to_string(i) + " is not placed");

  // binning seeds are shared per message so every holder bins identically
  for (std::uint32_t i = 0; i < k; ++i)
    layout.codes[i].seed = trial_stream.child(rngtag::kBinSeed, i).key();

  // true block contents
  SampleBatch batch;
  if (spec.scenario != Scenario::PlainMessages) {
    batch = spec.source->sample_iid(spec.l, trial_stream.child(rngtag::kSourceSample));
  }
  std::vector<FVec> blocks(layout.total_blocks, FVec(layout.payload_width, 0));
  for (std::uint32_t i = 0; i < k; ++i) {
    const auto& code = layout.codes[i];
    if (spec.scenario == Scenario::PlainMessages) {
      RngStream msg_rng = trial_stream.child(rngtag::kMessage, i);
      for (auto& sym : blocks[layout.offsets[i]]) sym = msg_rng.below(f.order());
      continue;
    }
    if (code.block_count == 0) continue;
    FVec padded = bin_index(f, code, batch.x[i]);
    for (std::uint32_t b = 0; b < code.block_count; ++b)
      for (std::uint32_t sidx = 0; sidx < code.symbols_per_block; ++sidx)
        blocks[layout.offsets[i] + b][sidx] = padded[b * code.symbols_per_block + sidx];
  }

  std::vector<std::uint32_t> thresholds = compute_thresholds(spec);

  std::vector<NodeState> nodes;
  nodes.reserve(n);
  for (std::uint32_t v = 0; v < n; ++v) nodes.emplace_back(spec.field, layout.total_blocks, layout.payload_width);
  for (const auto& [msg, holders] : spec.placement) {
    const auto& code = layout.codes[msg];
    for (auto v : holders)
      for (std::uint32_t b = 0; b < code.block_count; ++b)
        nodes[v].add_own_block(layout.offsets[msg] + b, blocks[layout.offsets[msg] + b]);
  }

  TrialResult result;
  result.thresholds = thresholds;
  result.decode_round.assign(n, std::nullopt);
  result.rank_trace.assign(spec.trace_nodes.size(), {});

  std::uint32_t undecoded = 0;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (nodes[v].can_decode_rank(thresholds[v]))
      result.decode_round[v] = 0;
    else
      ++undecoded;
  }
  for (std::size_t i = 0; i < spec.trace_nodes.size(); ++i)
    result.rank_trace[i].push_back(nodes[spec.trace_nodes[i]].rank());

  auto stop_satisfied = [&]() {
    if (spec.stop.kind == StopRule::Kind::AllNodes) return undecoded == 0;
    require(spec.stop.node < n, Err::Config, "stop rule node out of range");
    return result.decode_round[spec.stop.node].has_value();
  };

  auto stop_round_value = [&]() -> std::uint32_t {
    if (spec.stop.kind == StopRule::Kind::SingleNode) return *result.decode_round[spec.stop.node];
    std::uint32_t worst = 0;
    for (const auto& r : result.decode_round) worst = std::max(worst, r.value());
    return worst;
  };

  if (stop_satisfied()) {
    result.stop_round = stop_round_value();
    return result;
  }

  ModelSampler sampler(spec.model, trial_stream.child(rngtag::kNetModel));
  std::vector<Packet> packets(n);
  for (std::uint32_t t = 1; t <= spec.max_rounds; ++t) {
    // every node decides on a packet, then the model says who receives what
    for (std::uint32_t v = 0; v < n; ++v) {
      RngStream emit_rng = trial_stream.child(rngtag::kEmit, v, t);
      packets[v] = nodes[v].make_packet(emit_rng);
      if (spec.check_consistency) {
        for (std::uint32_t sidx = 0; sidx < layout.payload_width; ++sidx) {
          Felem acc = 0;
          for (std::uint32_t b = 0; b < layout.total_blocks; ++b)
            acc = f.add(acc, f.mul(packets[v].header[b], blocks[b][sidx]));
          require(acc == packets[v].payload[sidx], Err::Internal, "emitted packet violates the global block oracle");
        }
      }
    }
    ActiveEdgeSet round = sampler.next();
    for (const auto& e : round.edges) nodes[e.to].receive(packets[e.from]);

    for (std::uint32_t v = 0; v < n; ++v) {
      if (!result.decode_round[v].has_value() && nodes[v].can_decode_rank(thresholds[v])) {
        result.decode_round[v] = t;
        --undecoded;
      }
    }
    for (std::size_t i = 0; i < spec.trace_nodes.size(); ++i)
      result.rank_trace[i].push_back(nodes[spec.trace_nodes[i]].rank());

    if (stop_satisfied()) {
      result.stop_round = stop_round_value();
      return result;
    }
  }
  return result;  // timeout: stop_round unset, undecoded nodes keep nullopt
}

double StoppingSummary::quantile(double level) const { return sorted_quantile(stop_flood_times, level); }

StoppingSummary stopping_time_distribution(const ExperimentSpec& spec, RngStream root,
                                           std::optional<double> bound_flood_units, unsigned threads,
                                           bool keep_trials) {
  require(spec.trials >= 1, Err::Config, "at least one trial required");
  StoppingSummary summary;
  summary.trials = spec.trials;
  summary.bound = bound_flood_units;

  std::vector<TrialResult> results(spec.trials);
  parallel_for(spec.trials, threads, [&](std::size_t i) {
    results[i] = run_trial(spec, root.child(rngtag::kTrial, static_cast<std::uint64_t>(i)));
  });

  std::uint32_t exceed = 0;
  for (auto& r : results) {
    if (!r.stop_round.has_value()) {
      ++summary.timeouts;
      ++exceed;  // a timed-out trial exceeds any finite bound
      continue;
    }
    summary.stop_flood_times.push_back(static_cast<double>(*r.stop_round) + 1.0);
    if (bound_flood_units && summary.stop_flood_times.back() > *bound_flood_units) ++exceed;
  }
  std::sort(summary.stop_flood_times.begin(), summary.stop_flood_times.end());
  if (!summary.stop_flood_times.empty())
    summary.mean = std::accumulate(summary.stop_flood_times.begin(), summary.stop_flood_times.end(), 0.0) /
                   static_cast<double>(summary.stop_flood_times.size());
  summary.exceed_fraction = static_cast<double>(exceed) / spec.trials;
  if (keep_trials) summary.per_trial = std::move(results);
  return summary;
}

double theorem1_bound(const FloodParams& params, std::uint32_t k, double epsilon) {
  require(params.alpha > 0.0, Err::InvalidArgument, "alpha must be positive");
  double q = static_cast<double>(params.q);
  return params.T + (k + log_base(q, 1.0 / epsilon)) / params.alpha;
}

double theorem2_bound(const FloodParams& params, std::uint32_t l, std::uint32_t s, double h_cond, double delta,
                      double epsilon) {
  require(params.alpha > 0.0, Err::InvalidArgument, "alpha must be positive");
  double q = static_cast<double>(params.q);
  double rank_term = static_cast<double>(l) / s * (h_cond + delta);
  return params.T + (rank_term + log_base(q, 1.0 / epsilon) + 3.0) / params.alpha;
}

double theorem3_bound(const FloodParams& params, std::uint32_t l, std::uint32_t s, double h_joint, double delta,
                      double epsilon) {
  require(params.alpha > 0.0, Err::InvalidArgument, "alpha must be positive");
  double q = static_cast<double>(params.q);
  double rank_term = ceil_tol(static_cast<double>(l) / s * (h_joint + 2.0 * delta));
  return params.T + (rank_term + log_base(q, 1.0 / epsilon) + 3.0) / params.alpha;
}

}  // namespace ncg
