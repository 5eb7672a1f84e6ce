#pragma once

#include <string>

// The acceptance checks: exhaustive small-instance verification, statistical
// bound checks against measured flooding parameters, and oracle equivalences.
// Each returns pass/fail plus a human-readable detail string; tolerances and
// trial counts are pinned in the implementations.
namespace acceptance {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome c1_rank_witness_grid();       // exhaustive verifier over the full (q, ambient, h) grid, < 60 s
Outcome c2_knowledge_coupling();      // P[receiver stays ignorant] <= 1/q + 3 sigma for q in {2,4,16}
Outcome c3_multi_message_bound();     // n=32 exchange, k in {1,4,8}: exceed fraction <= epsilon
Outcome c4_side_info_classes();       // per-class quantiles ordered and inside the one-source bound
Outcome c5_joint_threshold();         // correlated pair beats independent pair under coupled seeds
Outcome c6_fractional_vs_integral();  // fractional demands become feasible strictly earlier, gap grows with k
Outcome c7_flow_oracle();             // max-flow feasibility == exhaustive packing on 500 random instances
Outcome c8_map_decode_trend();        // exhaustive MAP decode error rate non-increasing, < 10% at full rank
Outcome c9_algebra_suites();          // field axioms, knows/complement duality, flooding monotonicity

}  // namespace acceptance
