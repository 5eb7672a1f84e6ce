#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "ncgossip/errors.hpp"
#include "ncgossip/rng.hpp"

namespace ncg {

struct Edge {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Directed edges over which packets are delivered in round t; kept sorted and
// deduplicated so it behaves as a set.
struct ActiveEdgeSet {
  std::uint32_t t = 0;
  std::vector<Edge> edges;
};

enum class GossipMode { Push, Pull, Exchange };

struct UniformGossipSpec {
  std::vector<std::vector<std::uint32_t>> out_neighbors;
  GossipMode mode = GossipMode::Push;
};

struct RandomPhoneCallSpec {
  GossipMode mode = GossipMode::Push;
};

struct StaticGraphSpec {
  std::vector<Edge> edges;
};

struct EdgeMarkovianSpec {
  double p_birth = 0.0;
  double p_death = 0.0;
  std::vector<Edge> initial;
};

struct ModelSpec;

struct LossyWrapperSpec {
  std::shared_ptr<const ModelSpec> inner;
  double loss = 0.0;
};

// Oblivious network model: the edge set of round t depends only on (t, prior
// edge sets, randomness), never on node payload state.
struct ModelSpec {
  std::uint32_t n = 0;
  std::variant<UniformGossipSpec, RandomPhoneCallSpec, StaticGraphSpec, EdgeMarkovianSpec, LossyWrapperSpec> variant;

  static ModelSpec from_json(const nlohmann::json& j);
};

bool is_iid(const ModelSpec& model);

// Draws the rounds of one trial in order. The per-round randomness is derived
// from (trial stream, t), so two samplers with the same stream produce the
// same sequence regardless of what the caller does in between.
class ModelSampler {
public:
  ModelSampler(const ModelSpec& model, RngStream trial_stream);
  ActiveEdgeSet next();
  std::uint32_t round() const { return t_; }

  // Random access for i.i.d. models; fails on history-dependent ones.
  static ActiveEdgeSet sample_iid(const ModelSpec& model, std::uint32_t t, const RngStream& trial_stream);

private:
  const ModelSpec* model_;
  RngStream stream_;
  std::uint32_t t_ = 0;
  std::vector<bool> markov_state_;  // adjacency bitmap for edge-markovian
  std::unique_ptr<ModelSampler> inner_;
};

// One `u v` pair per line, 0-indexed; lines starting with '#' are skipped.
std::vector<Edge> load_edge_list(const std::string& path);

}  // namespace ncg
