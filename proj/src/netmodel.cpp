#include "ncgossip/netmodel.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ncg {

namespace {

void canonicalize(ActiveEdgeSet& s) {
  std::sort(s.edges.begin(), s.edges.end());
  s.edges.erase(std::unique(s.edges.begin(), s.edges.end()), s.edges.end());
}

void add_contact(std::vector<Edge>& out, std::uint32_t u, std::uint32_t w, GossipMode mode) {
  switch (mode) {
    case GossipMode::Push:
      out.push_back({u, w});
      break;
    case GossipMode::Pull:
      out.push_back({w, u});
      break;
    case GossipMode::Exchange:
      out.push_back({u, w});
      out.push_back({w, u});
      break;
  }
}

ActiveEdgeSet sample_uniform_gossip(const UniformGossipSpec& g, std::uint32_t n, std::uint32_t t, RngStream rng) {
  ActiveEdgeSet out;
  out.t = t;
  for (std::uint32_t u = 0; u < n; ++u) {
    const auto& nbrs = g.out_neighbors[u];
    if (nbrs.empty()) continue;  // isolated nodes emit nothing this round
    std::uint32_t w = nbrs[rng.below(static_cast<std::uint32_t>(nbrs.size()))];
    add_contact(out.edges, u, w, g.mode);
  }
  canonicalize(out);
  return out;
}

ActiveEdgeSet sample_phone_call(const RandomPhoneCallSpec& g, std::uint32_t n, std::uint32_t t, RngStream rng) {
  ActiveEdgeSet out;
  out.t = t;
  if (n < 2) return out;
  for (std::uint32_t u = 0; u < n; ++u) {
    std::uint32_t r = rng.below(n - 1);
    std::uint32_t w = r < u ? r : r + 1;
    add_contact(out.edges, u, w, g.mode);
  }
  canonicalize(out);
  return out;
}

GossipMode mode_from_string(const std::string& s) {
  if (s == "push") return GossipMode::Push;
  if (s == "pull") return GossipMode::Pull;
  if (s == "exchange") return GossipMode::Exchange;
  fail(Err::Config, "unknown gossip mode '" + s + "' (expected push|pull|exchange)");
}

std::vector<Edge> edges_from_json(const nlohmann::json& j, std::uint32_t n, bool undirected) {
  std::vector<Edge> out;
  for (const auto& e : j) {
    require(e.is_array() && e.size() == 2, Err::Config, "edge entries must be [u, v] pairs");
    std::uint32_t u = e[0].get<std::uint32_t>();
    std::uint32_t v = e[1].get<std::uint32_t>();
    require(u < n && v < n, Err::Config, "edge endpoint out of range");
    require(u != v, Err::Config, "self-loops are not allowed");
    out.push_back({u, v});
    if (undirected) out.push_back({v, u});
  }
  return out;
}

// graph objects: {"kind": "complete"|"path"|"ring"|"edges"|"file", ...}
std::vector<Edge> graph_from_json(const nlohmann::json& j, std::uint32_t n) {
  require(j.is_object() && j.contains("kind"), Err::Config, "graph must be an object with a 'kind'");
  std::string kind = j.at("kind").get<std::string>();
  std::vector<Edge> edges;
  if (kind == "complete") {
    for (std::uint32_t u = 0; u < n; ++u)
      for (std::uint32_t v = 0; v < n; ++v)
        if (u != v) edges.push_back({u, v});
  } else if (kind == "path") {
    bool undirected = j.value("undirected", true);
    for (std::uint32_t u = 0; u + 1 < n; ++u) {
      edges.push_back({u, u + 1});
      if (undirected) edges.push_back({u + 1, u});
    }
  } else if (kind == "ring") {
    bool undirected = j.value("undirected", true);
    for (std::uint32_t u = 0; u < n; ++u) {
      std::uint32_t v = (u + 1) % n;
      if (v == u) continue;
      edges.push_back({u, v});
      if (undirected) edges.push_back({v, u});
    }
  } else if (kind == "edges") {
    edges = edges_from_json(j.at("edges"), n, j.value("undirected", false));
  } else if (kind == "file") {
    edges = load_edge_list(j.at("path").get<std::string>());
    for (const auto& e : edges) require(e.from < n && e.to < n, Err::Config, "edge endpoint out of range for n");
    if (j.value("undirected", false)) {
      auto rev = edges;
      for (auto& e : rev) std::swap(e.from, e.to);
      edges.insert(edges.end(), rev.begin(), rev.end());
    }
  } else {
    fail(Err::Config, "unknown graph kind '" + kind + "'");
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace

std::vector<Edge> load_edge_list(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Err::Config, "cannot open edge list file '" + path + "'");
  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    long long u = -1, v = -1;
    ss >> u >> v;
    require(!ss.fail() && u >= 0 && v >= 0, Err::Config,
            "bad edge list line " + std::to_string(lineno) + " in '" + path + "'");
    require(u != v, Err::Config, "self-loop at line " + std::to_string(lineno) + " in '" + path + "'");
    edges.push_back({static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v)});
  }
  return edges;
}

ModelSpec ModelSpec::from_json(const nlohmann::json& j) {
  require(j.is_object() && j.contains("kind"), Err::Config, "model must be an object with a 'kind'");
  std::string kind = j.at("kind").get<std::string>();
  ModelSpec spec;
  require(j.contains("n"), Err::Config, "model requires node count 'n'");
  spec.n = j.at("n").get<std::uint32_t>();
  require(spec.n >= 1, Err::Config, "model requires n >= 1");

  if (kind == "uniform-gossip") {
    UniformGossipSpec g;
    g.mode = mode_from_string(j.value("mode", "push"));
    auto edges = graph_from_json(j.at("graph"), spec.n);
    g.out_neighbors.assign(spec.n, {});
    for (const auto& e : edges) g.out_neighbors[e.from].push_back(e.to);
    spec.variant = std::move(g);
  } else if (kind == "random-phone-call") {
    RandomPhoneCallSpec g;
    g.mode = mode_from_string(j.value("mode", "push"));
    spec.variant = g;
  } else if (kind == "static") {
    StaticGraphSpec g;
    g.edges = graph_from_json(j.at("graph"), spec.n);
    spec.variant = std::move(g);
  } else if (kind == "edge-markovian") {
    EdgeMarkovianSpec g;
    g.p_birth = j.at("p_birth").get<double>();
    g.p_death = j.at("p_death").get<double>();
    require(g.p_birth >= 0 && g.p_birth <= 1 && g.p_death >= 0 && g.p_death <= 1, Err::Config,
            "edge-markovian probabilities must lie in [0,1]");
    if (j.contains("initial")) g.initial = graph_from_json(j.at("initial"), spec.n);
    spec.variant = std::move(g);
  } else if (kind == "lossy") {
    LossyWrapperSpec g;
    g.loss = j.at("loss").get<double>();
    require(g.loss >= 0 && g.loss <= 1, Err::Config, "loss probability must lie in [0,1]");
    auto inner = std::make_shared<ModelSpec>(ModelSpec::from_json(j.at("inner")));
    require(inner->n == spec.n, Err::Config, "lossy wrapper and inner model disagree on n");
    g.inner = inner;
    spec.variant = std::move(g);
  } else {
    fail(Err::Config, "unknown model kind '" + kind + "'");
  }
  return spec;
}

bool is_iid(const ModelSpec& model) {
  return std::visit(
      [](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, EdgeMarkovianSpec>) {
          return false;
        } else if constexpr (std::is_same_v<T, LossyWrapperSpec>) {
          return is_iid(*v.inner);
        } else {
          return true;
        }
      },
      model.variant);
}

ModelSampler::ModelSampler(const ModelSpec& model, RngStream trial_stream)
    : model_(&model), stream_(trial_stream) {
  if (const auto* mk = std::get_if<EdgeMarkovianSpec>(&model.variant)) {
    markov_state_.assign(static_cast<std::size_t>(model.n) * model.n, false);
    for (const auto& e : mk->initial) markov_state_[static_cast<std::size_t>(e.from) * model.n + e.to] = true;
  } else if (const auto* lw = std::get_if<LossyWrapperSpec>(&model.variant)) {
    inner_ = std::make_unique<ModelSampler>(*lw->inner, trial_stream.child(rngtag::kNetInner));
  }
}

ActiveEdgeSet ModelSampler::next() {
  ++t_;
  const std::uint32_t n = model_->n;
  RngStream round_rng = stream_.child(rngtag::kNetRound, t_);
  return std::visit(
      [&](const auto& v) -> ActiveEdgeSet {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, UniformGossipSpec>) {
          return sample_uniform_gossip(v, n, t_, round_rng);
        } else if constexpr (std::is_same_v<T, RandomPhoneCallSpec>) {
          return sample_phone_call(v, n, t_, round_rng);
        } else if constexpr (std::is_same_v<T, StaticGraphSpec>) {
          ActiveEdgeSet out;
          out.t = t_;
          out.edges = v.edges;
          return out;
        } else if constexpr (std::is_same_v<T, EdgeMarkovianSpec>) {
          ActiveEdgeSet out;
          out.t = t_;
          if (t_ > 1) {
            // evolve: absent edges are born, present edges die
            std::vector<bool> next_state(markov_state_.size(), false);
            for (std::uint32_t u = 0; u < n; ++u) {
              for (std::uint32_t w = 0; w < n; ++w) {
                if (u == w) continue;
                std::size_t idx = static_cast<std::size_t>(u) * n + w;
                bool present = markov_state_[idx];
                bool now = present ? !round_rng.bernoulli(v.p_death) : round_rng.bernoulli(v.p_birth);
                next_state[idx] = now;
              }
            }
            markov_state_ = std::move(next_state);
          }
          for (std::uint32_t u = 0; u < n; ++u)
            for (std::uint32_t w = 0; w < n; ++w)
              if (u != w && markov_state_[static_cast<std::size_t>(u) * n + w]) out.edges.push_back({u, w});
          return out;
        } else {
          static_assert(std::is_same_v<T, LossyWrapperSpec>);
          ActiveEdgeSet out = inner_->next();
          out.t = t_;
          RngStream loss_rng = stream_.child(rngtag::kNetLoss, t_);
          std::vector<Edge> kept;
          kept.reserve(out.edges.size());
          for (const auto& e : out.edges)
            if (!loss_rng.bernoulli(v.loss)) kept.push_back(e);
          out.edges = std::move(kept);
          return out;
        }
      },
      model_->variant);
}

ActiveEdgeSet ModelSampler::sample_iid(const ModelSpec& model, std::uint32_t t, const RngStream& trial_stream) {
  require(is_iid(model), Err::InvalidArgument, "random access sampling requires an i.i.d. model");
  require(t >= 1, Err::InvalidArgument, "rounds are 1-indexed");
  const std::uint32_t n = model.n;
  RngStream round_rng = trial_stream.child(rngtag::kNetRound, t);
  if (const auto* g = std::get_if<UniformGossipSpec>(&model.variant)) return sample_uniform_gossip(*g, n, t, round_rng);
  if (const auto* g = std::get_if<RandomPhoneCallSpec>(&model.variant)) return sample_phone_call(*g, n, t, round_rng);
  if (const auto* g = std::get_if<StaticGraphSpec>(&model.variant)) {
    ActiveEdgeSet out;
    out.t = t;
    out.edges = g->edges;
    return out;
  }
  const auto& lw = std::get<LossyWrapperSpec>(model.variant);
  ActiveEdgeSet out = sample_iid(*lw.inner, t, trial_stream.child(rngtag::kNetInner));
  out.t = t;
  RngStream loss_rng = trial_stream.child(rngtag::kNetLoss, t);
  std::vector<Edge> kept;
  for (const auto& e : out.edges)
    if (!loss_rng.bernoulli(lw.loss)) kept.push_back(e);
  out.edges = std::move(kept);
  return out;
}

}  // namespace ncg
