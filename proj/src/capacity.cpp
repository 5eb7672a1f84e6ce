#include "ncgossip/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>

#include "ncgossip/util.hpp"

namespace ncg {

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
  require(d > 0, Err::InvalidArgument, "rational denominator must be positive");
  require(n >= 0, Err::InvalidArgument, "capacities must be nonnegative");
  std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational Rational::parse(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) {
    // integer or decimal
    if (text.find('.') != std::string::npos) {
      double v = std::stod(text);
      require(v >= 0, Err::InvalidArgument, "capacities must be nonnegative");
      // snap to a denominator of at most 1024
      std::int64_t den = 1024;
      auto num = static_cast<std::int64_t>(std::llround(v * den));
      return Rational(num, den);
    }
    return Rational(std::stoll(text), 1);
  }
  return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
}

Rational rat_add(const Rational& a, const Rational& b) {
  return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
}

bool rat_less_equal(const Rational& a, const Rational& b) { return a.num * b.den <= b.num * a.den; }

TimeExpandedGraph::TimeExpandedGraph(std::uint32_t n, std::vector<std::vector<Edge>> rounds)
    : n_(n), rounds_(std::move(rounds)) {
  for (const auto& round : rounds_)
    for (const auto& e : round)
      require(e.from < n_ && e.to < n_ && e.from != e.to, Err::InvalidArgument, "bad edge in round list");
}

std::uint64_t TimeExpandedGraph::arc_count() const {
  std::uint64_t comm = 0;
  for (const auto& round : rounds_) comm += round.size();
  return comm + static_cast<std::uint64_t>(n_) * horizon();
}

namespace {

constexpr std::int64_t kInfCap = std::numeric_limits<std::int64_t>::max() / 4;

// plain Dinic on an explicit arc list
class Dinic {
public:
  explicit Dinic(std::size_t nodes) : head_(nodes, -1), level_(nodes), it_(nodes) {}

  int add_arc(std::size_t from, std::size_t to, std::int64_t cap) {
    arcs_.push_back({to, head_[from], cap});
    head_[from] = static_cast<int>(arcs_.size()) - 1;
    arcs_.push_back({from, head_[to], 0});
    head_[to] = static_cast<int>(arcs_.size()) - 1;
    return static_cast<int>(arcs_.size()) - 2;
  }

  std::int64_t max_flow(std::size_t s, std::size_t t) {
    std::int64_t flow = 0;
    while (bfs(s, t)) {
      it_ = head_;
      while (std::int64_t pushed = dfs(s, t, kInfCap)) flow += pushed;
    }
    return flow;
  }

  std::int64_t flow_on(int arc_id) const { return arcs_[arc_id + 1].cap; }  // reverse arc holds the flow

  // consume flow along arcs while walking a decomposition path
  struct Arc {
    std::size_t to;
    int next;
    std::int64_t cap;
  };
  std::vector<Arc>& arcs() { return arcs_; }
  const std::vector<int>& head() const { return head_; }

private:
  bool bfs(std::size_t s, std::size_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<std::size_t> q;
    q.push(s);
    level_[s] = 0;
    while (!q.empty()) {
      std::size_t u = q.front();
      q.pop();
      for (int e = head_[u]; e != -1; e = arcs_[e].next) {
        if (arcs_[e].cap > 0 && level_[arcs_[e].to] < 0) {
          level_[arcs_[e].to] = level_[u] + 1;
          q.push(arcs_[e].to);
        }
      }
    }
    return level_[t] >= 0;
  }

  std::int64_t dfs(std::size_t u, std::size_t t, std::int64_t limit) {
    if (u == t) return limit;
    for (int& e = it_[u]; e != -1; e = arcs_[e].next) {
      auto& arc = arcs_[e];
      if (arc.cap > 0 && level_[arc.to] == level_[u] + 1) {
        std::int64_t pushed = dfs(arc.to, t, std::min(limit, arc.cap));
        if (pushed > 0) {
          arc.cap -= pushed;
          arcs_[e ^ 1].cap += pushed;
          return pushed;
        }
      }
    }
    return 0;
  }

  std::vector<Arc> arcs_;
  std::vector<int> head_;
  std::vector<int> level_;
  std::vector<int> it_;
};

}  // namespace

FeasibilityResult feasible(const TimeExpandedGraph& graph, const CapacityDemand& demand,
                           std::int64_t max_denominator) {
  const std::uint32_t n = graph.n();
  const std::uint32_t T = graph.horizon();
  require(demand.sink < n, Err::InvalidArgument, "sink out of range");
  {
    std::vector<std::uint32_t> seen;
    for (const auto& src : demand.sources) {
      require(src.node < n, Err::InvalidArgument, "source out of range");
      require(std::find(seen.begin(), seen.end(), src.node) == seen.end(), Err::InvalidArgument,
              "duplicate source node in demand");
      seen.push_back(src.node);
    }
  }

  std::int64_t scale = 1;
  for (const auto& src : demand.sources) {
    scale = std::lcm(scale, src.c.den);
    require(scale <= max_denominator, Err::DenominatorTooLarge,
            "common denominator exceeds " + std::to_string(max_denominator));
  }

  // node ids: 0 = super source, 1 + t*n + v = copy of v at layer t
  auto id = [&](std::uint32_t t, std::uint32_t v) -> std::size_t {
    return 1 + static_cast<std::size_t>(t) * n + v;
  };
  Dinic dinic(1 + static_cast<std::size_t>(T + 1) * n);

  std::int64_t need = 0;
  std::vector<int> source_arcs;
  for (const auto& src : demand.sources) {
    std::int64_t cap = src.c.num * (scale / src.c.den);
    need += cap;
    source_arcs.push_back(dinic.add_arc(0, id(0, src.node), cap));
  }
  // memory arcs
  std::vector<std::vector<int>> comm_arcs(T);
  for (std::uint32_t t = 0; t < T; ++t) {
    for (std::uint32_t v = 0; v < n; ++v) dinic.add_arc(id(t, v), id(t + 1, v), kInfCap);
    for (const auto& e : graph.rounds()[t]) comm_arcs[t].push_back(dinic.add_arc(id(t, e.from), id(t + 1, e.to), scale));
  }

  FeasibilityResult result;
  std::int64_t flow = dinic.max_flow(0, id(T, demand.sink));
  result.feasible = flow == need;
  if (!result.feasible || need == 0) return result;

  // decompose the integral flow into weighted paths; every unit of flow
  // walks forward one layer per step, so paths have exactly T+1 nodes
  auto& arcs = dinic.arcs();
  std::vector<std::vector<std::pair<std::size_t, int>>> out_flow(1 + static_cast<std::size_t>(T + 1) * n);
  for (std::size_t u = 0; u < out_flow.size(); ++u) {
    for (int e = dinic.head()[u]; e != -1; e = arcs[e].next) {
      if ((e & 1) == 0 && arcs[e + 1].cap > 0) out_flow[u].emplace_back(arcs[e].to, e);
    }
  }
  auto take = [&](std::size_t u) -> std::pair<std::size_t, int> {
    for (auto& [to, e] : out_flow[u]) {
      if (arcs[e + 1].cap > 0) return {to, e};
    }
    fail(Err::Internal, "flow decomposition ran out of arcs");
  };

  for (std::size_t si = 0; si < demand.sources.size(); ++si) {
    std::int64_t remaining = dinic.flow_on(source_arcs[si]);
    while (remaining > 0) {
      WeightedPath path;
      path.source = demand.sources[si].node;
      std::vector<int> used;
      std::int64_t width = remaining;
      std::size_t u = id(0, demand.sources[si].node);
      path.nodes.push_back(demand.sources[si].node);
      for (std::uint32_t t = 0; t < T; ++t) {
        auto [to, e] = take(u);
        width = std::min(width, arcs[e + 1].cap);
        used.push_back(e);
        u = to;
        path.nodes.push_back(static_cast<std::uint32_t>((to - 1) % n));
      }
      require(u == id(T, demand.sink), Err::Internal, "decomposition path does not end at the sink");
      for (int e : used) arcs[e + 1].cap -= width;
      remaining -= width;
      path.weight = Rational(width, scale);
      result.paths.push_back(std::move(path));
    }
  }
  return result;
}

bool validate_paths(const std::vector<WeightedPath>& paths, const std::vector<std::vector<Edge>>& rounds,
                    const CapacityDemand& demand, std::uint32_t n) {
  const std::uint32_t T = static_cast<std::uint32_t>(rounds.size());
  std::vector<std::vector<bool>> active(T);
  for (std::uint32_t t = 0; t < T; ++t) {
    active[t].assign(static_cast<std::size_t>(n) * n, false);
    for (const auto& e : rounds[t]) active[t][static_cast<std::size_t>(e.from) * n + e.to] = true;
  }

  std::map<std::uint32_t, Rational> per_source;
  std::map<std::pair<std::uint32_t, std::uint64_t>, Rational> per_edge;  // (round, from*n+to) -> weight sum
  for (const auto& path : paths) {
    if (path.nodes.size() != static_cast<std::size_t>(T) + 1) return false;
    if (path.nodes.front() != path.source) return false;
    if (path.nodes.back() != demand.sink) return false;
    if (path.weight.num < 0) return false;
    for (std::uint32_t t = 1; t <= T; ++t) {
      std::uint32_t a = path.nodes[t - 1], b = path.nodes[t];
      if (a >= n || b >= n) return false;
      if (a == b) continue;  // memory step
      std::uint64_t key = static_cast<std::uint64_t>(a) * n + b;
      if (!active[t - 1][key]) return false;
      auto& acc = per_edge[{t, key}];
      acc = rat_add(acc, path.weight);
      if (!rat_less_equal(acc, Rational(1, 1))) return false;
    }
    auto& acc = per_source[path.source];
    acc = rat_add(acc, path.weight);
  }
  for (const auto& src : demand.sources) {
    auto it = per_source.find(src.node);
    Rational got = it == per_source.end() ? Rational(0, 1) : it->second;
    if (!rat_less_equal(src.c, got)) return false;
  }
  return true;
}

std::optional<std::uint32_t> first_feasible_time(const ModelSpec& model, const CapacityDemand& demand,
                                                 std::uint32_t max_rounds, RngStream stream,
                                                 std::int64_t max_denominator) {
  ModelSampler sampler(model, stream);
  std::vector<std::vector<Edge>> rounds;
  double total_demand = 0.0;
  for (const auto& src : demand.sources) total_demand += src.c.value();
  std::uint64_t sink_in = 0;
  for (std::uint32_t t = 1; t <= max_rounds; ++t) {
    ActiveEdgeSet round = sampler.next();
    for (const auto& e : round.edges)
      if (e.to == demand.sink) ++sink_in;
    rounds.push_back(std::move(round.edges));
    // cheap necessary condition: the sink must have enough inbound arcs
    if (static_cast<double>(sink_in) + 1e-9 < total_demand) continue;
    TimeExpandedGraph graph(model.n, rounds);
    if (feasible(graph, demand, max_denominator).feasible) return t;
  }
  return std::nullopt;
}

double theorem5_bound(const FloodParams& params, const JointSource& source, std::uint32_t node,
                      std::span<const double> caps, std::uint32_t l, std::uint32_t s, double epsilon,
                      double delta_rate, double delta_rounds) {
  require(params.alpha > 0.0, Err::InvalidArgument, "alpha must be positive");
  require(source.sw_sufficient(node, caps), Err::InsufficientCapacity,
          "capacity vector is not sufficient for the node");
  double q = static_cast<double>(params.q);
  double csum = 0.0;
  for (double c : caps) csum += c;
  double rank_term = ceil_tol(static_cast<double>(l) / s * csum + delta_rate);
  double k = static_cast<double>(source.k());
  return params.T + (rank_term + log_base(q, k) + log_base(q, 1.0 / epsilon) + delta_rounds) / params.alpha;
}

}  // namespace ncg
