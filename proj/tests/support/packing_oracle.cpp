#include "support/packing_oracle.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace testoracle {

namespace {

using State = std::vector<std::uint32_t>;  // sorted token positions

// enumerate all joint moves of the tokens for one round, respecting the
// per-edge capacity, and collect the resulting sorted states
void extend(const State& state, std::size_t idx, const std::vector<std::vector<std::uint32_t>>& moves,
            std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t>& edge_use, State& current,
            std::uint32_t edge_capacity, std::set<State>& out) {
  if (idx == state.size()) {
    State sorted = current;
    std::sort(sorted.begin(), sorted.end());
    out.insert(sorted);
    return;
  }
  std::uint32_t from = state[idx];
  // stay
  current.push_back(from);
  extend(state, idx + 1, moves, edge_use, current, edge_capacity, out);
  current.pop_back();
  // move along an active edge with remaining capacity
  for (std::uint32_t to : moves[from]) {
    auto key = std::make_pair(from, to);
    auto it = edge_use.find(key);
    std::uint32_t used = it == edge_use.end() ? 0 : it->second;
    if (used >= edge_capacity) continue;
    edge_use[key] = used + 1;
    current.push_back(to);
    extend(state, idx + 1, moves, edge_use, current, edge_capacity, out);
    current.pop_back();
    if (used == 0)
      edge_use.erase(key);
    else
      edge_use[key] = used;
  }
}

}  // namespace

bool packing_feasible(std::uint32_t n, const std::vector<std::vector<ncg::Edge>>& rounds,
                      const std::vector<std::uint32_t>& token_starts, std::uint32_t sink,
                      std::uint32_t edge_capacity) {
  State start(token_starts.begin(), token_starts.end());
  std::sort(start.begin(), start.end());
  std::set<State> frontier{start};
  for (const auto& round : rounds) {
    std::vector<std::vector<std::uint32_t>> moves(n);
    for (const auto& e : round) moves[e.from].push_back(e.to);
    std::set<State> next;
    for (const auto& state : frontier) {
      std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> edge_use;
      State current;
      extend(state, 0, moves, edge_use, current, edge_capacity, next);
    }
    frontier = std::move(next);
    if (frontier.empty()) return false;
  }
  State goal(token_starts.size(), sink);
  return frontier.count(goal) > 0;
}

}  // namespace testoracle
