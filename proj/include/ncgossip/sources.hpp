#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "json.hpp"
#include "ncgossip/errors.hpp"
#include "ncgossip/rng.hpp"

namespace ncg {

// One i.i.d. column per sample position: k message symbols and one side
// symbol per node.
struct SampleBatch {
  std::uint32_t l = 0;
  std::vector<std::vector<std::uint32_t>> x;  // x[i][j], i < k
  std::vector<std::vector<std::uint32_t>> y;  // y[v][j], v < node_count
};

// Joint distribution of the messages X_1..X_k and per-node side information
// Y_v, stored as a dense pmf over the message tuple plus per-node channels
// p(y | x tuple). Nodes without side information observe a constant.
// Immutable after construction; all queries are pure.
class JointSource {
public:
  static constexpr std::uint64_t kMaxCells = 1ull << 24;
  static constexpr std::uint32_t kMaxSubsetK = 20;

  static std::shared_ptr<const JointSource> from_json(const nlohmann::json& j, std::uint32_t node_count);

  static std::shared_ptr<const JointSource> independent_uniform_bits(std::uint32_t k, std::uint32_t node_count);
  // single uniform bit message; listed nodes observe it through a binary
  // symmetric channel with the class crossover, all other nodes see nothing
  struct DsbsClass {
    std::vector<std::uint32_t> nodes;
    double crossover = 0.0;
  };
  static std::shared_ptr<const JointSource> dsbs(const std::vector<DsbsClass>& classes, std::uint32_t node_count);
  // two symmetric correlated bits: X1 uniform, X2 = X1 xor Bernoulli(flip)
  static std::shared_ptr<const JointSource> symmetric_bits(double flip, std::uint32_t node_count);
  static std::shared_ptr<const JointSource> constant(std::uint32_t alphabet, std::uint32_t value,
                                                     std::uint32_t node_count);
  static std::shared_ptr<const JointSource> dense(std::vector<std::uint32_t> x_alphabets,
                                                  std::vector<double> joint_x, std::uint32_t node_count);

  std::uint32_t k() const { return static_cast<std::uint32_t>(x_alphabets_.size()); }
  std::uint32_t node_count() const { return node_count_; }
  std::uint32_t x_alphabet(std::uint32_t i) const { return x_alphabets_.at(i); }
  bool has_side_info(std::uint32_t node) const { return node_channel_.at(node) >= 0; }
  std::uint32_t y_alphabet(std::uint32_t node) const;

  // Shannon entropies in bits
  double entropy_x(std::uint32_t i) const;
  double joint_entropy_x() const;
  // H(X_S | X_{complement of S}, Y_v) for the subset encoded as a bitmask
  double cond_entropy(std::uint32_t subset_mask, std::uint32_t node) const;

  // Slepian-Wolf sufficiency: sum_{i in S} c_i >= H(X_S | X_S̄, Y_v) for every
  // nonempty subset S.
  bool sw_sufficient(std::uint32_t node, std::span<const double> caps) const;

  // Required rank for rank-threshold decoding. Single source: any
  // ceil((l/s)(H(X|Y_v)+delta)) independent equations; two sources without
  // side information: ceil((l/s)(H(X1,X2)+2*delta)).
  std::uint32_t decode_threshold_single(std::uint32_t node, std::uint32_t l, std::uint32_t s, double delta) const;
  std::uint32_t decode_threshold_joint(std::uint32_t l, std::uint32_t s, double delta) const;

  SampleBatch sample_iid(std::uint32_t l, RngStream stream) const;

  // p(x_tuple_index, y) table for one node; used by the exhaustive decoder
  std::vector<std::vector<double>> xy_joint(std::uint32_t node) const;

  // helper for channels attached to a single message index (k == 1 sources)
  std::uint64_t x_index_count() const { return static_cast<std::uint64_t>(joint_x_.size()); }

private:
  struct SideChannel {
    std::uint32_t y_alphabet = 1;
    std::vector<std::vector<double>> cond;  // cond[x_index][y]
    std::vector<std::vector<double>> cdf;   // per x_index cumulative, for sampling
  };

  JointSource() = default;
  void finalize();
  std::uint32_t decompose(std::uint64_t x_index, std::uint32_t i) const;

  std::uint32_t node_count_ = 0;
  std::vector<std::uint32_t> x_alphabets_;
  std::vector<double> joint_x_;       // dense over the mixed-radix x tuple
  std::vector<double> joint_x_cdf_;   // cumulative, for sampling
  std::vector<int> node_channel_;     // -1 = no side information
  std::vector<SideChannel> channels_;
};

}  // namespace ncg
