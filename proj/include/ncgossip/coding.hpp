#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ncgossip/linalg.hpp"
#include "ncgossip/rng.hpp"
#include "ncgossip/sources.hpp"

namespace ncg {

// Random binning layout for one message: the bin index of a length-l message
// vector is h field symbols, padded with zeros to a whole number of blocks of
// s bits each. Requires a characteristic-2 field so symbols carry an integral
// number of bits.
struct BinningCode {
  std::uint32_t source_index = 0;
  std::uint32_t l = 0;
  std::uint32_t s = 0;                  // payload bits per block
  std::uint32_t bits_per_symbol = 0;    // log2 q
  std::uint32_t symbols_per_block = 0;  // s / log2 q
  std::uint32_t h = 0;                  // bin index length in symbols
  std::uint32_t block_count = 0;
  std::uint64_t seed = 0;               // shared by every node holding this message

  static BinningCode make(const Field& field, std::uint32_t source_index, std::uint32_t l, std::uint32_t s,
                          double delta, double entropy_bits, std::uint64_t seed);

  std::uint32_t padded_len() const { return block_count * symbols_per_block; }
};

// Deterministic keyed-hash realization of random binning: identical for every
// node holding the same message vector, marginally uniform over bins.
// Returns the padded bin index (length block_count * symbols_per_block).
FVec bin_index(const Field& field, const BinningCode& code, std::span<const std::uint32_t> x);

struct Packet {
  FVec header;   // one coefficient per block of each message
  FVec payload;  // s bits worth of symbols
};

// Per-node receive state: the row space of received coefficient vectors with
// payloads carried as augmented columns, so stored equations stay mutually
// consistent under elimination.
class NodeState {
public:
  NodeState(FieldRef field, std::uint32_t header_dim, std::uint32_t payload_dim);

  std::uint32_t header_dim() const { return header_dim_; }
  std::uint32_t payload_dim() const { return payload_dim_; }
  std::uint32_t rank() const { return space_.rank(); }
  const RowSpace& space() const { return space_; }

  // a source node knows its own blocks: unit header, block contents as payload
  void add_own_block(std::uint32_t block_col, std::span<const Felem> block_payload);

  // uniformly random linear combination of everything the node knows; a node
  // with nothing emits the zero packet
  Packet make_packet(RngStream& rng) const;

  // inserts the equation; true iff the rank grew. Throws Internal if the
  // packet contradicts the stored equations (zero header, nonzero payload
  // after reduction), which cannot happen with honest senders.
  bool receive(const Packet& pkt);

  bool can_decode_rank(std::uint32_t threshold) const { return rank() >= threshold; }

  // stored independent equations as (header, payload) pairs
  std::vector<std::pair<FVec, FVec>> equations() const;

private:
  FieldRef field_;
  std::uint32_t header_dim_ = 0;
  std::uint32_t payload_dim_ = 0;
  RowSpace space_;
};

// Exhaustive MAP decode for tiny instances: enumerates every candidate
// message vector, keeps those whose bin index satisfies all received
// equations, and returns the candidate maximizing the joint probability with
// the side vector y. Single-message sources only.
struct OracleDecodeResult {
  std::optional<std::vector<std::uint32_t>> decoded;  // nullopt = ambiguous
  std::uint64_t consistent_candidates = 0;
};

OracleDecodeResult oracle_decode(const Field& field, const BinningCode& code,
                                 const std::vector<std::pair<FVec, FVec>>& equations,
                                 std::span<const std::uint32_t> y, const JointSource& source, std::uint32_t node);

}  // namespace ncg
