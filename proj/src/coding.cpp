#include "ncgossip/coding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ncgossip/util.hpp"

namespace ncg {

BinningCode BinningCode::make(const Field& field, std::uint32_t source_index, std::uint32_t l, std::uint32_t s,
                              double delta, double entropy_bits, std::uint64_t seed) {
  require(field.characteristic() == 2, Err::InvalidArgument,
          "binning requires a characteristic-2 field so symbols carry whole bits");
  BinningCode code;
  code.source_index = source_index;
  code.l = l;
  code.s = s;
  code.bits_per_symbol = field.degree();
  require(s > 0 && s % code.bits_per_symbol == 0, Err::InvalidArgument,
          "packet size s must be a positive multiple of log2(q)");
  code.symbols_per_block = s / code.bits_per_symbol;
  code.seed = seed;
  require(delta > 0.0, Err::InvalidArgument, "delta must be positive");
  if (entropy_bits <= 1e-12) {
    // a deterministic message has a known bin: nothing to communicate
    code.h = 0;
    code.block_count = 0;
    return code;
  }
  code.h = ceil_tol(static_cast<double>(l) * (entropy_bits + delta) / code.bits_per_symbol);
  code.block_count = (code.h + code.symbols_per_block - 1) / code.symbols_per_block;
  return code;
}

FVec bin_index(const Field& field, const BinningCode& code, std::span<const std::uint32_t> x) {
  require(x.size() == code.l, Err::DimensionMismatch, "message vector length mismatch");
  FVec out(code.padded_len(), 0);
  if (code.h == 0) return out;
  // absorb the message into a keyed state, then squeeze h symbols
  std::uint64_t state = RngStream::mix(code.seed ^ 0x42d1355f9e0f8a6bull);
  for (std::size_t i = 0; i < x.size(); ++i)
    state = RngStream::mix(state ^ (static_cast<std::uint64_t>(x[i]) + 0x9e3779b97f4a7c15ull * (i + 1)));
  const std::uint32_t mask = field.order() - 1;  // q is a power of two
  for (std::uint32_t i = 0; i < code.h; ++i) {
    std::uint64_t z = RngStream::mix(state + 0xbf58476d1ce4e5b9ull * (i + 1));
    out[i] = static_cast<Felem>((z >> 24) & mask);
  }
  return out;
}

NodeState::NodeState(FieldRef field, std::uint32_t header_dim, std::uint32_t payload_dim)
    : field_(std::move(field)), header_dim_(header_dim), payload_dim_(payload_dim),
      space_(field_, header_dim, payload_dim) {}

void NodeState::add_own_block(std::uint32_t block_col, std::span<const Felem> block_payload) {
  require(block_col < header_dim_, Err::InvalidArgument, "block column out of range");
  require(block_payload.size() == payload_dim_, Err::DimensionMismatch, "block payload width mismatch");
  FVec row(header_dim_ + payload_dim_, 0);
  row[block_col] = 1;
  std::copy(block_payload.begin(), block_payload.end(), row.begin() + header_dim_);
  space_.insert_row(row);
}

Packet NodeState::make_packet(RngStream& rng) const {
  const Field& f = *field_;
  Packet pkt;
  pkt.header.assign(header_dim_, 0);
  pkt.payload.assign(payload_dim_, 0);
  const auto& rows = space_.rows();
  for (const auto& row : rows) {
    Felem c = rng.below(f.order());  // zero included, standard RLNC
    if (c == 0) continue;
    axpy(f, c, std::span<const Felem>(row.data(), header_dim_), pkt.header);
    axpy(f, c, std::span<const Felem>(row.data() + header_dim_, payload_dim_), pkt.payload);
  }
  return pkt;
}

bool NodeState::receive(const Packet& pkt) {
  require(pkt.header.size() == header_dim_, Err::DimensionMismatch, "packet header width mismatch");
  require(pkt.payload.size() == payload_dim_, Err::DimensionMismatch, "packet payload width mismatch");
  FVec row(header_dim_ + payload_dim_);
  std::copy(pkt.header.begin(), pkt.header.end(), row.begin());
  std::copy(pkt.payload.begin(), pkt.payload.end(), row.begin() + header_dim_);
  auto outcome = space_.insert_row(row);
  require(!outcome.aug_residual, Err::Internal,
          "received packet is inconsistent with stored equations (payload does not match header)");
  return outcome.rank_increased;
}

std::vector<std::pair<FVec, FVec>> NodeState::equations() const {
  std::vector<std::pair<FVec, FVec>> out;
  for (const auto& row : space_.rows()) {
    out.emplace_back(FVec(row.begin(), row.begin() + header_dim_),
                     FVec(row.begin() + header_dim_, row.end()));
  }
  return out;
}

OracleDecodeResult oracle_decode(const Field& field, const BinningCode& code,
                                 const std::vector<std::pair<FVec, FVec>>& equations,
                                 std::span<const std::uint32_t> y, const JointSource& source, std::uint32_t node) {
  require(source.k() == 1, Err::InvalidArgument, "oracle decoding handles single-message sources");
  const std::uint32_t alphabet = source.x_alphabet(0);
  double total_bits = code.l * std::log2(static_cast<double>(alphabet));
  require(total_bits <= 20.0, Err::TooLarge, "candidate enumeration guard exceeded (2^20)");
  require(y.size() == code.l || y.empty(), Err::DimensionMismatch, "side vector length mismatch");
  for (const auto& [coeff, payload] : equations) {
    require(coeff.size() == code.block_count, Err::DimensionMismatch, "equation header width mismatch");
    require(payload.size() == code.symbols_per_block, Err::DimensionMismatch, "equation payload width mismatch");
  }

  auto xy = source.xy_joint(node);
  const bool use_side = !y.empty() && source.has_side_info(node);
  std::vector<double> x_marginal(xy.size(), 0.0);
  for (std::size_t xi = 0; xi < xy.size(); ++xi)
    for (double p : xy[xi]) x_marginal[xi] += p;

  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < code.l; ++i) count *= alphabet;

  OracleDecodeResult result;
  std::vector<std::uint32_t> candidate(code.l, 0);
  std::vector<std::uint32_t> best;
  double best_logp = 0.0;
  bool have_best = false;
  bool tie = false;

  FVec blocks;  // flattened block_count x symbols_per_block view of the bin index
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::uint64_t rest = idx;
    for (std::uint32_t i = 0; i < code.l; ++i) {
      candidate[i] = static_cast<std::uint32_t>(rest % alphabet);
      rest /= alphabet;
    }
    blocks = bin_index(field, code, candidate);
    bool consistent = true;
    for (const auto& [coeff, payload] : equations) {
      for (std::uint32_t sym = 0; sym < code.symbols_per_block && consistent; ++sym) {
        Felem acc = 0;
        for (std::uint32_t b = 0; b < code.block_count; ++b)
          acc = field.add(acc, field.mul(coeff[b], blocks[b * code.symbols_per_block + sym]));
        if (acc != payload[sym]) consistent = false;
      }
      if (!consistent) break;
    }
    if (!consistent) continue;
    ++result.consistent_candidates;

    double logp = 0.0;
    for (std::uint32_t i = 0; i < code.l; ++i) {
      double p = use_side ? xy[candidate[i]][y[i]] : x_marginal[candidate[i]];
      if (p <= 0.0) {
        logp = -1e300;
        break;
      }
      logp += std::log(p);
    }
    if (!have_best || logp > best_logp + 1e-12) {
      best_logp = logp;
      best = candidate;
      have_best = true;
      tie = false;
    } else if (logp > best_logp - 1e-12) {
      tie = true;
    }
  }

  if (!have_best || tie) {
    result.decoded = std::nullopt;
  } else {
    result.decoded = best;
  }
  return result;
}

}  // namespace ncg
