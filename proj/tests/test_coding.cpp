#include <set>

#include "doctest.h"
#include "ncgossip/coding.hpp"
#include "support/stats.hpp"

using namespace ncg;

namespace {

FVec random_payload(const Field& f, std::uint32_t width, RngStream& rng) {
  FVec v(width);
  for (auto& x : v) x = rng.below(f.order());
  return v;
}

}  // namespace

TEST_SUITE("coding") {
  TEST_CASE("binning code layout") {
    auto f = Field::make(2, 1);
    // uniform bit, l = 200, s = 10, delta = 0.1: h = 220 bits, 22 blocks
    auto code = BinningCode::make(*f, 0, 200, 10, 0.1, 1.0, 7);
    CHECK(code.h == 220);
    CHECK(code.symbols_per_block == 10);
    CHECK(code.block_count == 22);
    CHECK(code.padded_len() == 220);

    auto f4 = Field::make(2, 2);
    auto code4 = BinningCode::make(*f4, 0, 100, 10, 0.1, 1.0, 7);
    CHECK(code4.symbols_per_block == 5);
    CHECK(code4.h == 55);  // ceil(100 * 1.1 / 2)
    CHECK(code4.block_count == 11);
    CHECK(code4.padded_len() == 55);

    // deterministic message: empty bin index
    auto code0 = BinningCode::make(*f, 0, 50, 10, 0.1, 0.0, 7);
    CHECK(code0.h == 0);
    CHECK(code0.block_count == 0);

    CHECK_THROWS_AS((void)BinningCode::make(*Field::make(3, 1), 0, 10, 10, 0.1, 1.0, 7), Error);
    CHECK_THROWS_AS((void)BinningCode::make(*f4, 0, 10, 5, 0.1, 1.0, 7), Error);  // s not a multiple of 2
  }

  TEST_CASE("bin index is deterministic in (seed, x) and differs across seeds") {
    auto f = Field::make(2, 1);
    auto code_a = BinningCode::make(*f, 0, 16, 4, 0.5, 1.0, 99);
    auto code_b = BinningCode::make(*f, 0, 16, 4, 0.5, 1.0, 100);
    std::vector<std::uint32_t> x(16, 0);
    RngStream rng(5);
    for (auto& v : x) v = rng.below(2);
    CHECK(bin_index(*f, code_a, x) == bin_index(*f, code_a, x));
    CHECK(bin_index(*f, code_a, x) != bin_index(*f, code_b, x));
    auto y = x;
    y[3] ^= 1;
    CHECK(bin_index(*f, code_a, x) != bin_index(*f, code_a, y));
  }

  TEST_CASE("bin occupancy is uniform (chi-square on the leading symbols)") {
    auto f = Field::make(2, 2);
    auto code = BinningCode::make(*f, 0, 32, 4, 0.5, 1.0, 1234);
    std::vector<double> counts(16, 0.0);
    RngStream rng(66);
    const int kSamples = 10000;
    for (int i = 0; i < kSamples; ++i) {
      std::vector<std::uint32_t> x(32);
      for (auto& v : x) v = rng.below(2);
      FVec bin = bin_index(*f, code, x);
      counts[bin[0] * 4 + bin[1]] += 1.0;
    }
    std::vector<double> expected(16, kSamples / 16.0);
    CHECK(teststat::chi2_stat(counts, expected) < teststat::chi2_crit95(15));
  }

  TEST_CASE("empty node state emits the zero packet") {
    NodeState state(Field::make(2, 1), 4, 3);
    RngStream rng(1);
    auto pkt = state.make_packet(rng);
    CHECK(pkt.header == FVec{0, 0, 0, 0});
    CHECK(pkt.payload == FVec{0, 0, 0});
  }

  TEST_CASE("single-block source over gf2 emits header 0 or 1 uniformly") {
    auto f = Field::make(2, 1);
    NodeState state(f, 1, 2);
    state.add_own_block(0, FVec{1, 0});
    RngStream rng(42);
    int ones = 0;
    const int kTrials = 10000;
    for (int i = 0; i < kTrials; ++i) {
      auto pkt = state.make_packet(rng);
      if (pkt.header[0] == 1) {
        ++ones;
        CHECK(pkt.payload == FVec{1, 0});
      } else {
        CHECK(pkt.payload == FVec{0, 0});
      }
    }
    double sigma = std::sqrt(0.25 / kTrials);
    CHECK(std::abs(ones / double(kTrials) - 0.5) < 4 * sigma);
  }

  TEST_CASE("emitted headers stay inside the known span") {
    auto f = Field::make(2, 2);
    NodeState state(f, 4, 2);
    state.add_own_block(1, FVec{2, 3});
    state.add_own_block(2, FVec{1, 0});
    RngStream rng(9);
    for (int i = 0; i < 200; ++i) {
      auto pkt = state.make_packet(rng);
      CHECK(pkt.header[0] == 0);
      CHECK(pkt.header[3] == 0);
    }
  }

  TEST_CASE("receive: own packets are never innovative, fresh units are") {
    auto f = Field::make(2, 1);
    NodeState a(f, 3, 2);
    a.add_own_block(0, FVec{1, 1});
    RngStream rng(11);
    bool innovative_seen = false;
    for (int i = 0; i < 20; ++i) {
      auto pkt = a.make_packet(rng);
      CHECK_FALSE(a.receive(pkt));  // in own span by construction
    }
    NodeState b(f, 3, 2);
    Packet unit{FVec{1, 0, 0}, FVec{1, 1}};
    innovative_seen = b.receive(unit);
    CHECK(innovative_seen);
    CHECK(b.rank() == 1);
    Packet zero{FVec{0, 0, 0}, FVec{0, 0}};
    CHECK_FALSE(b.receive(zero));
  }

  TEST_CASE("inconsistent equations are rejected") {
    auto f = Field::make(2, 1);
    NodeState a(f, 2, 1);
    CHECK(a.receive(Packet{FVec{1, 0}, FVec{1}}));
    CHECK(a.receive(Packet{FVec{0, 1}, FVec{0}}));
    // (1,1) must carry payload 1 xor 0 = 1; anything else contradicts
    CHECK_THROWS_AS((void)a.receive(Packet{FVec{1, 1}, FVec{0}}), Error);
  }

  TEST_CASE("stored equations remain consistent after elimination") {
    auto f = Field::make(2, 2);
    const std::uint32_t blocks = 5, width = 3;
    RngStream rng(31);
    // ground truth blocks
    std::vector<FVec> truth;
    for (std::uint32_t b = 0; b < blocks; ++b) truth.push_back(random_payload(*f, width, rng));
    NodeState state(f, blocks, width);
    for (int i = 0; i < 30; ++i) {
      FVec header(blocks);
      for (auto& c : header) c = rng.below(f->order());
      FVec payload(width, 0);
      for (std::uint32_t b = 0; b < blocks; ++b) axpy(*f, header[b], truth[b], payload);
      state.receive(Packet{header, payload});
    }
    for (const auto& [header, payload] : state.equations()) {
      FVec expect(width, 0);
      for (std::uint32_t b = 0; b < blocks; ++b) axpy(*f, header[b], truth[b], expect);
      CHECK(expect == payload);
    }
  }

  TEST_CASE("can_decode_rank thresholds") {
    NodeState state(Field::make(2, 1), 6, 1);
    CHECK(state.can_decode_rank(0));
    CHECK_FALSE(state.can_decode_rank(1));
    for (std::uint32_t b = 0; b < 5; ++b) state.add_own_block(b, FVec{0});
    CHECK(state.can_decode_rank(5));
    CHECK_FALSE(state.can_decode_rank(6));
  }

  TEST_CASE("innovation failure probability is at most 1/q") {
    auto f = Field::make(2, 2);  // q = 4
    const std::uint32_t blocks = 6, width = 1;
    RngStream rng(71);
    int fails = 0;
    const int kTrials = 4000;
    for (int t = 0; t < kTrials; ++t) {
      RngStream tr = rng.child(t);
      std::vector<FVec> truth;
      for (std::uint32_t b = 0; b < blocks; ++b) truth.push_back(random_payload(*f, width, tr));
      NodeState sender(f, blocks, width);
      NodeState receiver(f, blocks, width);
      // sender strictly ahead: knows blocks {0,1,2}, receiver only {0,1}
      for (std::uint32_t b = 0; b < 3; ++b) sender.add_own_block(b, truth[b]);
      for (std::uint32_t b = 0; b < 2; ++b) receiver.add_own_block(b, truth[b]);
      auto pkt = sender.make_packet(tr);
      if (!receiver.receive(pkt)) ++fails;
    }
    double rate = fails / double(kTrials);
    double bound = 0.25;
    double sigma = std::sqrt(bound * (1 - bound) / kTrials);
    CHECK(rate <= bound + 3 * sigma);
  }

  TEST_CASE("oracle decode: pinned bin index with a singleton bin") {
    auto f = Field::make(2, 1);
    auto source = JointSource::dsbs({}, 1);
    auto code = BinningCode::make(*f, 0, 6, 3, 1.0, 1.0, 555);  // h = 12 bits >> 6 message bits
    std::vector<std::uint32_t> x{1, 0, 1, 1, 0, 0};
    FVec bin = bin_index(*f, code, x);
    // full bin index as unit equations
    std::vector<std::pair<FVec, FVec>> eqs;
    for (std::uint32_t b = 0; b < code.block_count; ++b) {
      FVec coeff(code.block_count, 0);
      coeff[b] = 1;
      FVec payload(bin.begin() + b * code.symbols_per_block, bin.begin() + (b + 1) * code.symbols_per_block);
      eqs.emplace_back(coeff, payload);
    }
    auto res = oracle_decode(*f, code, eqs, {}, *source, 0);
    REQUIRE(res.decoded.has_value());
    CHECK(*res.decoded == x);
    CHECK(res.consistent_candidates == 1);
  }

  TEST_CASE("oracle decode: no equations and a uniform source is ambiguous") {
    auto f = Field::make(2, 1);
    auto source = JointSource::dsbs({}, 1);
    auto code = BinningCode::make(*f, 0, 4, 2, 0.5, 1.0, 3);
    auto res = oracle_decode(*f, code, {}, {}, *source, 0);
    CHECK_FALSE(res.decoded.has_value());
    CHECK(res.consistent_candidates == 16);
  }

  TEST_CASE("oracle decode guard") {
    auto f = Field::make(2, 1);
    auto source = JointSource::dsbs({}, 1);
    auto code = BinningCode::make(*f, 0, 30, 2, 0.5, 1.0, 3);
    CHECK_THROWS_AS((void)oracle_decode(*f, code, {}, {}, *source, 0), Error);
  }

  TEST_CASE("oracle decode error rate shrinks with more equations") {
    auto f = Field::make(2, 1);
    auto source = JointSource::dsbs({{.nodes = {0}, .crossover = 0.05}}, 1);
    auto code = BinningCode::make(*f, 0, 8, 3, 0.5, 1.0, 2025);
    REQUIRE(code.block_count == 4);
    const int kTrials = 200;
    std::vector<int> errors(code.block_count + 1, 0);
    RngStream rng(12);
    for (int t = 0; t < kTrials; ++t) {
      RngStream tr = rng.child(t);
      auto batch = source->sample_iid(8, tr);
      FVec bin = bin_index(*f, code, batch.x[0]);
      // nested random independent equations
      RowSpace span(f, code.block_count);
      std::vector<std::pair<FVec, FVec>> eqs;
      for (std::uint32_t r = 0; r <= code.block_count; ++r) {
        if (r > 0) {
          FVec coeff(code.block_count);
          do {
            for (auto& c : coeff) c = tr.below(2);
          } while (!span.insert(coeff));
          FVec payload(code.symbols_per_block, 0);
          for (std::uint32_t b = 0; b < code.block_count; ++b) {
            FVec blockvec(bin.begin() + b * code.symbols_per_block, bin.begin() + (b + 1) * code.symbols_per_block);
            axpy(*f, coeff[b], blockvec, payload);
          }
          eqs.emplace_back(coeff, payload);
        }
        auto res = oracle_decode(*f, code, eqs, batch.y[0], *source, 0);
        if (!res.decoded.has_value() || *res.decoded != batch.x[0]) errors[r]++;
      }
    }
    for (std::uint32_t r = 1; r <= code.block_count; ++r) CHECK(errors[r] <= errors[r - 1]);
    CHECK(errors[code.block_count] < kTrials / 10);
  }
}
