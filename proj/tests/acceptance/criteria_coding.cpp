#include <sstream>

#include "acceptance/criteria.hpp"
#include "ncgossip/coding.hpp"

namespace acceptance {

using namespace ncg;

// DSBS side information, l = 8, delta = 0.5 (full bin index spans 4 blocks):
// the exhaustive MAP decoder's error rate must be non-increasing in the
// number of independent equations and below 10% at full rank. The curve is
// recorded in the detail string, not asserted.
Outcome c8_map_decode_trend() {
  Outcome out;
  std::ostringstream detail;

  auto field = Field::make(2, 1);
  auto source = JointSource::dsbs({{.nodes = {0}, .crossover = 0.05}}, 1);
  auto code = BinningCode::make(*field, 0, 8, 3, 0.5, source->entropy_x(0), 0xC8B1);
  if (code.block_count != 4) {
    out.pass = false;
    out.detail = "unexpected block layout";
    return out;
  }

  const int kTrials = 1000;
  std::vector<int> errors(code.block_count + 1, 0);
  RngStream rng(0xC8E0);
  for (int t = 0; t < kTrials; ++t) {
    RngStream tr = rng.child(t);
    auto batch = source->sample_iid(code.l, tr);
    FVec bin = bin_index(*field, code, batch.x[0]);

    // nested independent equations: the r-equation set extends the (r-1) set
    RowSpace span(field, code.block_count);
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
          axpy(*field, coeff[b], blockvec, payload);
        }
        eqs.emplace_back(coeff, payload);
      }
      auto res = oracle_decode(*field, code, eqs, batch.y[0], *source, 0);
      if (!res.decoded.has_value() || *res.decoded != batch.x[0]) errors[r]++;
    }
  }

  bool monotone = true;
  for (std::uint32_t r = 1; r <= code.block_count; ++r) monotone = monotone && errors[r] <= errors[r - 1];
  double final_rate = static_cast<double>(errors[code.block_count]) / kTrials;
  out.pass = monotone && final_rate < 0.10;

  detail << " error curve (rank 0.." << code.block_count << "):";
  for (std::uint32_t r = 0; r <= code.block_count; ++r)
    detail << " " << static_cast<double>(errors[r]) / kTrials;
  detail << (monotone ? "; non-increasing" : "; NOT MONOTONE") << "; full-rank rate " << final_rate
         << (final_rate < 0.10 ? " < 0.10" : " TOO HIGH");
  out.detail = detail.str();
  return out;
}

}  // namespace acceptance
