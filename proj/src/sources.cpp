#include "ncgossip/sources.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ncgossip/util.hpp"

namespace ncg {

namespace {

double entropy_of(const std::vector<double>& pmf) {
  double h = 0.0;
  for (double p : pmf)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

std::vector<double> cumulative(const std::vector<double>& pmf) {
  std::vector<double> cdf(pmf.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    acc += pmf[i];
    cdf[i] = acc;
  }
  if (!cdf.empty()) cdf.back() = 1.0;
  return cdf;
}

std::uint32_t draw_from_cdf(const std::vector<double>& cdf, RngStream& rng) {
  double u = rng.uniform01();
  auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) --it;
  return static_cast<std::uint32_t>(it - cdf.begin());
}

}  // namespace

void JointSource::finalize() {
  require(!x_alphabets_.empty(), Err::Config, "source requires at least one message");
  std::uint64_t cells = 1;
  for (auto a : x_alphabets_) {
    require(a >= 1, Err::Config, "message alphabet must be nonempty");
    cells *= a;
    require(cells <= kMaxCells, Err::TooLarge, "joint table exceeds the 2^24 cell guard");
  }
  require(joint_x_.size() == cells, Err::Config, "joint pmf size does not match alphabets");

  double sum = 0.0;
  for (double p : joint_x_) {
    require(p >= 0.0, Err::Config, "joint pmf has a negative entry");
    sum += p;
  }
  require(std::abs(sum - 1.0) <= 1e-6, Err::Config, "joint pmf does not sum to 1");
  for (auto& p : joint_x_) p /= sum;
  joint_x_cdf_ = cumulative(joint_x_);

  require(node_channel_.size() == node_count_, Err::Internal, "channel map size mismatch");
  for (auto& ch : channels_) {
    require(ch.y_alphabet >= 1, Err::Config, "side alphabet must be nonempty");
    require(ch.cond.size() == joint_x_.size(), Err::Config, "channel table must have one row per x tuple");
    ch.cdf.clear();
    for (auto& row : ch.cond) {
      require(row.size() == ch.y_alphabet, Err::Config, "channel row width mismatch");
      double rs = 0.0;
      for (double p : row) {
        require(p >= 0.0, Err::Config, "channel has a negative entry");
        rs += p;
      }
      require(std::abs(rs - 1.0) <= 1e-6, Err::Config, "channel row does not sum to 1");
      for (auto& p : row) p /= rs;
      ch.cdf.push_back(cumulative(row));
    }
  }
}

std::uint32_t JointSource::decompose(std::uint64_t x_index, std::uint32_t i) const {
  for (std::uint32_t j = 0; j < i; ++j) x_index /= x_alphabets_[j];
  return static_cast<std::uint32_t>(x_index % x_alphabets_[i]);
}

std::uint32_t JointSource::y_alphabet(std::uint32_t node) const {
  require(node < node_count_, Err::InvalidArgument, "node out of range");
  int ch = node_channel_[node];
  return ch < 0 ? 1 : channels_[ch].y_alphabet;
}

double JointSource::entropy_x(std::uint32_t i) const {
  require(i < k(), Err::InvalidArgument, "message index out of range");
  std::vector<double> marg(x_alphabets_[i], 0.0);
  for (std::size_t xi = 0; xi < joint_x_.size(); ++xi) marg[decompose(xi, i)] += joint_x_[xi];
  return entropy_of(marg);
}

double JointSource::joint_entropy_x() const { return entropy_of(joint_x_); }

double JointSource::cond_entropy(std::uint32_t subset_mask, std::uint32_t node) const {
  require(node < node_count_, Err::InvalidArgument, "node out of range");
  require(subset_mask < (1u << k()), Err::InvalidArgument, "subset mask out of range");
  if (subset_mask == 0) return 0.0;

  int ch = node_channel_[node];
  const std::uint32_t ya = ch < 0 ? 1 : channels_[ch].y_alphabet;

  // project each x tuple onto the complement-subset coordinates
  std::uint64_t comp_cells = 1;
  std::vector<std::uint32_t> comp_idx;
  for (std::uint32_t i = 0; i < k(); ++i) {
    if ((subset_mask >> i) & 1u) continue;
    comp_idx.push_back(i);
    comp_cells *= x_alphabets_[i];
  }

  double h_all = 0.0;  // H(X_all, Y_v)
  std::vector<double> comp_marg(comp_cells * ya, 0.0);
  for (std::size_t xi = 0; xi < joint_x_.size(); ++xi) {
    if (joint_x_[xi] == 0.0) continue;
    std::uint64_t proj = 0, place = 1;
    for (auto i : comp_idx) {
      proj += static_cast<std::uint64_t>(decompose(xi, i)) * place;
      place *= x_alphabets_[i];
    }
    for (std::uint32_t y = 0; y < ya; ++y) {
      double p = joint_x_[xi] * (ch < 0 ? 1.0 : channels_[ch].cond[xi][y]);
      if (p <= 0.0) continue;
      h_all -= p * std::log2(p);
      comp_marg[proj * ya + y] += p;
    }
  }
  double h_comp = entropy_of(comp_marg);  // H(X_S̄, Y_v)
  return std::max(0.0, h_all - h_comp);
}

bool JointSource::sw_sufficient(std::uint32_t node, std::span<const double> caps) const {
  require(caps.size() == k(), Err::DimensionMismatch, "capacity vector length must equal k");
  require(k() <= kMaxSubsetK, Err::KTooLarge, "subset enumeration guard: k must be <= 20");
  for (double c : caps) require(c >= 0.0, Err::InvalidArgument, "capacities must be nonnegative");
  const std::uint32_t full = (1u << k()) - 1;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    double csum = 0.0;
    for (std::uint32_t i = 0; i < k(); ++i)
      if ((mask >> i) & 1u) csum += caps[i];
    if (csum + 1e-9 < cond_entropy(mask, node)) return false;
  }
  return true;
}

std::uint32_t JointSource::decode_threshold_single(std::uint32_t node, std::uint32_t l, std::uint32_t s,
                                                   double delta) const {
  require(k() == 1, Err::InvalidArgument, "single-source threshold requires k == 1");
  require(s > 0 && delta > 0.0, Err::InvalidArgument, "requires s > 0 and delta > 0");
  double h = cond_entropy(1u, node);
  if (h <= 1e-12) return 0;  // nothing to learn
  return ceil_tol(static_cast<double>(l) / s * (h + delta));
}

std::uint32_t JointSource::decode_threshold_joint(std::uint32_t l, std::uint32_t s, double delta) const {
  require(k() == 2, Err::InvalidArgument, "joint threshold requires k == 2");
  require(s > 0 && delta > 0.0, Err::InvalidArgument, "requires s > 0 and delta > 0");
  double h = joint_entropy_x();
  if (h <= 1e-12) return 0;
  return ceil_tol(static_cast<double>(l) / s * (h + 2.0 * delta));
}

SampleBatch JointSource::sample_iid(std::uint32_t l, RngStream stream) const {
  require(l >= 1, Err::InvalidArgument, "block length must be >= 1");
  SampleBatch batch;
  batch.l = l;
  batch.x.assign(k(), std::vector<std::uint32_t>(l, 0));
  batch.y.assign(node_count_, std::vector<std::uint32_t>(l, 0));
  for (std::uint32_t j = 0; j < l; ++j) {
    std::uint64_t xi = draw_from_cdf(joint_x_cdf_, stream);
    for (std::uint32_t i = 0; i < k(); ++i) batch.x[i][j] = decompose(xi, i);
    for (std::uint32_t v = 0; v < node_count_; ++v) {
      int ch = node_channel_[v];
      if (ch < 0) continue;
      batch.y[v][j] = draw_from_cdf(channels_[ch].cdf[xi], stream);
    }
  }
  return batch;
}

std::vector<std::vector<double>> JointSource::xy_joint(std::uint32_t node) const {
  require(node < node_count_, Err::InvalidArgument, "node out of range");
  int ch = node_channel_[node];
  const std::uint32_t ya = ch < 0 ? 1 : channels_[ch].y_alphabet;
  std::vector<std::vector<double>> out(joint_x_.size(), std::vector<double>(ya, 0.0));
  for (std::size_t xi = 0; xi < joint_x_.size(); ++xi)
    for (std::uint32_t y = 0; y < ya; ++y) out[xi][y] = joint_x_[xi] * (ch < 0 ? 1.0 : channels_[ch].cond[xi][y]);
  return out;
}

std::shared_ptr<const JointSource> JointSource::independent_uniform_bits(std::uint32_t k, std::uint32_t node_count) {
  require(k >= 1 && k <= 24, Err::InvalidArgument, "k out of range");
  auto src = std::shared_ptr<JointSource>(new JointSource());
  src->node_count_ = node_count;
  src->x_alphabets_.assign(k, 2);
  src->joint_x_.assign(1ull << k, 1.0 / static_cast<double>(1ull << k));
  src->node_channel_.assign(node_count, -1);
  src->finalize();
  return src;
}

std::shared_ptr<const JointSource> JointSource::dsbs(const std::vector<DsbsClass>& classes,
                                                     std::uint32_t node_count) {
  auto src = std::shared_ptr<JointSource>(new JointSource());
  src->node_count_ = node_count;
  src->x_alphabets_ = {2};
  src->joint_x_ = {0.5, 0.5};
  src->node_channel_.assign(node_count, -1);
  for (const auto& cls : classes) {
    require(cls.crossover >= 0.0 && cls.crossover <= 1.0, Err::Config, "crossover must lie in [0,1]");
    SideChannel ch;
    ch.y_alphabet = 2;
    ch.cond = {{1.0 - cls.crossover, cls.crossover}, {cls.crossover, 1.0 - cls.crossover}};
    int idx = static_cast<int>(src->channels_.size());
    src->channels_.push_back(std::move(ch));
    for (auto v : cls.nodes) {
      require(v < node_count, Err::Config, "class node out of range");
      require(src->node_channel_[v] < 0, Err::Config, "node assigned to two side-information classes");
      src->node_channel_[v] = idx;
    }
  }
  src->finalize();
  return src;
}

std::shared_ptr<const JointSource> JointSource::symmetric_bits(double flip, std::uint32_t node_count) {
  require(flip >= 0.0 && flip <= 1.0, Err::Config, "flip must lie in [0,1]");
  auto src = std::shared_ptr<JointSource>(new JointSource());
  src->node_count_ = node_count;
  src->x_alphabets_ = {2, 2};
  // order: x2*2 + x1? mixed radix: index = x1 + 2*x2
  src->joint_x_ = {(1 - flip) / 2, flip / 2, flip / 2, (1 - flip) / 2};
  src->node_channel_.assign(node_count, -1);
  src->finalize();
  return src;
}

std::shared_ptr<const JointSource> JointSource::constant(std::uint32_t alphabet, std::uint32_t value,
                                                         std::uint32_t node_count) {
  require(alphabet >= 1 && value < alphabet, Err::Config, "constant value out of range");
  auto src = std::shared_ptr<JointSource>(new JointSource());
  src->node_count_ = node_count;
  src->x_alphabets_ = {alphabet};
  src->joint_x_.assign(alphabet, 0.0);
  src->joint_x_[value] = 1.0;
  src->node_channel_.assign(node_count, -1);
  src->finalize();
  return src;
}

std::shared_ptr<const JointSource> JointSource::dense(std::vector<std::uint32_t> x_alphabets,
                                                      std::vector<double> joint_x, std::uint32_t node_count) {
  auto src = std::shared_ptr<JointSource>(new JointSource());
  src->node_count_ = node_count;
  src->x_alphabets_ = std::move(x_alphabets);
  src->joint_x_ = std::move(joint_x);
  src->node_channel_.assign(node_count, -1);
  src->finalize();
  return src;
}

std::shared_ptr<const JointSource> JointSource::from_json(const nlohmann::json& j, std::uint32_t node_count) {
  require(j.is_object() && j.contains("family"), Err::Config, "source must be an object with a 'family'");
  std::string family = j.at("family").get<std::string>();
  if (family == "independent-uniform-bits") {
    return independent_uniform_bits(j.at("k").get<std::uint32_t>(), node_count);
  }
  if (family == "dsbs") {
    std::vector<DsbsClass> classes;
    for (const auto& c : j.at("classes")) {
      DsbsClass cls;
      cls.crossover = c.at("crossover").get<double>();
      cls.nodes = c.at("nodes").get<std::vector<std::uint32_t>>();
      classes.push_back(std::move(cls));
    }
    return dsbs(classes, node_count);
  }
  if (family == "symmetric-bits") {
    return symmetric_bits(j.at("flip").get<double>(), node_count);
  }
  if (family == "constant") {
    return constant(j.value("alphabet", 2u), j.value("value", 0u), node_count);
  }
  if (family == "dense") {
    auto src = dense(j.at("x_alphabets").get<std::vector<std::uint32_t>>(),
                     j.at("joint_x").get<std::vector<double>>(), node_count);
    if (j.contains("channels")) {
      // rebuild with channels attached
      auto mut = std::shared_ptr<JointSource>(new JointSource());
      mut->node_count_ = node_count;
      mut->x_alphabets_ = j.at("x_alphabets").get<std::vector<std::uint32_t>>();
      mut->joint_x_ = j.at("joint_x").get<std::vector<double>>();
      mut->node_channel_.assign(node_count, -1);
      for (const auto& cj : j.at("channels")) {
        SideChannel ch;
        ch.y_alphabet = cj.at("y_alphabet").get<std::uint32_t>();
        ch.cond = cj.at("cond").get<std::vector<std::vector<double>>>();
        int idx = static_cast<int>(mut->channels_.size());
        mut->channels_.push_back(std::move(ch));
        for (auto v : cj.at("nodes").get<std::vector<std::uint32_t>>()) {
          require(v < node_count, Err::Config, "channel node out of range");
          require(mut->node_channel_[v] < 0, Err::Config, "node assigned to two channels");
          mut->node_channel_[v] = idx;
        }
      }
      mut->finalize();
      return mut;
    }
    return src;
  }
  fail(Err::Config, "unknown source family '" + family + "'");
}

}  // namespace ncg
