#include "doctest.h"
#include "ncgossip/sources.hpp"
#include "ncgossip/util.hpp"
#include "support/stats.hpp"

using namespace ncg;
using nlohmann::json;

TEST_SUITE("sources") {
  TEST_CASE("independent uniform bits") {
    auto src = JointSource::independent_uniform_bits(2, 3);
    CHECK(src->k() == 2);
    CHECK(src->entropy_x(0) == doctest::Approx(1.0));
    CHECK(src->joint_entropy_x() == doctest::Approx(2.0));
    // no side information: H(X1,X2 | Y) = 2
    CHECK(src->cond_entropy(0b11, 0) == doctest::Approx(2.0));
    CHECK(src->cond_entropy(0b01, 0) == doctest::Approx(1.0));
    CHECK(src->cond_entropy(0, 0) == doctest::Approx(0.0));
  }

  TEST_CASE("side information that determines the message zeroes the entropy") {
    auto src = JointSource::dsbs({{.nodes = {0}, .crossover = 0.0}}, 2);
    CHECK(src->cond_entropy(1, 0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(src->cond_entropy(1, 1) == doctest::Approx(1.0));
  }

  TEST_CASE("dsbs conditional entropy matches the binary entropy formula") {
    auto src = JointSource::dsbs({{.nodes = {0}, .crossover = 0.11}}, 1);
    CHECK(src->cond_entropy(1, 0) == doctest::Approx(teststat::binary_entropy(0.11)).epsilon(1e-9));
    CHECK(src->cond_entropy(1, 0) == doctest::Approx(0.49992).epsilon(1e-4));
  }

  TEST_CASE("symmetric bits joint entropy") {
    auto src = JointSource::symmetric_bits(0.15, 1);
    CHECK(src->joint_entropy_x() == doctest::Approx(1.0 + teststat::binary_entropy(0.15)).epsilon(1e-9));
    CHECK(src->entropy_x(0) == doctest::Approx(1.0));
    CHECK(src->entropy_x(1) == doctest::Approx(1.0));
  }

  TEST_CASE("chain rule against a direct joint-entropy oracle") {
    RngStream rng(808);
    for (int trial = 0; trial < 10; ++trial) {
      RngStream tr = rng.child(trial);
      // random dense joint over two ternary messages with a binary side channel
      std::vector<double> joint(9);
      double sum = 0;
      for (auto& p : joint) {
        p = tr.uniform01() + 0.01;
        sum += p;
      }
      for (auto& p : joint) p /= sum;
      json channels = json::array();
      std::vector<std::vector<double>> cond;
      for (int xi = 0; xi < 9; ++xi) {
        double a = 0.1 + 0.8 * tr.uniform01();
        cond.push_back({a, 1.0 - a});
      }
      channels.push_back(json{{"nodes", {0}}, {"y_alphabet", 2}, {"cond", cond}});
      auto src = JointSource::from_json(
          json{{"family", "dense"}, {"x_alphabets", {3, 3}}, {"joint_x", joint}, {"channels", channels}}, 1);

      // oracle: direct H(X1, X2, Y) - H(Y) vs chain over the module's queries
      double h_xy = 0, h_y = 0;
      std::vector<double> y_marg(2, 0.0);
      for (int xi = 0; xi < 9; ++xi) {
        for (int y = 0; y < 2; ++y) {
          double p = joint[xi] * cond[xi][y];
          if (p > 0) h_xy -= p * std::log2(p);
          y_marg[y] += p;
        }
      }
      for (double p : y_marg)
        if (p > 0) h_y -= p * std::log2(p);
      double h_all_given_y = h_xy - h_y;

      double h12 = src->cond_entropy(0b11, 0);
      CHECK(h12 == doctest::Approx(h_all_given_y).epsilon(1e-9));
      // chain rule: H(X1,X2|Y) = H(X1|X2,Y) + H(X2|Y); recover H(X2|Y) from the oracle
      double h2_given_y = 0;
      {
        //  H(X2, Y) - H(Y)
        std::vector<double> x2y(3 * 2, 0.0);
        for (int xi = 0; xi < 9; ++xi)
          for (int y = 0; y < 2; ++y) x2y[(xi / 3) * 2 + y] += joint[xi] * cond[xi][y];
        double h_x2y = 0;
        for (double p : x2y)
          if (p > 0) h_x2y -= p * std::log2(p);
        h2_given_y = h_x2y - h_y;
      }
      CHECK(h12 == doctest::Approx(src->cond_entropy(0b01, 0) + h2_given_y).epsilon(1e-9));
    }
  }

  TEST_CASE("side information never hurts") {
    auto with_side = JointSource::dsbs({{.nodes = {0}, .crossover = 0.2}}, 2);
    // node 1 has no side information
    CHECK(with_side->cond_entropy(1, 0) <= with_side->cond_entropy(1, 1) + 1e-12);
  }

  TEST_CASE("sw_sufficient on two independent uniform bits") {
    auto src = JointSource::independent_uniform_bits(2, 1);
    std::vector<double> good{1.0, 1.0};
    std::vector<double> bad{0.9, 1.0};
    CHECK(src->sw_sufficient(0, good));
    CHECK_FALSE(src->sw_sufficient(0, bad));
    std::vector<double> generous{1.7, 1.9};
    CHECK(src->sw_sufficient(0, generous));
  }

  TEST_CASE("sw_sufficient is monotone in the capacity vector") {
    auto src = JointSource::symmetric_bits(0.2, 1);
    RngStream rng(41);
    for (int trial = 0; trial < 200; ++trial) {
      RngStream tr = rng.child(trial);
      std::vector<double> c{2.0 * tr.uniform01(), 2.0 * tr.uniform01()};
      std::vector<double> c2{c[0] + tr.uniform01(), c[1] + tr.uniform01()};
      if (src->sw_sufficient(0, c)) CHECK(src->sw_sufficient(0, c2));
    }
  }

  TEST_CASE("sw guard rejects large k") {
    auto src = JointSource::independent_uniform_bits(21, 1);
    std::vector<double> caps(21, 1.0);
    CHECK_THROWS_AS((void)src->sw_sufficient(0, caps), Error);
  }

  TEST_CASE("table guard rejects oversized joints") {
    CHECK_THROWS_AS((void)JointSource::independent_uniform_bits(25, 1), Error);
  }

  TEST_CASE("decode thresholds") {
    auto uniform = JointSource::dsbs({}, 2);  // uniform bit, no side info anywhere
    CHECK(uniform->decode_threshold_single(0, 100, 10, 0.1) == 11);  // ceil(10 * 1.1)

    auto dsbs11 = JointSource::dsbs({{.nodes = {0}, .crossover = 0.11}}, 1);
    CHECK(dsbs11->decode_threshold_single(0, 100, 10, 0.1) == 6);  // ceil(10 * (h_b(0.11) + 0.1))

    auto point = JointSource::constant(2, 1, 1);
    CHECK(point->decode_threshold_single(0, 100, 10, 0.1) == 0);  // zero entropy

    auto pair = JointSource::symmetric_bits(0.15, 1);
    // ceil(10 * (1 + h_b(0.15) + 0.2)) = ceil(18.098) = 19
    CHECK(pair->decode_threshold_joint(100, 10, 0.1) == 19);
    auto indep = JointSource::independent_uniform_bits(2, 1);
    CHECK(indep->decode_threshold_joint(100, 10, 0.1) == 22);
  }

  TEST_CASE("sampling statistics") {
    auto point = JointSource::constant(3, 2, 1);
    auto batch = point->sample_iid(50, RngStream(1));
    for (auto v : batch.x[0]) CHECK(v == 2);

    auto uniform = JointSource::dsbs({}, 1);
    auto ub = uniform->sample_iid(10000, RngStream(2));
    double ones = 0;
    for (auto v : ub.x[0]) ones += v;
    CHECK(ones / 10000.0 > 0.48);
    CHECK(ones / 10000.0 < 0.52);

    auto dsbs = JointSource::dsbs({{.nodes = {0}, .crossover = 0.1}}, 1);
    auto db = dsbs->sample_iid(10000, RngStream(3));
    double disagree = 0;
    for (std::uint32_t j = 0; j < db.l; ++j) disagree += db.x[0][j] != db.y[0][j];
    double sigma = std::sqrt(0.1 * 0.9 / 10000.0);
    CHECK(disagree / 10000.0 > 0.1 - 4 * sigma);
    CHECK(disagree / 10000.0 < 0.1 + 4 * sigma);
  }

  TEST_CASE("dense config validation") {
    CHECK_THROWS_AS((void)JointSource::dense({2}, {0.6, 0.6}, 1), Error);   // sums to 1.2
    CHECK_THROWS_AS((void)JointSource::dense({2}, {0.5, 0.5, 0.5}, 1), Error);  // wrong size
    CHECK_THROWS_AS((void)JointSource::from_json(json{{"family", "nope"}}, 1), Error);
    // channel rows must be distributions
    json bad = json{{"family", "dense"},
                    {"x_alphabets", {2}},
                    {"joint_x", {0.5, 0.5}},
                    {"channels", json::array({json{{"nodes", {0}}, {"y_alphabet", 2},
                                                   {"cond", {{0.5, 0.2}, {0.5, 0.5}}}}})}};
    CHECK_THROWS_AS((void)JointSource::from_json(bad, 1), Error);
  }

  TEST_CASE("ceil_tol avoids floating point spillover") {
    CHECK(ceil_tol(10.0 * 1.1) == 11);
    CHECK(ceil_tol(10.0 * (0.49993 + 0.1)) == 6);
    CHECK(ceil_tol(20.0) == 20);
    CHECK(ceil_tol(0.001) == 1);
    CHECK(ceil_tol(0.0) == 0);
  }
}
