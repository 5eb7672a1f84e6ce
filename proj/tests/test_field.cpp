#include "doctest.h"
#include "ncgossip/field.hpp"
#include "ncgossip/rng.hpp"

using namespace ncg;

TEST_SUITE("field") {
  TEST_CASE("gf2 basics") {
    auto f = Field::make(2, 1);
    CHECK(f->order() == 2);
    CHECK(f->add(1, 1) == 0);
    CHECK(f->mul(1, 1) == 1);
    CHECK(f->inv(1) == 1);
  }

  TEST_CASE("gf3 basics") {
    auto f = Field::make(3, 1);
    CHECK(f->add(2, 2) == 1);
    CHECK(f->mul(2, 2) == 1);
    CHECK(f->inv(2) == 2);
  }

  TEST_CASE("gf4 with canonical modulus x^2+x+1") {
    auto f = Field::make(2, 2);
    REQUIRE(f->modulus() == std::vector<std::uint32_t>{1, 1, 1});
    // x=2, x+1=3: coefficient-wise addition mod 2
    CHECK(f->add(2, 3) == 1);
    // x*x = x+1 after reduction
    CHECK(f->mul(2, 2) == 3);
    // x*(x+1) = x^2+x = 1, so inv(x) = x+1
    CHECK(f->inv(2) == 3);
    CHECK(f->mul(3, 3) == 2);
  }

  TEST_CASE("zero inverse rejected") {
    auto f = Field::make(2, 4);
    CHECK_THROWS_AS((void)f->inv(0), Error);
    try {
      (void)f->inv(0);
    } catch (const Error& e) {
      CHECK(e.code() == Err::ZeroInverse);
    }
  }

  TEST_CASE("construction guards") {
    CHECK_THROWS_AS((void)Field::make(4, 1), Error);   // composite characteristic
    CHECK_THROWS_AS((void)Field::make(2, 17), Error);  // q > 2^16
    // x^2+1 = (x+1)^2 over F_2
    CHECK_THROWS_AS((void)Field::make(2, 2, std::vector<std::uint32_t>{1, 0, 1}), Error);
  }

  TEST_CASE("modulus override: gf9 with two different moduli") {
    auto a = Field::make(3, 2);                                        // built-in x^2+1
    auto b = Field::make(3, 2, std::vector<std::uint32_t>{2, 1, 1});   // x^2+x+2, also irreducible
    CHECK(a->modulus() != b->modulus());
    for (auto f : {a, b}) {
      for (Felem x = 1; x < 9; ++x) CHECK(f->mul(x, f->inv(x)) == 1);
    }
  }

  TEST_CASE("field axioms on random triples") {
    struct Spec {
      std::uint32_t p, m;
    };
    for (Spec s : {Spec{2, 1}, Spec{3, 1}, Spec{2, 2}, Spec{5, 1}, Spec{2, 4}, Spec{3, 2}, Spec{2, 8}}) {
      auto f = Field::make(s.p, s.m);
      const std::uint32_t q = f->order();
      RngStream rng(0x5eed0 + q);
      for (int i = 0; i < 10000; ++i) {
        Felem a = rng.below(q), b = rng.below(q), c = rng.below(q);
        CHECK(f->add(a, b) == f->add(b, a));
        CHECK(f->mul(a, b) == f->mul(b, a));
        CHECK(f->add(f->add(a, b), c) == f->add(a, f->add(b, c)));
        CHECK(f->mul(f->mul(a, b), c) == f->mul(a, f->mul(b, c)));
        CHECK(f->mul(a, f->add(b, c)) == f->add(f->mul(a, b), f->mul(a, c)));
        CHECK(f->add(a, 0) == a);
        CHECK(f->mul(a, 1) == a);
        CHECK(f->add(a, f->neg(a)) == 0);
        if (a != 0) CHECK(f->mul(a, f->inv(a)) == 1);
      }
    }
  }

  TEST_CASE("a^(q-1) = 1 exhaustively for q <= 256") {
    struct Spec {
      std::uint32_t p, m;
    };
    for (Spec s : {Spec{2, 1}, Spec{3, 1}, Spec{2, 2}, Spec{5, 1}, Spec{2, 4}, Spec{3, 2}, Spec{13, 1}, Spec{2, 8}}) {
      auto f = Field::make(s.p, s.m);
      const std::uint32_t q = f->order();
      REQUIRE(q <= 256);
      for (Felem a = 1; a < q; ++a) CHECK(f->pow(a, q - 1) == 1);
    }
  }

  TEST_CASE("sub and pow are consistent") {
    auto f = Field::make(3, 2);
    RngStream rng(77);
    for (int i = 0; i < 1000; ++i) {
      Felem a = rng.below(9), b = rng.below(9);
      CHECK(f->add(f->sub(a, b), b) == a);
      CHECK(f->pow(a, 2) == f->mul(a, a));
      CHECK(f->pow(a, 0) == 1);
    }
  }
}
