#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "ncgossip/errors.hpp"

namespace ncg {

// Element of GF(p^m), encoded as an integer in [0, q): the base-p digits of
// the value are the coefficients of the representative polynomial.
using Felem = std::uint32_t;

// Arithmetic in GF(q) for q = p^m <= 2^16. Multiplication and inversion go
// through log/antilog tables built once at construction; addition is XOR for
// characteristic 2 and digit-wise mod p otherwise. Immutable after
// construction, safe to share across threads.
class Field {
public:
  static constexpr std::uint32_t kMaxOrder = 1u << 16;

  // modulus: ascending coefficients of a monic irreducible polynomial of
  // degree m over F_p (ignored and may be empty when m == 1). Without an
  // explicit modulus the built-in one for (p, m) is used.
  static std::shared_ptr<const Field> make(std::uint32_t p, std::uint32_t m,
                                           std::optional<std::vector<std::uint32_t>> modulus = std::nullopt);

  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return m_; }
  std::uint32_t order() const { return q_; }
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  bool valid(Felem a) const { return a < q_; }

  Felem add(Felem a, Felem b) const {
    if (p_ == 2) return a ^ b;
    return add_digits(a, b);
  }

  Felem neg(Felem a) const {
    if (p_ == 2) return a;
    return neg_digits(a);
  }

  Felem sub(Felem a, Felem b) const { return add(a, neg(b)); }

  Felem mul(Felem a, Felem b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }

  Felem inv(Felem a) const {
    require(a != 0, Err::ZeroInverse, "inverse of zero");
    return exp_[q_ - 1 - log_[a]];
  }

  Felem pow(Felem a, std::uint64_t e) const {
    if (a == 0) return e == 0 ? 1 : 0;
    std::uint64_t le = (static_cast<std::uint64_t>(log_[a]) * (e % (q_ - 1))) % (q_ - 1);
    return exp_[le];
  }

  // Built-in modulus: the monic irreducible polynomial of degree m over F_p
  // with the smallest base-p integer encoding (e.g. x^2+x+1 for GF(4)).
  static std::vector<std::uint32_t> default_modulus(std::uint32_t p, std::uint32_t m);
  static bool is_prime(std::uint32_t p);
  static bool is_irreducible(const std::vector<std::uint32_t>& poly, std::uint32_t p);

private:
  Field(std::uint32_t p, std::uint32_t m, std::vector<std::uint32_t> modulus);

  Felem add_digits(Felem a, Felem b) const;
  Felem neg_digits(Felem a) const;
  Felem mul_slow(Felem a, Felem b) const;
  void build_tables();

  std::uint32_t p_ = 0;
  std::uint32_t m_ = 0;
  std::uint32_t q_ = 0;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint16_t> log_;  // index by element, log_[0] unused
  std::vector<std::uint16_t> exp_;  // doubled so mul skips the mod (q-1)
};

using FieldRef = std::shared_ptr<const Field>;

}  // namespace ncg
