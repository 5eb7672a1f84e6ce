#include "ncgossip/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ncg {

namespace {

using Poly = std::vector<std::uint32_t>;  // ascending coefficients

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int degree(const Poly& a) { return static_cast<int>(a.size()) - 1; }

// remainder of a mod b over F_p, b monic-ish (leading coefficient inverted via
// scalar search since p is small)
Poly poly_mod(Poly a, const Poly& b, std::uint32_t p) {
  trim(a);
  int db = degree(b);
  std::uint32_t lead = b[db];
  // lead^-1 in F_p
  std::uint32_t lead_inv = 1;
  for (std::uint32_t x = 1; x < p; ++x) {
    if (lead * x % p == 1) {
      lead_inv = x;
      break;
    }
  }
  while (degree(a) >= db) {
    int da = degree(a);
    std::uint32_t factor = a[da] * lead_inv % p;
    for (int i = 0; i <= db; ++i) {
      std::uint32_t sub = factor * b[i] % p;
      std::uint32_t idx = da - db + i;
      a[idx] = (a[idx] + p - sub) % p;
    }
    trim(a);
  }
  return a;
}

bool is_zero(const Poly& a) {
  return std::all_of(a.begin(), a.end(), [](std::uint32_t c) { return c == 0; });
}

Poly decode_poly(std::uint64_t v, std::uint32_t p) {
  Poly out;
  while (v > 0) {
    out.push_back(static_cast<std::uint32_t>(v % p));
    v /= p;
  }
  return out;
}

std::uint64_t pow_u64(std::uint64_t base, std::uint32_t e) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < e; ++i) r *= base;
  return r;
}

std::vector<std::uint32_t> prime_factors(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

bool Field::is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

bool Field::is_irreducible(const std::vector<std::uint32_t>& poly, std::uint32_t p) {
  int m = ncg::degree(poly);
  if (m < 1) return false;
  // trial division by every monic polynomial of degree 1..m/2
  for (int d = 1; d * 2 <= m; ++d) {
    std::uint64_t count = pow_u64(p, static_cast<std::uint32_t>(d));
    for (std::uint64_t low = 0; low < count; ++low) {
      Poly divisor = decode_poly(low, p);
      divisor.resize(d + 1, 0);
      divisor[d] = 1;
      if (is_zero(poly_mod(poly, divisor, p))) return false;
    }
  }
  return true;
}

std::vector<std::uint32_t> Field::default_modulus(std::uint32_t p, std::uint32_t m) {
  if (m == 1) return {};
  std::uint64_t pm = pow_u64(p, m);
  for (std::uint64_t low = 1; low < pm; ++low) {
    Poly cand = decode_poly(low, p);
    cand.resize(m + 1, 0);
    cand[m] = 1;
    if (is_irreducible(cand, p)) return cand;
  }
  fail(Err::Internal, "no irreducible polynomial found");  // unreachable for valid (p, m)
}

std::shared_ptr<const Field> Field::make(std::uint32_t p, std::uint32_t m,
                                         std::optional<std::vector<std::uint32_t>> modulus) {
  require(is_prime(p), Err::InvalidArgument, "field characteristic must be prime, got " + std::to_string(p));
  require(m >= 1, Err::InvalidArgument, "extension degree must be >= 1");
  double bits = m * std::log2(static_cast<double>(p));
  require(bits <= 16.0 + 1e-9, Err::TooLarge, "field order exceeds 2^16");
  std::vector<std::uint32_t> mod;
  if (m == 1) {
    mod = {};
  } else if (modulus.has_value() && !modulus->empty()) {
    mod = *modulus;
    require(mod.size() == static_cast<std::size_t>(m) + 1, Err::InvalidArgument,
            "modulus must have degree m (m+1 coefficients, ascending)");
    for (auto c : mod) require(c < p, Err::InvalidArgument, "modulus coefficient out of range");
    require(mod.back() == 1, Err::InvalidArgument, "modulus must be monic");
    require(is_irreducible(mod, p), Err::InvalidArgument, "modulus is reducible over F_p");
  } else {
    mod = default_modulus(p, m);
  }
  return std::shared_ptr<const Field>(new Field(p, m, std::move(mod)));
}

Field::Field(std::uint32_t p, std::uint32_t m, std::vector<std::uint32_t> modulus)
    : p_(p), m_(m), modulus_(std::move(modulus)) {
  q_ = static_cast<std::uint32_t>(pow_u64(p, m));
  build_tables();
}

Felem Field::add_digits(Felem a, Felem b) const {
  Felem out = 0;
  std::uint32_t place = 1;
  while (a > 0 || b > 0) {
    std::uint32_t da = a % p_;
    std::uint32_t db = b % p_;
    out += (da + db) % p_ * place;
    a /= p_;
    b /= p_;
    place *= p_;
  }
  return out;
}

Felem Field::neg_digits(Felem a) const {
  Felem out = 0;
  std::uint32_t place = 1;
  while (a > 0) {
    std::uint32_t d = a % p_;
    out += (d == 0 ? 0 : p_ - d) * place;
    a /= p_;
    place *= p_;
  }
  return out;
}

// polynomial product reduced mod the field modulus; used only to build tables
Felem Field::mul_slow(Felem a, Felem b) const {
  if (m_ == 1) return static_cast<Felem>(static_cast<std::uint64_t>(a) * b % p_);
  std::vector<std::uint32_t> da = decode_poly(a, p_);
  std::vector<std::uint32_t> db = decode_poly(b, p_);
  std::vector<std::uint32_t> prod(da.size() + db.size(), 0);
  for (std::size_t i = 0; i < da.size(); ++i)
    for (std::size_t j = 0; j < db.size(); ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
  std::vector<std::uint32_t> red = poly_mod(prod, modulus_, p_);
  Felem out = 0;
  std::uint32_t place = 1;
  for (std::uint32_t c : red) {
    out += c * place;
    place *= p_;
  }
  return out;
}

void Field::build_tables() {
  const std::uint32_t n = q_ - 1;  // multiplicative group order
  log_.assign(q_, 0);
  exp_.assign(2 * std::max(n, 1u), 0);

  // find a generator of the multiplicative group
  Felem gen = 1;
  if (n > 1) {
    auto factors = prime_factors(n);
    auto pow_slow = [&](Felem base, std::uint32_t e) {
      Felem r = 1;
      Felem acc = base;
      while (e > 0) {
        if (e & 1) r = mul_slow(r, acc);
        acc = mul_slow(acc, acc);
        e >>= 1;
      }
      return r;
    };
    for (Felem g = 2; g < q_; ++g) {
      bool ok = true;
      for (std::uint32_t f : factors) {
        if (pow_slow(g, n / f) == 1) {
          ok = false;
          break;
        }
      }
      if (ok) {
        gen = g;
        break;
      }
    }
    require(gen != 1, Err::Internal, "no generator found");
  }

  Felem acc = 1;
  for (std::uint32_t i = 0; i < n; ++i) {
    exp_[i] = static_cast<std::uint16_t>(acc);
    log_[acc] = static_cast<std::uint16_t>(i);
    acc = mul_slow(acc, gen);
  }
  require(acc == 1, Err::Internal, "generator order mismatch");
  for (std::uint32_t i = 0; i < n; ++i) exp_[n + i] = exp_[i];
  if (n == 1) {
    exp_.assign(2, 1);
    log_[1] = 0;
  }
}

}  // namespace ncg
