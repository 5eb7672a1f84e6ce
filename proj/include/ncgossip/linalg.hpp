#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ncgossip/field.hpp"

namespace ncg {

using FVec = std::vector<Felem>;

Felem inner_product(const Field& f, std::span<const Felem> a, std::span<const Felem> b);

// y += c * x
void axpy(const Field& f, Felem c, std::span<const Felem> x, std::span<Felem> y);

// Incrementally maintained row space over F_q in reduced row-echelon form.
// The first `dim` columns are the coefficient part (pivots live there); `aug`
// trailing columns are carried through every row operation unchanged in
// meaning, which keeps stored payloads consistent with their reduced headers.
class RowSpace {
public:
  RowSpace(FieldRef field, std::uint32_t dim, std::uint32_t aug = 0);

  std::uint32_t dim() const { return dim_; }
  std::uint32_t aug_width() const { return aug_; }
  std::uint32_t rank() const { return static_cast<std::uint32_t>(rows_.size()); }
  const std::vector<FVec>& rows() const { return rows_; }
  const std::vector<std::uint32_t>& pivots() const { return pivots_; }
  const FieldRef& field() const { return field_; }

  struct InsertOutcome {
    bool rank_increased = false;
    // header part reduced to zero but the augmented part did not; signals an
    // equation inconsistent with the stored ones
    bool aug_residual = false;
  };

  // v has length dim; augmented columns are implicitly zero.
  bool insert(std::span<const Felem> v);
  // row has length dim + aug.
  InsertOutcome insert_row(std::span<const Felem> row);

  // True iff some vector of the space has nonzero inner product with mu,
  // i.e. mu is not orthogonal to the space.
  bool knows(std::span<const Felem> mu) const;

  // Membership test on the coefficient part.
  bool contains(std::span<const Felem> v) const;

  // Null space of the basis matrix; requires aug == 0. The complement of the
  // complement spans the original space again.
  RowSpace orthogonal_complement() const;

  bool same_space(const RowSpace& other) const;

private:
  FieldRef field_;
  std::uint32_t dim_ = 0;
  std::uint32_t aug_ = 0;
  std::vector<FVec> rows_;
  std::vector<std::uint32_t> pivots_;
};

// Calls fn with the RREF basis rows of every subspace of F_q^dim whose
// dimension is at most max_dim (the zero subspace yields an empty basis).
void for_each_subspace(const FieldRef& field, std::uint32_t dim, std::uint32_t max_dim,
                       const std::function<void(const std::vector<FVec>&)>& fn);

struct Lemma4Result {
  std::vector<FVec> witnesses;
  bool verified = false;
  std::uint64_t subspaces_checked = 0;
};

// Builds the witness set (all q^h vectors of the coordinate subspace spanned
// by the first h unit vectors, plus the next unit vector, which is orthogonal
// to it) and exhaustively confirms that the orthogonal complement of every
// subspace of dimension <= h contains at least one witness.
Lemma4Result verify_lemma4(const FieldRef& field, std::uint32_t ambient_dim, std::uint32_t h);

}  // namespace ncg
