#include "ncgossip/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ncg {

Felem inner_product(const Field& f, std::span<const Felem> a, std::span<const Felem> b) {
  require(a.size() == b.size(), Err::DimensionMismatch, "inner product length mismatch");
  Felem acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc = f.add(acc, f.mul(a[i], b[i]));
  return acc;
}

void axpy(const Field& f, Felem c, std::span<const Felem> x, std::span<Felem> y) {
  if (c == 0) return;
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = f.add(y[i], f.mul(c, x[i]));
}

RowSpace::RowSpace(FieldRef field, std::uint32_t dim, std::uint32_t aug)
    : field_(std::move(field)), dim_(dim), aug_(aug) {
  require(field_ != nullptr, Err::InvalidArgument, "null field");
}

bool RowSpace::insert(std::span<const Felem> v) {
  require(v.size() == dim_, Err::DimensionMismatch,
          "insert: expected length " + std::to_string(dim_) + ", got " + std::to_string(v.size()));
  FVec row(dim_ + aug_, 0);
  std::copy(v.begin(), v.end(), row.begin());
  return insert_row(row).rank_increased;
}

RowSpace::InsertOutcome RowSpace::insert_row(std::span<const Felem> in) {
  require(in.size() == dim_ + aug_, Err::DimensionMismatch,
          "insert: expected length " + std::to_string(dim_ + aug_) + ", got " + std::to_string(in.size()));
  const Field& f = *field_;
  FVec row(in.begin(), in.end());

  // reduce against existing pivots
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    Felem c = row[pivots_[r]];
    if (c != 0) axpy(f, f.neg(c), rows_[r], row);
  }

  std::uint32_t pivot = dim_;
  for (std::uint32_t j = 0; j < dim_; ++j) {
    if (row[j] != 0) {
      pivot = j;
      break;
    }
  }
  if (pivot == dim_) {
    InsertOutcome out;
    out.rank_increased = false;
    out.aug_residual = std::any_of(row.begin() + dim_, row.end(), [](Felem x) { return x != 0; });
    return out;
  }

  // normalize and clear the new pivot column in the existing rows
  Felem scale = f.inv(row[pivot]);
  for (auto& x : row) x = f.mul(scale, x);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    Felem c = rows_[r][pivot];
    if (c != 0) axpy(f, f.neg(c), row, rows_[r]);
  }

  auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), pivot) - pivots_.begin();
  pivots_.insert(pivots_.begin() + pos, pivot);
  rows_.insert(rows_.begin() + pos, std::move(row));
  return InsertOutcome{true, false};
}

bool RowSpace::knows(std::span<const Felem> mu) const {
  require(mu.size() == dim_, Err::DimensionMismatch, "knows: length mismatch");
  const Field& f = *field_;
  for (const auto& r : rows_) {
    if (inner_product(f, std::span<const Felem>(r.data(), dim_), mu) != 0) return true;
  }
  return false;
}

bool RowSpace::contains(std::span<const Felem> v) const {
  require(v.size() == dim_, Err::DimensionMismatch, "contains: length mismatch");
  const Field& f = *field_;
  FVec row(v.begin(), v.end());
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    Felem c = row[pivots_[r]];
    if (c != 0) axpy(f, f.neg(c), std::span<const Felem>(rows_[r].data(), dim_), row);
  }
  return std::all_of(row.begin(), row.end(), [](Felem x) { return x == 0; });
}

RowSpace RowSpace::orthogonal_complement() const {
  require(aug_ == 0, Err::InvalidArgument, "complement of an augmented space");
  const Field& f = *field_;
  RowSpace out(field_, dim_);
  std::vector<bool> is_pivot(dim_, false);
  for (auto p : pivots_) is_pivot[p] = true;
  FVec v(dim_, 0);
  for (std::uint32_t free = 0; free < dim_; ++free) {
    if (is_pivot[free]) continue;
    std::fill(v.begin(), v.end(), 0);
    v[free] = 1;
    for (std::size_t r = 0; r < rows_.size(); ++r) v[pivots_[r]] = f.neg(rows_[r][free]);
    out.insert(v);
  }
  return out;
}

bool RowSpace::same_space(const RowSpace& other) const {
  // RREF is canonical, so spaces are equal iff bases are identical
  return dim_ == other.dim_ && rows_ == other.rows_;
}

namespace {

void enumerate_pivot_sets(std::uint32_t dim, std::uint32_t r, std::uint32_t start,
                          std::vector<std::uint32_t>& current,
                          const std::function<void(const std::vector<std::uint32_t>&)>& fn) {
  if (current.size() == r) {
    fn(current);
    return;
  }
  for (std::uint32_t c = start; c < dim; ++c) {
    current.push_back(c);
    enumerate_pivot_sets(dim, r, c + 1, current, fn);
    current.pop_back();
  }
}

}  // namespace

void for_each_subspace(const FieldRef& field, std::uint32_t dim, std::uint32_t max_dim,
                       const std::function<void(const std::vector<FVec>&)>& fn) {
  const std::uint32_t q = field->order();
  std::vector<FVec> basis;
  fn(basis);  // zero subspace
  for (std::uint32_t r = 1; r <= std::min(max_dim, dim); ++r) {
    std::vector<std::uint32_t> pivots;
    enumerate_pivot_sets(dim, r, 0, pivots, [&](const std::vector<std::uint32_t>& piv) {
      // free positions: to the right of each row's pivot, excluding pivot columns
      std::vector<bool> is_pivot(dim, false);
      for (auto p : piv) is_pivot[p] = true;
      std::vector<std::pair<std::uint32_t, std::uint32_t>> free_pos;
      for (std::uint32_t i = 0; i < r; ++i)
        for (std::uint32_t c = piv[i] + 1; c < dim; ++c)
          if (!is_pivot[c]) free_pos.emplace_back(i, c);

      std::vector<FVec> rows(r, FVec(dim, 0));
      for (std::uint32_t i = 0; i < r; ++i) rows[i][piv[i]] = 1;
      std::vector<Felem> odo(free_pos.size(), 0);
      for (;;) {
        for (std::size_t k = 0; k < free_pos.size(); ++k) rows[free_pos[k].first][free_pos[k].second] = odo[k];
        fn(rows);
        std::size_t k = 0;
        while (k < odo.size()) {
          if (++odo[k] < q) break;
          odo[k] = 0;
          ++k;
        }
        if (k == odo.size()) break;
        if (odo.empty()) break;
      }
    });
  }
}

Lemma4Result verify_lemma4(const FieldRef& field, std::uint32_t ambient_dim, std::uint32_t h) {
  require(h < ambient_dim, Err::InvalidArgument, "requires h < ambient dimension");
  const std::uint32_t q = field->order();
  double candidates_bits = static_cast<double>(h) * ambient_dim * std::log2(static_cast<double>(q));
  require(candidates_bits <= 24.0, Err::TooLarge, "subspace enumeration guard exceeded (2^24)");

  Lemma4Result result;
  // all q^h vectors supported on the first h coordinates, then one unit
  // vector orthogonal to that subspace
  std::uint64_t span_size = 1;
  for (std::uint32_t i = 0; i < h; ++i) span_size *= q;
  for (std::uint64_t idx = 0; idx < span_size; ++idx) {
    FVec v(ambient_dim, 0);
    std::uint64_t rest = idx;
    for (std::uint32_t i = 0; i < h; ++i) {
      v[i] = static_cast<Felem>(rest % q);
      rest /= q;
    }
    result.witnesses.push_back(std::move(v));
  }
  FVec extra(ambient_dim, 0);
  extra[h] = 1;
  result.witnesses.push_back(extra);

  const Field& f = *field;
  bool ok = true;
  std::uint64_t checked = 0;
  for_each_subspace(field, ambient_dim, h, [&](const std::vector<FVec>& basis) {
    ++checked;
    if (!ok) return;
    bool found = false;
    for (const auto& w : result.witnesses) {
      bool in_perp = true;
      for (const auto& b : basis) {
        if (inner_product(f, b, w) != 0) {
          in_perp = false;
          break;
        }
      }
      if (in_perp) {
        found = true;
        break;
      }
    }
    if (!found) ok = false;
  });
  result.verified = ok;
  result.subspaces_checked = checked;
  return result;
}

}  // namespace ncg
