#pragma once

#include <algorithm>
#include <bit>
#include <cassert>
#include <cstdint>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "syzygy/errors.hpp"
#include "syzygy/field.hpp"

namespace syz {

/// Sparse matrix with exact 64-bit integer entries, stored column-major.
/// Entries are added once (no duplicates) and columns are sorted by row
/// on finalize().  Immutable after that.
class SparseMatrix {
public:
  struct Triplet {
    std::uint32_t row;
    std::uint32_t col;
    std::int64_t value;
  };
  using Column = std::vector<std::pair<std::uint32_t, std::int64_t>>;

  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols)
      : n_rows_(rows), n_cols_(cols), cols_(cols) {}

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return n_cols_; }

  void add(std::size_t row, std::size_t col, std::int64_t value) {
    if (row >= n_rows_ || col >= n_cols_)
      throw integrity_error("sparse entry out of range");
    if (value == 0) return;
    cols_[col].emplace_back(static_cast<std::uint32_t>(row), value);
    finalized_ = false;
  }

  void finalize() {
    for (auto& c : cols_) {
      std::sort(c.begin(), c.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      for (std::size_t i = 1; i < c.size(); ++i)
        if (c[i].first == c[i - 1].first)
          throw integrity_error("duplicate sparse entry");
    }
    finalized_ = true;
  }

  const Column& col(std::size_t c) const {
    assert(finalized_);
    return cols_[c];
  }

  std::size_t nnz() const {
    std::size_t n = 0;
    for (const auto& c : cols_) n += c.size();
    return n;
  }

  bool is_zero() const { return nnz() == 0; }

  /// Canonical triplet list, column-major then row-sorted.
  std::vector<Triplet> triplets() const {
    assert(finalized_);
    std::vector<Triplet> t;
    t.reserve(nnz());
    for (std::uint32_t c = 0; c < cols_.size(); ++c)
      for (const auto& [r, v] : cols_[c]) t.push_back({r, c, v});
    return t;
  }

  bool operator==(const SparseMatrix& other) const {
    return n_rows_ == other.n_rows_ && n_cols_ == other.n_cols_ &&
           cols_ == other.cols_;
  }

private:
  std::size_t n_rows_ = 0, n_cols_ = 0;
  std::vector<Column> cols_;
  bool finalized_ = true;
};

/// product a*b over the integers (for composite-is-zero checks and the
/// representation/group-law tests; not a performance path)
inline SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.n_cols() != b.n_rows())
    throw config_error("multiply: inner dimensions disagree");
  SparseMatrix out(a.n_rows(), b.n_cols());
  std::vector<std::int64_t> acc(a.n_rows(), 0);
  std::vector<std::uint32_t> touched;
  for (std::size_t j = 0; j < b.n_cols(); ++j) {
    touched.clear();
    for (const auto& [k, bv] : b.col(j)) {
      for (const auto& [r, av] : a.col(k)) {
        if (acc[r] == 0 && av * bv != 0) touched.push_back(r);
        acc[r] += av * bv;
      }
    }
    std::sort(touched.begin(), touched.end());
    for (std::uint32_t r : touched) {
      if (acc[r] != 0) out.add(r, j, acc[r]);
      acc[r] = 0;
    }
  }
  out.finalize();
  return out;
}

#ifdef SYZ_ELIM_STATS
struct ElimStats {
  static inline unsigned long long inserts = 0;
  static inline unsigned long long reductions = 0;
  static inline unsigned long long touches = 0;
  static inline unsigned long long pivot_entries = 0;
  static inline unsigned long long pivot_count = 0;
  static inline unsigned long long uf_blocks = 0;
  static inline unsigned long long seeds = 0;
};
#endif

/// Incremental column echelon form over an exact field.
///
/// Columns are fed one at a time; each is reduced against the pivots seen
/// so far, processing rows in increasing order.  A column that survives
/// reduction becomes a new pivot (normalized to leading coefficient 1) at
/// its smallest remaining row.  Deterministic for a fixed insertion order.
/// With `track_combos` every pivot carries the combination of inserted
/// columns that produced it, so columns that reduce to zero yield exact
/// kernel vectors.
template <class Field>
class Eliminator {
public:
  using Elt = typename Field::Elt;
  using SparseVec = std::vector<std::pair<std::uint32_t, Elt>>;

  Eliminator(const Field& f, std::size_t n_rows, bool track_combos = false)
      : f_(f), track_(track_combos) {
    reset(n_rows);
  }

  void reset(std::size_t n_rows) {
    n_rows_ = n_rows;
    pivot_at_row_.assign(n_rows, -1);
    pivots_.clear();
    combos_.clear();
    scratch_.assign(n_rows, f_.zero());
    frontier_.assign((n_rows + 63) / 64, 0);
    summary_.assign((frontier_.size() + 63) / 64, 0);
    n_inserted_ = 0;
    last_combo_.clear();
  }

  std::size_t rank() const { return pivots_.size(); }
  std::size_t columns_inserted() const { return n_inserted_; }

  /// Adopts a column as a pivot without reduction.  The column must be
  /// sorted by row with a nonzero first entry whose row has no pivot yet;
  /// the caller asserts independence (columns with pairwise distinct
  /// leading rows are independent).  Not available with combo tracking.
  void seed_pivot(const SparseVec& column) {
#ifdef SYZ_ELIM_STATS
    ++ElimStats::seeds;
#endif
    assert(!track_);
    assert(!column.empty());
    const std::uint32_t lead = column.front().first;
    assert(pivot_at_row_[lead] < 0);
    SparseVec stored = column;
    Elt inv = f_.inv(stored.front().second);
    if (!(inv == f_.one()))
      for (auto& [r, v] : stored) v = f_.mul(v, inv);
    ++n_inserted_;
    pivot_at_row_[lead] = static_cast<std::int32_t>(pivots_.size());
    pivots_.push_back(std::move(stored));
  }

  bool has_pivot_at(std::uint32_t row) const { return pivot_at_row_[row] >= 0; }

  /// Returns true if the column was independent of the span so far.
  bool insert(const SparseVec& column) {
#ifdef SYZ_ELIM_STATS
    ++ElimStats::inserts;
#endif
    const std::uint32_t tag = static_cast<std::uint32_t>(n_inserted_++);
    std::uint32_t first = static_cast<std::uint32_t>(n_rows_);
    for (const auto& [r, v] : column) {
      assert(r < n_rows_);
      if (f_.is_zero(v)) continue;
      if (f_.is_zero(scratch_[r])) mark(r);
      scratch_[r] = f_.add(scratch_[r], v);
      first = std::min(first, r);
    }

    SparseVec combo;
    if (track_) combo.emplace_back(tag, f_.one());

    std::int64_t lead = -1;
    SparseVec reduced;
    // Rows are processed in increasing order; eliminations only introduce
    // rows above the pivot, so a monotone cursor over the bitmap frontier
    // visits every pending row exactly once.
    std::size_t cursor = first >> 6;
    for (;;) {
      std::int64_t rs = pop_next(cursor);
      if (rs < 0) break;
      std::uint32_t r = static_cast<std::uint32_t>(rs);
      if (f_.is_zero(scratch_[r])) continue;  // cancelled along the way
      std::int32_t p = pivot_at_row_[r];
      if (p < 0) {
        if (lead < 0) lead = r;
        reduced.emplace_back(r, scratch_[r]);
        scratch_[r] = f_.zero();
        continue;
      }
      // eliminate row r with pivot p (leading coefficient 1 at row r);
      // c == +-1 dominates in these complexes, so skip the multiply there
      Elt c = scratch_[r];
      scratch_[r] = f_.zero();
      const SparseVec& pc = pivots_[p];
#ifdef SYZ_ELIM_STATS
      ++ElimStats::reductions;
      ElimStats::touches += pc.size();
#endif
      if (c == f_.one()) {
        for (std::size_t i = 1; i < pc.size(); ++i) {  // entry 0 is the lead
          auto [rr, vv] = pc[i];
          if (f_.is_zero(scratch_[rr])) mark(rr);
          scratch_[rr] = f_.sub(scratch_[rr], vv);
        }
      } else if (f_.is_minus_one(c)) {
        for (std::size_t i = 1; i < pc.size(); ++i) {
          auto [rr, vv] = pc[i];
          if (f_.is_zero(scratch_[rr])) mark(rr);
          scratch_[rr] = f_.add(scratch_[rr], vv);
        }
      } else {
        for (std::size_t i = 1; i < pc.size(); ++i) {
          auto [rr, vv] = pc[i];
          if (f_.is_zero(scratch_[rr])) mark(rr);
          scratch_[rr] = f_.sub(scratch_[rr], f_.mul(c, vv));
        }
      }
      if (track_) axpy_combo(combo, c, combos_[p]);
    }

    if (lead < 0) {
      if (track_) last_combo_ = std::move(combo);
      return false;  // column reduced to zero
    }
    // normalize leading coefficient to 1
    Elt inv = f_.inv(reduced.front().second);
    for (auto& [r, v] : reduced) v = f_.mul(v, inv);
    if (track_) {
      for (auto& [t, v] : combo) v = f_.mul(v, inv);
      combos_.push_back(std::move(combo));
    }
#ifdef SYZ_ELIM_STATS
    ++ElimStats::pivot_count;
    ElimStats::pivot_entries += reduced.size();
#endif
    pivot_at_row_[lead] = static_cast<std::int32_t>(pivots_.size());
    pivots_.push_back(std::move(reduced));
    return true;
  }

  /// Combination (over inserted-column tags) that reduced to zero in the
  /// most recent insert() that returned false.  Sorted by tag.
  const SparseVec& last_kernel_combo() const { return last_combo_; }

private:
  void mark(std::uint32_t r) {
    frontier_[r >> 6] |= 1ull << (r & 63);
    summary_[r >> 12] |= 1ull << ((r >> 6) & 63);
  }

  // Pops the smallest pending row at or after word `cursor`, advancing the
  // cursor; -1 when the frontier is drained.
  std::int64_t pop_next(std::size_t& cursor) {
    std::size_t sw = cursor >> 6;
    while (sw < summary_.size()) {
      std::uint64_t sbits = summary_[sw];
      if ((sw << 6) < cursor) sbits &= ~0ull << (cursor & 63);
      if (sbits) {
        std::size_t w = (sw << 6) + static_cast<std::size_t>(std::countr_zero(sbits));
        std::uint64_t bits = frontier_[w];
        std::uint32_t r =
            static_cast<std::uint32_t>((w << 6) + std::countr_zero(bits));
        bits &= bits - 1;
        frontier_[w] = bits;
        if (bits == 0) summary_[sw] &= ~(1ull << (w & 63));
        cursor = w;
        return r;
      }
      ++sw;
      cursor = sw << 6;
    }
    return -1;
  }

  // combo -= c * other, keeping sorted-by-tag order
  void axpy_combo(SparseVec& combo, const Elt& c, const SparseVec& other) {
    SparseVec out;
    out.reserve(combo.size() + other.size());
    std::size_t i = 0, j = 0;
    while (i < combo.size() || j < other.size()) {
      if (j == other.size() ||
          (i < combo.size() && combo[i].first < other[j].first)) {
        out.push_back(combo[i++]);
      } else if (i == combo.size() || combo[i].first > other[j].first) {
        out.emplace_back(other[j].first, f_.neg(f_.mul(c, other[j].second)));
        ++j;
      } else {
        Elt v = f_.sub(combo[i].second, f_.mul(c, other[j].second));
        if (!f_.is_zero(v)) out.emplace_back(combo[i].first, v);
        ++i;
        ++j;
      }
    }
    combo = std::move(out);
  }

  Field f_;
  bool track_;
  std::size_t n_rows_ = 0;
  std::vector<std::int32_t> pivot_at_row_;
  std::vector<SparseVec> pivots_;
  std::vector<SparseVec> combos_;
  std::vector<Elt> scratch_;
  std::vector<std::uint64_t> frontier_;  // pending-row bitmap
  std::vector<std::uint64_t> summary_;   // one bit per frontier word
  std::size_t n_inserted_ = 0;
  SparseVec last_combo_;
};

namespace detail {

template <class Field>
std::size_t rank_over(const SparseMatrix& m, const Field& f) {
  Eliminator<Field> elim(f, m.n_rows());
  typename Eliminator<Field>::SparseVec col;
  for (std::size_t c = 0; c < m.n_cols(); ++c) {
    col.clear();
    for (const auto& [r, v] : m.col(c)) col.emplace_back(r, f.from_int(v));
    elim.insert(col);
  }
  return elim.rank();
}

}  // namespace detail

/// Rank of m over the field described by f.
inline std::size_t rank(const SparseMatrix& m, const FieldSpec& f) {
  f.validate();
  if (f.kind == FieldSpec::Kind::rationals)
    return detail::rank_over(m, RationalField{});
  return detail::rank_over(m, PrimeField{f.modulus});
}

/// dim ker = n_cols - rank.
inline std::size_t kernel_dim(const SparseMatrix& m, const FieldSpec& f) {
  return m.n_cols() - rank(m, f);
}

struct CertifiedRank {
  std::size_t value = 0;
  bool escalated = false;
};

/// Rank over two distinct primes; on disagreement escalate to exact
/// rational elimination.  For integer matrices this certifies the
/// characteristic-zero rank.
inline CertifiedRank rank_certified_ex(const SparseMatrix& m,
                                       std::uint64_t prime_a = kDefaultPrime,
                                       std::uint64_t prime_b = kSecondPrime) {
  std::size_t ra = rank(m, FieldSpec::prime(prime_a));
  std::size_t rb = rank(m, FieldSpec::prime(prime_b));
  if (ra == rb) return {ra, false};
  return {rank(m, FieldSpec::rationals()), true};
}

inline std::size_t rank_certified(const SparseMatrix& m,
                                  std::uint64_t prime_a = kDefaultPrime,
                                  std::uint64_t prime_b = kSecondPrime) {
  return rank_certified_ex(m, prime_a, prime_b).value;
}

/// Basis of the kernel of m, one sparse coefficient vector (over column
/// indices) per kernel dimension.
template <class Field>
std::vector<typename Eliminator<Field>::SparseVec> kernel_basis(
    const SparseMatrix& m, const Field& f) {
  Eliminator<Field> elim(f, m.n_rows(), /*track_combos=*/true);
  std::vector<typename Eliminator<Field>::SparseVec> basis;
  typename Eliminator<Field>::SparseVec col;
  for (std::size_t c = 0; c < m.n_cols(); ++c) {
    col.clear();
    for (const auto& [r, v] : m.col(c)) col.emplace_back(r, f.from_int(v));
    if (!elim.insert(col)) basis.push_back(elim.last_kernel_combo());
  }
  return basis;
}

}  // namespace syz
