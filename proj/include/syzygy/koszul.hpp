#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "syzygy/combinatorics.hpp"
#include "syzygy/errors.hpp"
#include "syzygy/field.hpp"
#include "syzygy/lattice.hpp"
#include "syzygy/parallel.hpp"
#include "syzygy/sections.hpp"
#include "syzygy/sparse.hpp"

namespace syz {

struct RankStats {
  std::atomic<std::uint64_t> certified_calls{0};
  std::atomic<std::uint64_t> escalations{0};
};

/// Rank under a field mode; certified mode counts escalations into stats.
inline std::size_t rank_with_mode(const SparseMatrix& m, const FieldMode& mode,
                                  RankStats* stats = nullptr) {
  if (mode.kind == FieldMode::Kind::single) return rank(m, mode.spec);
  CertifiedRank cr = rank_certified_ex(m, mode.prime_a, mode.prime_b);
  if (stats) {
    stats->certified_calls.fetch_add(1);
    if (cr.escalated) stats->escalations.fetch_add(1);
  }
  return cr.value;
}

/// Rank of a matrix whose columns are graded by a character function that
/// also grades the rows (entries never connect distinct characters).  The
/// matrix splits into independent blocks, one per character value.
inline std::size_t rank_blocked(const SparseMatrix& m,
                                const std::vector<Point>& col_chars,
                                const FieldMode& mode,
                                RankStats* stats = nullptr) {
  if (col_chars.size() != m.n_cols())
    throw config_error("rank_blocked: one character per column required");
  std::map<Point, std::vector<std::uint32_t>> blocks;
  for (std::uint32_t c = 0; c < m.n_cols(); ++c)
    blocks[col_chars[c]].push_back(c);
  std::size_t total = 0;
  std::unordered_map<std::uint32_t, std::uint32_t> row_local;
  for (const auto& [chr, cols] : blocks) {
    row_local.clear();
    std::size_t nnz = 0;
    for (std::uint32_t c : cols) {
      for (const auto& [r, v] : m.col(c)) {
        (void)v;
        row_local.emplace(r, static_cast<std::uint32_t>(row_local.size()));
        ++nnz;
      }
    }
    if (nnz == 0) continue;
    SparseMatrix block(row_local.size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (const auto& [r, v] : m.col(cols[j])) block.add(row_local.at(r), j, v);
    block.finalize();
    total += rank_with_mode(block, mode, stats);
  }
  return total;
}

struct KoszulOptions {
  FieldMode mode = FieldMode::single(FieldSpec::prime(kDefaultPrime));
  bool blocked = true;
  int threads = 1;
};

// ---------------------------------------------------------------------------
// Wedge-basis differentials.
//
// delta_{p,q} : H^0(B+qL) (x) wedge^p H^0(L)  ->  H^0(B+(q+1)L) (x) wedge^{p-1}
// sends s (x) e_{i_1}^...^e_{i_p} to
//   sum_k (-1)^{k-1} (s + e_{i_k}) (x) e_{i_1}^...(omit k)...^e_{i_p},
// where s + e means lattice-point addition into the codomain basis.
//
// Index layout on both sides: summand-major, then monomial (lex), then
// wedge subset (colex rank), i.e. index = offset(summand)
// + monomial_index * C(h0, wedge_size) + wedge_rank.
// ---------------------------------------------------------------------------

/// Number of columns of delta_{p,q} (dimension of the domain).
inline std::size_t koszul_term_dim(const MonomialSystem& sys, int p, int q) {
  if (p < 0 || q < 0) return 0;
  std::uint32_t h0 = static_cast<std::uint32_t>(sys.h0_of_l());
  std::uint64_t w = binomial(h0, p);
  if (w == 0) return 0;
  return sys.h0_total(q) * w;
}

inline SparseMatrix build_differential(const MonomialSystem& sys, int p, int q) {
  const std::uint32_t h0 = static_cast<std::uint32_t>(sys.h0_of_l());
  const std::size_t n_cols = koszul_term_dim(sys, p, q);
  const std::size_t n_rows = koszul_term_dim(sys, p - 1, q + 1);
  SparseMatrix d(n_rows, n_cols);
  if (n_cols == 0 || n_rows == 0 || p < 1) {
    d.finalize();
    return d;
  }
  const std::uint64_t w_dom = binomial(h0, p);
  const std::uint64_t w_cod = binomial(h0, p - 1);
  const auto& l_pts = sys.l_points();

  std::size_t col_offset = 0, row_offset = 0;
  for (std::size_t s_idx = 0; s_idx < sys.num_summands(); ++s_idx) {
    const auto& dom_basis = sys.basis(s_idx, q);
    const std::size_t cod_count = sys.h0(s_idx, q + 1);
    std::vector<std::uint32_t> subset = first_subset(static_cast<std::uint32_t>(p));
    if (!dom_basis.empty() && p <= static_cast<int>(h0)) {
      std::uint64_t wr = 0;
      do {
        std::vector<std::uint64_t> omit_ranks(p);
        for (int k = 0; k < p; ++k) {
          std::vector<std::uint32_t> omitted;
          omitted.reserve(p - 1);
          for (int i = 0; i < p; ++i)
            if (i != k) omitted.push_back(subset[i]);
          omit_ranks[k] = wedge_rank(omitted);
        }
        for (std::size_t m_idx = 0; m_idx < dom_basis.size(); ++m_idx) {
          std::size_t col = col_offset + m_idx * w_dom + wr;
          for (int k = 0; k < p; ++k) {
            Point target = point_add(dom_basis[m_idx], l_pts[subset[k]]);
            std::int64_t t_idx = sys.index_of(s_idx, q + 1, target);
            if (t_idx < 0)
              throw integrity_error(
                  "multiplication left the codomain basis at twist " +
                  std::to_string(q + 1) + ": " + point_to_string(target));
            std::size_t row = row_offset + static_cast<std::size_t>(t_idx) * w_cod +
                              omit_ranks[k];
            d.add(row, col, (k % 2 == 0) ? 1 : -1);
          }
        }
        ++wr;
      } while (next_subset(subset, h0));
    }
    col_offset += dom_basis.size() * w_dom;
    row_offset += cod_count * w_cod;
  }
  d.finalize();
  return d;
}

/// Character of every column of delta_{p,q}: summand, then the lattice sum
/// of the monomial and the wedge factors.  The differential preserves it.
inline std::vector<Point> differential_col_chars(const MonomialSystem& sys, int p,
                                                 int q) {
  std::vector<Point> chars;
  const std::uint32_t h0 = static_cast<std::uint32_t>(sys.h0_of_l());
  if (p < 0 || q < 0 || p > static_cast<int>(h0)) return chars;
  const auto& l_pts = sys.l_points();
  // wedge characters in colex order
  std::vector<Point> wedge_chars;
  std::vector<std::uint32_t> subset = first_subset(static_cast<std::uint32_t>(p));
  do {
    Point c(sys.ambient_rank(), 0);
    for (auto i : subset) c = point_add(c, l_pts[i]);
    wedge_chars.push_back(std::move(c));
  } while (next_subset(subset, h0));

  for (std::size_t s_idx = 0; s_idx < sys.num_summands(); ++s_idx) {
    for (const auto& mono : sys.basis(s_idx, q)) {
      for (const auto& wc : wedge_chars) {
        Point full = point_add(mono, wc);
        Point tagged;
        tagged.reserve(full.size() + 1);
        tagged.push_back(static_cast<std::int32_t>(s_idx));
        tagged.insert(tagged.end(), full.begin(), full.end());
        chars.push_back(std::move(tagged));
      }
    }
  }
  return chars;
}

/// Rank of delta_{p,q} under the given options.
inline std::size_t differential_rank(const MonomialSystem& sys, int p, int q,
                                     const KoszulOptions& opts,
                                     RankStats* stats = nullptr) {
  if (p < 0 || q < 0) return 0;
  SparseMatrix d = build_differential(sys, p, q);
  if (d.n_cols() == 0 || d.n_rows() == 0) return 0;
  if (opts.blocked)
    return rank_blocked(d, differential_col_chars(sys, p, q), opts.mode, stats);
  return rank_with_mode(d, opts.mode, stats);
}

struct KoszulCell {
  enum class Engine { koszul, resolution, equivariant };
  int p = 0;
  int q = 0;
  std::size_t dim = 0;
  Engine engine = Engine::koszul;
};

/// dim K_{p,q}(B, L): middle cohomology of the three-term wedge complex for
/// q >= 1, kernel of the first map for q = 0, zero for q < 0.
inline KoszulCell koszul_dim(const MonomialSystem& sys, int p, int q,
                             const KoszulOptions& opts = {},
                             RankStats* stats = nullptr) {
  KoszulCell cell;
  cell.p = p;
  cell.q = q;
  cell.engine = KoszulCell::Engine::koszul;
  if (q < 0 || p < 0) return cell;  // trivial without computation
  std::size_t dom = koszul_term_dim(sys, p, q);
  if (dom == 0) return cell;
  std::size_t ker = dom - differential_rank(sys, p, q, opts, stats);
  if (q == 0) {
    cell.dim = ker;
    return cell;
  }
  std::size_t im = differential_rank(sys, p + 1, q - 1, opts, stats);
  cell.dim = ker - im;
  return cell;
}

struct BettiTable {
  std::map<std::pair<int, int>, std::size_t> cells;  // (p, q) -> dim
  std::string system_description;
  std::string field_description;
  bool certified = false;
  int p_max = 0;
  int q_min = 0;
  int q_max = 0;

  std::size_t at(int p, int q) const {
    auto it = cells.find({p, q});
    return it == cells.end() ? 0 : it->second;
  }
};

/// All cells K_{p,q} for p <= p_max, q_min <= q <= q_max.  Cells are
/// independent; ranks of the shared differentials are computed once and in
/// parallel when opts.threads > 1.  Output is scheduling-independent.
inline BettiTable betti_table(const MonomialSystem& sys, int p_max, int q_min,
                              int q_max, const KoszulOptions& opts = {},
                              RankStats* stats = nullptr) {
  if (q_min > q_max) throw config_error("empty q range");
  if (p_max < 0) throw config_error("p_max must be >= 0");
  if (p_max > static_cast<int>(sys.h0_of_l()))
    throw config_error("p_max exceeds h0(L)");

  // ranks needed: delta_{p,q} for cells (kernel side) and delta_{p+1,q-1}
  // (image side)
  std::vector<std::pair<int, int>> jobs;
  for (int q = std::max(0, q_min - 1); q <= q_max; ++q)
    for (int p = 0; p <= p_max + 1; ++p) jobs.emplace_back(p, q);

  std::vector<std::size_t> ranks(jobs.size(), 0);
  parallel_for(jobs.size(), opts.threads, [&](std::size_t i) {
    ranks[i] = differential_rank(sys, jobs[i].first, jobs[i].second, opts, stats);
  });
  std::map<std::pair<int, int>, std::size_t> rank_of;
  for (std::size_t i = 0; i < jobs.size(); ++i) rank_of[jobs[i]] = ranks[i];

  BettiTable table;
  table.system_description = sys.description();
  table.field_description = opts.mode.describe();
  table.certified = opts.mode.kind == FieldMode::Kind::certified;
  table.p_max = p_max;
  table.q_min = q_min;
  table.q_max = q_max;
  for (int q = q_min; q <= q_max; ++q) {
    for (int p = 0; p <= p_max; ++p) {
      std::size_t dim = 0;
      if (q >= 0) {
        std::size_t dom = koszul_term_dim(sys, p, q);
        if (dom > 0) {
          std::size_t ker = dom - rank_of.at({p, q});
          dim = (q == 0) ? ker : ker - rank_of.at({p + 1, q - 1});
        }
      }
      table.cells[{p, q}] = dim;
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Duality check
// ---------------------------------------------------------------------------

struct DualityReport {
  int p = 0, q = 0;
  bool hypotheses_hold = false;
  std::vector<std::string> failed_hypotheses;
  int dual_p = 0, dual_q = 0;
  std::size_t dim = 0, dual_dim = 0;
  bool agree = false;
};

/// Verifies the vanishing hypotheses via the projective-space cohomology
/// oracle, then compares dim K_{p,q}(B,L) with
/// dim K_{r-n-p, n+1-q}(B^* (x) K_X, L), where r = h0(L) - 1 is the
/// dimension of the linear system |L|.  Base-point-freeness of L holds
/// automatically for O(l), l >= 1.
inline DualityReport check_duality(const MonomialSystem& sys, int p, int q,
                                   const KoszulOptions& opts = {},
                                   RankStats* stats = nullptr) {
  if (!sys.is_projective())
    throw unsupported_error("check_duality requires a projective-space instance");
  const auto& params = *sys.projective_params();
  const int n = params.n;
  DualityReport rep;
  rep.p = p;
  rep.q = q;
  rep.hypotheses_hold = true;
  for (int i = 1; i <= n - 1; ++i) {
    for (int b : params.b_degrees) {
      for (int shift : {q - i, q - i - 1}) {
        CohomologyQuery query{n, b + shift * params.l_degree, i};
        if (proj_cohomology(query) != 0) {
          rep.hypotheses_hold = false;
          rep.failed_hypotheses.push_back(
              "h^" + std::to_string(i) + "(O(" + std::to_string(query.twist) +
              ")) != 0");
        }
      }
    }
  }
  if (!rep.hypotheses_hold) return rep;

  rep.dual_p = static_cast<int>(sys.h0_of_l()) - 1 - n - p;
  rep.dual_q = n + 1 - q;
  rep.dim = koszul_dim(sys, p, q, opts, stats).dim;
  MonomialSystem dual = sys.dual_system();
  rep.dual_dim = koszul_dim(dual, rep.dual_p, rep.dual_q, opts, stats).dim;
  rep.agree = rep.dim == rep.dual_dim;
  return rep;
}

// ---------------------------------------------------------------------------
// Euler-characteristic identity along a strand
// ---------------------------------------------------------------------------

struct EulerReport {
  int n_total = 0;
  std::int64_t lhs = 0;  // alternating sum of term dimensions
  std::int64_t rhs = 0;  // alternating sum of cohomology dimensions
  bool agree = false;
};

/// Checks sum_m (-1)^m h0(B+mL) C(h0, n_total-m) = sum_m (-1)^m K_{n_total-m,m}.
inline EulerReport euler_check(const MonomialSystem& sys, int n_total,
                               const KoszulOptions& opts = {},
                               RankStats* stats = nullptr) {
  EulerReport rep;
  rep.n_total = n_total;
  std::uint32_t h0 = static_cast<std::uint32_t>(sys.h0_of_l());
  for (int m = 0; m <= n_total; ++m) {
    std::int64_t sign = (m % 2 == 0) ? 1 : -1;
    rep.lhs += sign *
               static_cast<std::int64_t>(sys.h0_total(m) * binomial(h0, n_total - m));
    rep.rhs += sign * static_cast<std::int64_t>(
                          koszul_dim(sys, n_total - m, m, opts, stats).dim);
  }
  rep.agree = rep.lhs == rep.rhs;
  return rep;
}

}  // namespace syz
