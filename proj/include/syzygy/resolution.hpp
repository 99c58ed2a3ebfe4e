#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "syzygy/combinatorics.hpp"
#include "syzygy/errors.hpp"
#include "syzygy/field.hpp"
#include "syzygy/lattice.hpp"
#include "syzygy/sections.hpp"
#include "syzygy/sparse.hpp"

namespace syz {

// ---------------------------------------------------------------------------
// Graded module slices
// ---------------------------------------------------------------------------

/// Graded pieces of M = (+)_m H^0(B+mL) together with the multiplication
/// maps S_1 (x) M_m -> M_{m+1}.  mult[m] has dims[m+1] rows and
/// h0(L)*dims[m] columns, columns variable-major: col = i*dims[m] + s for
/// the i-th basis section of L and the s-th basis element of M_m (summands
/// concatenated in order).
struct GradedModuleSlices {
  std::vector<std::size_t> dims;
  std::vector<SparseMatrix> mult;
};

inline GradedModuleSlices module_slices(const MonomialSystem& sys, int m_max) {
  if (m_max < 0) throw config_error("m_max must be >= 0");
  GradedModuleSlices out;
  out.dims.resize(m_max + 1);
  for (int m = 0; m <= m_max; ++m) out.dims[m] = sys.h0_total(m);
  const auto& l_pts = sys.l_points();
  for (int m = 0; m < m_max; ++m) {
    SparseMatrix mat(out.dims[m + 1], l_pts.size() * out.dims[m]);
    std::size_t col_base = 0, row_base = 0;
    // summand offsets within the concatenated bases
    std::vector<std::size_t> dom_off(sys.num_summands() + 1, 0);
    std::vector<std::size_t> cod_off(sys.num_summands() + 1, 0);
    for (std::size_t s = 0; s < sys.num_summands(); ++s) {
      dom_off[s + 1] = dom_off[s] + sys.h0(s, m);
      cod_off[s + 1] = cod_off[s] + sys.h0(s, m + 1);
    }
    (void)col_base;
    (void)row_base;
    for (std::size_t i = 0; i < l_pts.size(); ++i) {
      for (std::size_t s = 0; s < sys.num_summands(); ++s) {
        const auto& dom = sys.basis(s, m);
        for (std::size_t k = 0; k < dom.size(); ++k) {
          std::int64_t t = sys.index_of(s, m + 1, point_add(dom[k], l_pts[i]));
          if (t < 0)
            throw integrity_error("multiplication left the basis at twist " +
                                  std::to_string(m + 1));
          mat.add(cod_off[s] + static_cast<std::size_t>(t),
                  i * out.dims[m] + dom_off[s] + k, 1);
        }
      }
    }
    mat.finalize();
    out.mult.push_back(std::move(mat));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Minimal free resolution, degree by degree
// ---------------------------------------------------------------------------

/// Graded Betti numbers beta_{p,j} of M over S = Sym H^0(L), computed by a
/// degree-by-degree minimal resolution using only field linear algebra on
/// lattice-character blocks.  tor_dim(p, q) = beta_{p, p+q}.
struct ResolutionLedger {
  std::map<std::pair<int, int>, std::size_t> betti;  // nonzero entries only
  int p_max = 0;
  int degree_bound = 0;
  bool truncated = false;   // generators appeared at the degree bound
  bool complete = false;    // some step within p_max had no generators
  bool escalated = false;   // certified primes disagreed, rationals used
  std::string system_description;
  std::string field_description;

  std::size_t beta(int p, int j) const {
    auto it = betti.find({p, j});
    return it == betti.end() ? 0 : it->second;
  }
};

struct ResolutionOptions {
  FieldMode mode = FieldMode::single(FieldSpec::prime(kDefaultPrime));
  std::vector<std::uint32_t> variable_permutation;  // empty = identity
  // Drop rows indexed by the previous level's independent columns; ranks
  // are unchanged (the projection is injective on the kernel) and blocks
  // shrink to kernel size.  Off only for cross-checking in tests.
  bool project_rows = true;
};

namespace detail {

// Packed exponent vectors: `width` bits per variable, variable 0 in the top
// field.  Products are plain 64-bit additions.  Characters are encoded as
// (summand, biased 12-bit coordinates), so numeric order on codes equals
// lex order on (summand, point).
struct ResContext {
  const MonomialSystem* sys = nullptr;
  int v = 0;      // number of variables = h0(L)
  int bound = 0;  // internal degree bound
  int rank = 0;   // ambient lattice rank
  int width = 4;  // bits per packed exponent
  std::vector<std::uint32_t> perm;                     // variable -> L point
  std::vector<std::vector<std::uint64_t>> monos;       // [deg] packed, canonical order
  std::vector<std::vector<std::int32_t>> mono_chars;   // [deg] flat, stride = rank
  std::vector<std::unordered_map<std::uint64_t, std::uint32_t>> mono_id;

  static constexpr std::int32_t kBias = 2048;

  void init(const MonomialSystem& s, int degree_bound,
            std::vector<std::uint32_t> permutation) {
    sys = &s;
    v = static_cast<int>(s.h0_of_l());
    bound = degree_bound;
    rank = static_cast<int>(s.ambient_rank());
    if (rank > 4)
      throw unsupported_error("resolution oracle supports ambient rank <= 4");
    if (s.num_summands() > 255)
      throw unsupported_error("resolution oracle supports <= 255 summands");
    if (v <= 16 && bound <= 15) {
      width = 4;
    } else if (v <= 8 && bound <= 255) {
      width = 8;
    } else {
      throw unsupported_error(
          "resolution oracle supports h0(L) <= 16 with degree bound <= 15, "
          "or h0(L) <= 8 with degree bound <= 255");
    }
    if (permutation.empty()) {
      perm.resize(v);
      for (int i = 0; i < v; ++i) perm[i] = static_cast<std::uint32_t>(i);
    } else {
      if (permutation.size() != static_cast<std::size_t>(v))
        throw config_error("variable permutation size must equal h0(L)");
      std::vector<bool> seen(v, false);
      for (auto i : permutation) {
        if (i >= static_cast<std::uint32_t>(v) || seen[i])
          throw config_error("variable permutation is not a permutation");
        seen[i] = true;
      }
      perm = std::move(permutation);
    }
    monos.resize(bound + 1);
    mono_chars.resize(bound + 1);
    mono_id.resize(bound + 1);
    for (int d = 0; d <= bound; ++d) enumerate_degree(d);
  }

  std::uint64_t encode_char(std::uint32_t summand, const std::int32_t* c) const {
    std::uint64_t code = summand;
    for (int i = 0; i < rank; ++i) {
      std::int64_t shifted = static_cast<std::int64_t>(c[i]) + kBias;
      if (shifted < 0 || shifted > 4095)
        throw unsupported_error("character coordinate out of packed range");
      code = (code << 12) | static_cast<std::uint64_t>(shifted);
    }
    return code;
  }

  Point decode_char(std::uint64_t code) const {
    Point p(rank + 1);
    for (int i = rank - 1; i >= 0; --i) {
      p[i + 1] = static_cast<std::int32_t>(code & 0xFFF) - kBias;
      code >>= 12;
    }
    p[0] = static_cast<std::int32_t>(code);
    return p;
  }

private:
  void enumerate_degree(int d) {
    auto& list = monos[d];
    auto& chars = mono_chars[d];
    const auto& l_pts = sys->l_points();
    std::vector<std::int32_t> chr(rank, 0);
    std::uint64_t packed = 0;
    auto rec = [&](auto&& self, int var, int rem) -> void {
      if (var == v - 1) {
        std::uint64_t full = packed | static_cast<std::uint64_t>(rem);
        const Point& pt = l_pts[perm[var]];
        for (int i = 0; i < rank; ++i) chr[i] += rem * pt[i];
        list.push_back(full);
        chars.insert(chars.end(), chr.begin(), chr.end());
        for (int i = 0; i < rank; ++i) chr[i] -= rem * pt[i];
        return;
      }
      const Point& pt = l_pts[perm[var]];
      for (int e = 0; e <= rem; ++e) {
        std::uint64_t save = packed;
        packed |= static_cast<std::uint64_t>(e)
                  << (width * (v - 1 - var));
        self(self, var + 1, rem - e);
        packed = save;
        for (int i = 0; i < rank; ++i) chr[i] += pt[i];
      }
      for (int i = 0; i < rank; ++i) chr[i] -= (rem + 1) * pt[i];
    };
    rec(rec, 0, d);
    // canonical id order = ascending packed value, so that multiplying by a
    // fixed monomial is order-preserving on ids
    std::vector<std::uint32_t> order(list.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return list[a] < list[b]; });
    std::vector<std::uint64_t> sorted_list(list.size());
    std::vector<std::int32_t> sorted_chars(chars.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) {
      sorted_list[i] = list[order[i]];
      for (int k = 0; k < rank; ++k)
        sorted_chars[static_cast<std::size_t>(i) * rank + k] =
            chars[static_cast<std::size_t>(order[i]) * rank + k];
    }
    list = std::move(sorted_list);
    chars = std::move(sorted_chars);
    auto& ids = mono_id[d];
    ids.reserve(list.size() * 2);
    for (std::uint32_t i = 0; i < list.size(); ++i) ids.emplace(list[i], i);
  }
};

template <class Field>
class ResolutionEngine {
public:
  using Elt = typename Field::Elt;

  struct Gen {
    int degree = 0;
    Point chr;  // full character: [summand, coords...]
    struct Entry {
      std::uint32_t gen;   // generator of the previous level
      std::uint64_t mono;  // packed monomial
      Elt coeff;
    };
    std::vector<Entry> entries;  // empty at level 0
  };

  struct PairTable {
    std::vector<std::uint64_t> chars;  // ascending
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> blocks;
    // Parallel to blocks: marks the pairs whose columns were verified
    // linearly independent in the level's differential.  The next level
    // drops exactly these rows: coordinate projection along an
    // independent column set is injective on the kernel, so ranks are
    // unchanged while blocks shrink to kernel size.
    std::vector<std::vector<std::uint8_t>> indep;
    std::unordered_map<std::uint64_t, std::uint32_t> block_of;
    std::size_t n_pairs = 0;
  };

  struct Result {
    std::map<std::pair<int, int>, std::size_t> betti;
    bool truncated = false;
    bool complete = false;
  };

  ResolutionEngine(const ResContext& ctx, Field field, int p_max,
                   bool project_rows = true)
      : ctx_(ctx), f_(std::move(field)), p_max_(p_max), project_(project_rows) {}

  Result run() {
    Result res;
    levels_.assign(p_max_ + 1, {});
    tables_.assign(p_max_ + 1, {});
    diff_cache_.assign(p_max_ + 1, {});
    run_level_zero(res);
    std::vector<std::unordered_map<std::uint64_t, std::uint32_t>> kdim_prev;
    for (int p = 1; p <= p_max_; ++p) {
      if (levels_[p - 1].empty()) {
        res.complete = true;
        break;
      }
      std::vector<std::unordered_map<std::uint64_t, std::uint32_t>> kdim_cur(
          ctx_.bound + 1);
      bool found_any = false;
      int j_start = levels_[p - 1].front().degree;
      for (int j = j_start; j <= ctx_.bound; ++j) {
        process_degree(p, j, kdim_prev, kdim_cur, res, found_any);
      }
      kdim_prev = std::move(kdim_cur);
      if (p >= 2) tables_[p - 2].clear();  // keep two levels of pair tables
      if (!found_any) {
        res.complete = true;
        break;
      }
    }
    return res;
  }

private:
  using Column = std::vector<std::pair<std::uint32_t, Elt>>;

  // All pairs (generator, monomial) of the level's free module in internal
  // degree j, grouped by character.  Within a block, pairs are appended in
  // (gen, mono) ascending order.
  PairTable build_pairs(int level, int j, bool include_unit) const {
    PairTable t;
    const auto& gens = levels_[level];
    std::vector<std::int32_t> chr(ctx_.rank);
    for (std::uint32_t g = 0; g < gens.size(); ++g) {
      int du = j - gens[g].degree;
      if (du < 0 || (du == 0 && !include_unit)) continue;
      const auto& mchars = ctx_.mono_chars[du];
      const std::size_t count = ctx_.monos[du].size();
      const std::uint32_t summand = static_cast<std::uint32_t>(gens[g].chr[0]);
      for (std::uint32_t m = 0; m < count; ++m) {
        const std::int32_t* mc = mchars.data() + static_cast<std::size_t>(m) * ctx_.rank;
        for (int i = 0; i < ctx_.rank; ++i) chr[i] = gens[g].chr[i + 1] + mc[i];
        std::uint64_t code = ctx_.encode_char(summand, chr.data());
        auto [it, inserted] = t.block_of.emplace(
            code, static_cast<std::uint32_t>(t.blocks.size()));
        if (inserted) {
          t.chars.push_back(code);
          t.blocks.emplace_back();
        }
        t.blocks[it->second].emplace_back(g, m);
        ++t.n_pairs;
      }
    }
    sort_blocks(t);
    t.indep.resize(t.blocks.size());
    for (std::uint32_t b = 0; b < t.blocks.size(); ++b)
      t.indep[b].assign(t.blocks[b].size(), 0);
    return t;
  }

  static void sort_blocks(PairTable& t) {
    std::vector<std::uint32_t> order(t.chars.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return t.chars[a] < t.chars[b];
    });
    std::vector<std::uint64_t> chars(t.chars.size());
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> blocks(
        t.blocks.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) {
      chars[i] = t.chars[order[i]];
      blocks[i] = std::move(t.blocks[order[i]]);
      t.block_of[chars[i]] = i;
    }
    t.chars = std::move(chars);
    t.blocks = std::move(blocks);
  }

  // Appends, for every generator of `level` with degree exactly j, the unit
  // pair (gen, 1).  Called after a degree is fully processed so the table
  // becomes the row table of the next level.  A fresh generator is a new
  // pivot of the differential by construction, hence independent.
  void extend_with_units(PairTable& t, int level, int j) const {
    const auto& gens = levels_[level];
    for (std::uint32_t g = 0; g < gens.size(); ++g) {
      if (gens[g].degree != j) continue;
      std::uint64_t code = ctx_.encode_char(
          static_cast<std::uint32_t>(gens[g].chr[0]), gens[g].chr.data() + 1);
      auto it = t.block_of.find(code);
      std::uint32_t idx;
      if (it == t.block_of.end()) {
        // new character: insert keeping chars sorted
        auto pos = std::lower_bound(t.chars.begin(), t.chars.end(), code);
        idx = static_cast<std::uint32_t>(pos - t.chars.begin());
        t.chars.insert(pos, code);
        t.blocks.emplace(t.blocks.begin() + idx);
        t.indep.emplace(t.indep.begin() + idx);
        for (auto& [c, b] : t.block_of)
          if (b >= idx) ++b;
        t.block_of[code] = idx;
      } else {
        idx = it->second;
      }
      t.blocks[idx].emplace_back(g, 0);
      t.indep[idx].push_back(1);
      ++t.n_pairs;
    }
  }

  // True when every generator of the level is a two-entry +1/-1 vector
  // (always the case for the first syzygies of a monomial module).
  // Incrementally maintained as generators are discovered.
  bool difference_level_cache_(int p) {
    DiffCache& c = diff_cache_[p];
    const auto& gens = levels_[p];
    while (c.checked < gens.size()) {
      const Gen& g = gens[c.checked++];
      if (g.entries.size() != 2 || !(g.entries[0].coeff == f_.one()) ||
          !f_.is_minus_one(g.entries[1].coeff))
        c.all_diff = false;
    }
    return c.all_diff && !gens.empty();
  }

  // Union-find rank of a set of difference columns; stops at target.
  // Column indices that extended the spanning forest are recorded in
  // uf_marks_ (committed to the table by the caller on success).
  std::size_t difference_rank(
      int p, int j,
      const std::vector<std::pair<std::uint32_t, std::uint32_t>>& col_block,
      const std::vector<std::pair<std::uint32_t, std::uint32_t>>& row_block,
      std::size_t target) {
    uf_parent_.resize(row_block.size());
    for (std::uint32_t i = 0; i < row_block.size(); ++i) uf_parent_[i] = i;
    uf_marks_.clear();
    auto find = [&](std::uint32_t x) {
      while (uf_parent_[x] != x) {
        uf_parent_[x] = uf_parent_[uf_parent_[x]];
        x = uf_parent_[x];
      }
      return x;
    };
    auto local_of = [&](std::uint32_t gen, std::uint64_t mono, int deg) {
      std::uint32_t pid = ctx_.mono_id[deg].at(mono);
      auto key = std::make_pair(gen, pid);
      auto it = std::lower_bound(row_block.begin(), row_block.end(), key);
      if (it == row_block.end() || *it != key)
        throw integrity_error("resolution: difference entry left the block");
      return static_cast<std::uint32_t>(it - row_block.begin());
    };
    std::size_t rank = 0;
#ifdef SYZ_ELIM_STATS
    ++ElimStats::uf_blocks;
#endif
    for (std::uint32_t ci = 0; ci < col_block.size(); ++ci) {
      if (rank >= target) break;
      const auto& [g, m] = col_block[ci];
      const Gen& gen = levels_[p][g];
      std::uint64_t u = ctx_.monos[j - gen.degree][m];
      std::uint32_t a = local_of(gen.entries[0].gen, gen.entries[0].mono + u,
                                 j - levels_[p - 1][gen.entries[0].gen].degree);
      std::uint32_t b = local_of(gen.entries[1].gen, gen.entries[1].mono + u,
                                 j - levels_[p - 1][gen.entries[1].gen].degree);
      std::uint32_t ra = find(a), rb = find(b);
      if (ra == rb) continue;
      uf_parent_[std::max(ra, rb)] = std::min(ra, rb);
      uf_marks_.push_back(ci);
      ++rank;
    }
    return rank;
  }

  // Column of monomial * generator expressed in the local row indices of a
  // block of the previous level's pair table.
  void build_column(int level, const Gen& g, std::uint64_t u_packed, int j,
                    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& rows,
                    Column& out) const {
    out.clear();
    out.reserve(g.entries.size());
    const auto& prev = levels_[level - 1];
    for (const auto& e : g.entries) {
      std::uint64_t prod = e.mono + u_packed;
      int prod_deg = j - prev[e.gen].degree;
      std::uint32_t pid = ctx_.mono_id[prod_deg].at(prod);
      auto key = std::make_pair(e.gen, pid);
      auto it = std::lower_bound(rows.begin(), rows.end(), key);
      if (it == rows.end() || *it != key)
        throw integrity_error("resolution: product left the graded block");
      out.emplace_back(static_cast<std::uint32_t>(it - rows.begin()), e.coeff);
    }
  }

  void run_level_zero(Result& res) {
    for (int j = 0; j <= ctx_.bound; ++j) {
      PairTable t = build_pairs(0, j, /*include_unit=*/false);
      // every column of a block maps onto the block's single monomial of M
      // with coefficient 1, so the first one is an independence witness
      for (std::uint32_t b = 0; b < t.blocks.size(); ++b)
        if (!t.blocks[b].empty()) t.indep[b][0] = 1;
      const auto& sys = *ctx_.sys;
      std::size_t found = 0;
      for (std::size_t s = 0; s < sys.num_summands(); ++s) {
        for (const auto& pt : sys.basis(s, j)) {
          std::uint64_t code =
              ctx_.encode_char(static_cast<std::uint32_t>(s), pt.data());
          if (t.block_of.find(code) != t.block_of.end()) continue;
          Gen g;
          g.degree = j;
          g.chr.reserve(ctx_.rank + 1);
          g.chr.push_back(static_cast<std::int32_t>(s));
          g.chr.insert(g.chr.end(), pt.begin(), pt.end());
          levels_[0].push_back(std::move(g));
          ++found;
        }
      }
      if (found > 0) {
        res.betti[{0, j}] = found;
        if (j == ctx_.bound) res.truncated = true;
      }
      extend_with_units(t, 0, j);
      tables_[0][j] = std::move(t);
    }
  }

  void process_degree(
      int p, int j,
      const std::vector<std::unordered_map<std::uint64_t, std::uint32_t>>& kdim_prev,
      std::vector<std::unordered_map<std::uint64_t, std::uint32_t>>& kdim_cur,
      Result& res, bool& found_any) {
    auto row_it = tables_[p - 1].find(j);
    if (row_it == tables_[p - 1].end())
      throw integrity_error("resolution: missing row table");
    const PairTable& rows = row_it->second;
    PairTable cols = build_pairs(p, j, /*include_unit=*/false);

    Eliminator<Field> image(f_, 0);
    Column col, pcol;
    std::size_t new_gens_at_j = 0;

    for (std::uint32_t bi = 0; bi < rows.chars.size(); ++bi) {
      const std::uint64_t code = rows.chars[bi];
      const auto& row_block = rows.blocks[bi];
      std::size_t kprev = 0;
      if (p == 1) {
        kprev = row_block.empty() ? 0 : 1;  // rank of the map onto M
      } else {
        auto it = kdim_prev[j].find(code);
        if (it != kdim_prev[j].end()) kprev = it->second;
      }
      if (kprev > row_block.size())
        throw integrity_error("resolution: kernel bookkeeping out of range");
      const std::size_t target = row_block.size() - kprev;  // dim K_p at (j, chr)
      if (target > 0) kdim_cur[j][code] = static_cast<std::uint32_t>(target);
      if (target == 0) continue;

      auto cit = cols.block_of.find(code);
      if (cit != cols.block_of.end() && difference_level_cache_(p)) {
        // Every level-1 generator is a two-entry sign difference, so its
        // shifts are graph edges on the block rows: the image rank is
        // vertices-minus-components, found by union-find.  On a deficit
        // the block is redone generically to extract the generators.
        std::size_t r =
            difference_rank(p, j, cols.blocks[cit->second], row_block, target);
        if (r == target) {
          auto& flags = cols.indep[cit->second];
          for (std::uint32_t ci : uf_marks_) flags[ci] = 1;
          continue;  // block verified without elimination
        }
      }

      // Rows marked independent at the previous level are dropped: the
      // projection along an independent column set of the previous
      // differential is injective on its kernel, where all our columns
      // live, so ranks are preserved while the block shrinks to kernel
      // size.
      proj_.assign(row_block.size(), -1);
      std::uint32_t kept = 0;
      const auto& row_indep = rows.indep[bi];
      for (std::uint32_t r = 0; r < row_block.size(); ++r)
        if (!project_ || !row_indep[r]) proj_[r] = static_cast<std::int32_t>(kept++);
      if (project_ && kept != target)
        throw integrity_error("resolution: projected block size mismatch");

      image.reset(kept);
      if (cit != cols.block_of.end()) {
        const auto& col_block = cols.blocks[cit->second];
        auto& col_indep = cols.indep[cit->second];
        for (std::uint32_t ci = 0; ci < col_block.size(); ++ci) {
          if (image.rank() >= target) break;  // columns lie in the kernel
          const auto& [g, m] = col_block[ci];
          build_column(p, levels_[p][g], ctx_.monos[j - levels_[p][g].degree][m], j,
                       row_block, col);
          project_column(col, pcol);
          if (pcol.empty())
            throw integrity_error("resolution: kernel column vanished under projection");
          // a column whose leading row carries no pivot is independent of
          // every pivot (all leading rows stay pairwise distinct)
          if (!image.has_pivot_at(pcol.front().first)) {
            image.seed_pivot(pcol);
            col_indep[ci] = 1;
          } else if (image.insert(pcol)) {
            col_indep[ci] = 1;
          }
        }
      }
      if (image.rank() > target)
        throw integrity_error("resolution: image exceeded kernel dimension");
      std::size_t deficit = target - image.rank();
      if (deficit == 0) continue;

      extract_generators(p, j, code, row_block, image, deficit);
      new_gens_at_j += deficit;
      found_any = true;
    }

    if (new_gens_at_j > 0) {
      res.betti[{p, j}] = new_gens_at_j;
      if (j == ctx_.bound) res.truncated = true;
    }
    extend_with_units(cols, p, j);
    tables_[p][j] = std::move(cols);
  }

  // Extract `deficit` minimal generators at (degree j, character code):
  // kernel vectors of the previous differential's block that are not in the
  // span of the shifted generators found so far.
  void extract_generators(
      int p, int j, std::uint64_t code,
      const std::vector<std::pair<std::uint32_t, std::uint32_t>>& row_block,
      Eliminator<Field>& image, std::size_t deficit) {
    std::size_t rows2_size = 0;
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>* rows2 = nullptr;
    if (p >= 2) {
      auto tab_it = tables_[p - 2].find(j);
      if (tab_it == tables_[p - 2].end())
        throw integrity_error("resolution: missing extraction table");
      auto bit = tab_it->second.block_of.find(code);
      if (bit == tab_it->second.block_of.end())
        throw integrity_error("resolution: extraction block has no image rows");
      rows2 = &tab_it->second.blocks[bit->second];
      rows2_size = rows2->size();
    } else {
      rows2_size = 1;  // the single monomial of M in this character
    }

    Eliminator<Field> ker(f_, rows2_size, /*track_combos=*/true);
    Column col, pcombo;
    std::size_t found = 0;
    Point chr = ctx_.decode_char(code);
    for (std::uint32_t t = 0; t < row_block.size() && found < deficit; ++t) {
      const auto& [g, m] = row_block[t];
      if (p == 1) {
        col.assign(1, {0u, f_.one()});
      } else {
        int du = j - levels_[p - 1][g].degree;
        build_column(p - 1, levels_[p - 1][g], ctx_.monos[du][m], j, *rows2, col);
      }
      if (ker.insert(col)) continue;
      // kernel combination over row_block local indices; the image
      // eliminator lives in projected coordinates
      const auto& combo = ker.last_kernel_combo();
      project_column(combo, pcombo);
      if (pcombo.empty())
        throw integrity_error("resolution: kernel combo vanished under projection");
      if (!image.insert(pcombo)) continue;
      // store the full-coordinate kernel vector, scaled to leading
      // coefficient 1; entries stay sorted in row order
      Elt inv = f_.inv(combo.front().second);
      Gen gen;
      gen.degree = j;
      gen.chr = chr;
      gen.entries.reserve(combo.size());
      for (const auto& [local, coeff] : combo) {
        const auto& [pg, pm] = row_block[local];
        gen.entries.push_back({pg, ctx_.monos[j - levels_[p - 1][pg].degree][pm],
                               f_.mul(coeff, inv)});
      }
      levels_[p].push_back(std::move(gen));
      ++found;
    }
    if (found != deficit)
      throw integrity_error("resolution: generator extraction fell short");
  }

  // Drops the rows removed by the current block projection and renumbers
  // the rest; monotone, so sortedness is preserved.
  void project_column(const Column& in, Column& out) const {
    out.clear();
    for (const auto& [r, v] : in) {
      std::int32_t pr = proj_[r];
      if (pr >= 0) out.emplace_back(static_cast<std::uint32_t>(pr), v);
    }
  }

  const ResContext& ctx_;
  Field f_;
  int p_max_;
  bool project_;
  std::vector<std::vector<Gen>> levels_;
  std::vector<std::unordered_map<int, PairTable>> tables_;
  // reusable block-scratch
  std::vector<std::int32_t> proj_;  // full local row -> projected row or -1
  std::vector<std::uint32_t> uf_parent_;
  std::vector<std::uint32_t> uf_marks_;
  struct DiffCache {
    std::size_t checked = 0;
    bool all_diff = true;
  };
  std::vector<DiffCache> diff_cache_;
};

}  // namespace detail

/// Runs the degree-by-degree minimal resolution of M up to homological
/// index p_max, scanning internal degrees up to degree_bound.  The bound
/// must be at least p_max + variety_dim + 2 so that every beta_{p, p+q}
/// with q <= variety_dim + 1 is within reach; smaller bounds are rejected
/// loudly rather than silently truncated.
inline ResolutionLedger minimal_resolution(const MonomialSystem& sys, int p_max,
                                           int degree_bound,
                                           const ResolutionOptions& opts = {}) {
  if (p_max < 0) throw config_error("p_max must be >= 0");
  int required = p_max + static_cast<int>(sys.variety_dim()) + 2;
  if (degree_bound < required)
    throw truncation_error("degree_bound " + std::to_string(degree_bound) +
                           " too small; need at least p_max + dim X + 2 = " +
                           std::to_string(required));

  detail::ResContext ctx;
  ctx.init(sys, degree_bound, opts.variable_permutation);

  ResolutionLedger ledger;
  ledger.p_max = p_max;
  ledger.degree_bound = degree_bound;
  ledger.system_description = sys.description();
  ledger.field_description = opts.mode.describe();

  auto run_prime = [&](std::uint64_t p) {
    detail::ResolutionEngine<PrimeField> eng(ctx, PrimeField{p}, p_max, opts.project_rows);
    return eng.run();
  };

  if (opts.mode.kind == FieldMode::Kind::single) {
    if (opts.mode.spec.kind == FieldSpec::Kind::rationals) {
      detail::ResolutionEngine<RationalField> eng(ctx, RationalField{}, p_max, opts.project_rows);
      auto r = eng.run();
      ledger.betti = std::move(r.betti);
      ledger.truncated = r.truncated;
      ledger.complete = r.complete;
    } else {
      auto r = run_prime(opts.mode.spec.modulus);
      ledger.betti = std::move(r.betti);
      ledger.truncated = r.truncated;
      ledger.complete = r.complete;
    }
    return ledger;
  }

  auto ra = run_prime(opts.mode.prime_a);
  auto rb = run_prime(opts.mode.prime_b);
  if (ra.betti == rb.betti) {
    ledger.betti = std::move(ra.betti);
    ledger.truncated = ra.truncated;
    ledger.complete = ra.complete;
    return ledger;
  }
  detail::ResolutionEngine<RationalField> eng(ctx, RationalField{}, p_max, opts.project_rows);
  auto rq = eng.run();
  ledger.betti = std::move(rq.betti);
  ledger.truncated = rq.truncated;
  ledger.complete = rq.complete;
  ledger.escalated = true;
  return ledger;
}

/// beta_{p, p+q}; exact zero for q < 0, error outside the computed window.
inline std::size_t tor_dim(const ResolutionLedger& ledger, int p, int q) {
  if (p < 0) return 0;
  int j = p + q;
  if (j < 0) return 0;
  if (p > ledger.p_max)
    throw truncation_error("tor_dim: p exceeds computed p_max; recompute with larger p_max");
  if (j > ledger.degree_bound)
    throw truncation_error(
        "tor_dim: internal degree " + std::to_string(j) +
        " exceeds degree_bound; recompute with a larger degree bound");
  return ledger.beta(p, j);
}

struct HilbertCheck {
  bool consistent = true;
  int first_bad_degree = -1;
};

/// Alternating sums of the resolution reproduce the Hilbert function:
/// dim M_m = sum_p (-1)^p sum_j beta_{p,j} * dim S_{m-j}.  Meaningful when
/// the ledger is complete.
inline HilbertCheck hilbert_consistency(const ResolutionLedger& ledger,
                                        const MonomialSystem& sys, int m_max) {
  HilbertCheck out;
  std::int64_t v = static_cast<std::int64_t>(sys.h0_of_l());
  for (int m = 0; m <= m_max; ++m) {
    std::int64_t acc = 0;
    for (const auto& [pj, count] : ledger.betti) {
      auto [p, j] = pj;
      std::int64_t s_dim =
          static_cast<std::int64_t>(binomial(v - 1 + m - j, v - 1));
      acc += (p % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(count) * s_dim;
    }
    if (acc != static_cast<std::int64_t>(sys.h0_total(m))) {
      out.consistent = false;
      out.first_bad_degree = m;
      return out;
    }
  }
  return out;
}

}  // namespace syz
