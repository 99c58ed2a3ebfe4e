#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "syzygy/combinatorics.hpp"
#include "syzygy/errors.hpp"
#include "syzygy/lattice.hpp"

namespace syz {

/// Exponent vectors of the monomials of total degree `deg` in `nvars`
/// variables, lex-sorted.  Empty when deg < 0.
inline std::vector<Point> degree_monomials(int deg, int nvars) {
  std::vector<Point> out;
  if (deg < 0 || nvars <= 0) return out;
  Point cur(nvars, 0);
  // recursive enumeration; sort afterwards for the canonical order
  std::vector<std::pair<int, int>> stack;
  auto rec = [&](auto&& self, int var, int rem) -> void {
    if (var == nvars - 1) {
      cur[var] = rem;
      out.push_back(cur);
      return;
    }
    for (int e = 0; e <= rem; ++e) {
      cur[var] = e;
      self(self, var + 1, rem - e);
    }
  };
  rec(rec, 0, deg);
  std::sort(out.begin(), out.end());
  return out;
}

/// Graded section data of a pair (B, L) in monomial form: every graded
/// piece H^0(B + mL) has a lattice-point basis, one block per line-bundle
/// summand of B, and multiplication by a basis section of L is lattice
/// point addition.  Immutable after construction; basis lists are cached
/// lazily behind a lock and safe to share across threads.
class MonomialSystem {
public:
  struct ProjectiveParams {
    int n = 0;
    std::vector<int> b_degrees;
    int l_degree = 1;
  };

  static MonomialSystem projective(int n, std::vector<int> b_degrees,
                                   int l_degree, int closure_check_bound = 3) {
    if (n < 1) throw config_error("projective system needs n >= 1");
    if (l_degree < 1) throw config_error("l_degree must be >= 1");
    if (b_degrees.empty()) throw config_error("B needs at least one summand");
    MonomialSystem sys;
    sys.ambient_rank_ = static_cast<std::size_t>(n) + 1;
    sys.variety_dim_ = static_cast<std::size_t>(n);
    sys.l_points_ = degree_monomials(l_degree, n + 1);
    sys.proj_ = ProjectiveParams{n, std::move(b_degrees), l_degree};
    sys.description_ = sys.projective_description();
    sys.cache_ = std::make_shared<Cache>();
    sys.validate_closure(closure_check_bound);
    return sys;
  }

  static MonomialSystem polytope(std::vector<Point> l_points,
                                 std::vector<std::vector<Point>> b_summands,
                                 std::size_t variety_dim,
                                 int closure_check_bound = 3) {
    if (l_points.empty()) throw config_error("L needs a nonempty point set");
    if (b_summands.empty()) throw config_error("B needs at least one summand");
    MonomialSystem sys;
    sys.l_points_ = canonical_point_set(std::move(l_points));
    sys.ambient_rank_ = sys.l_points_.front().size();
    sys.variety_dim_ = variety_dim;
    for (auto& b : b_summands) {
      if (!b.empty() && b.front().size() != sys.ambient_rank_)
        throw config_error("B summand rank disagrees with L");
      sys.b_point_summands_.push_back(canonical_point_set(std::move(b)));
    }
    sys.description_ = sys.polytope_description();
    sys.cache_ = std::make_shared<Cache>();
    sys.validate_closure(closure_check_bound);
    return sys;
  }

  std::size_t ambient_rank() const { return ambient_rank_; }
  std::size_t variety_dim() const { return variety_dim_; }
  const std::vector<Point>& l_points() const { return l_points_; }
  std::size_t h0_of_l() const { return l_points_.size(); }
  std::size_t num_summands() const {
    return proj_ ? proj_->b_degrees.size() : b_point_summands_.size();
  }
  bool is_projective() const { return proj_.has_value(); }
  const std::optional<ProjectiveParams>& projective_params() const { return proj_; }
  const std::string& description() const { return description_; }

  /// Lex-sorted lattice basis of the m-th graded piece of summand i.
  const std::vector<Point>& basis(std::size_t summand, int m) const {
    if (summand >= num_summands())
      throw config_error("summand index out of range");
    std::scoped_lock lock(cache_->mu);
    return basis_locked(summand, m);
  }

  std::size_t h0(std::size_t summand, int m) const { return basis(summand, m).size(); }

  /// Total dimension of H^0(B + mL) across summands.
  std::size_t h0_total(int m) const {
    std::size_t t = 0;
    for (std::size_t s = 0; s < num_summands(); ++s) t += h0(s, m);
    return t;
  }

  /// Index of a point in basis(summand, m); -1 when absent.
  std::int64_t index_of(std::size_t summand, int m, const Point& pt) const {
    const auto& b = basis(summand, m);
    auto it = std::lower_bound(b.begin(), b.end(), pt);
    if (it == b.end() || *it != pt) return -1;
    return it - b.begin();
  }

  /// The system computing B^* tensor K_X with the same L; only available
  /// for projective-space instances.
  MonomialSystem dual_system() const {
    if (!proj_)
      throw unsupported_error("duality data only exists for projective systems");
    std::vector<int> dual_degrees;
    dual_degrees.reserve(proj_->b_degrees.size());
    for (int b : proj_->b_degrees) dual_degrees.push_back(-b - proj_->n - 1);
    return projective(proj_->n, std::move(dual_degrees), proj_->l_degree);
  }

  /// Checks the closure invariant basis(m) + L subset basis(m+1) for all
  /// summands and 0 <= m < m_max.
  void validate_closure(int m_max) const {
    for (std::size_t s = 0; s < num_summands(); ++s) {
      for (int m = 0; m < m_max; ++m) {
        for (const auto& x : basis(s, m)) {
          for (const auto& v : l_points_) {
            if (index_of(s, m + 1, point_add(x, v)) < 0)
              throw integrity_error(
                  "closure violated: " + point_to_string(x) + " + " +
                  point_to_string(v) + " not in basis(" + std::to_string(m + 1) +
                  ") of summand " + std::to_string(s));
          }
        }
      }
    }
  }

private:
  struct Cache {
    std::mutex mu;
    std::map<std::pair<std::uint32_t, int>, std::vector<Point>> bases;
  };

  // cache_->mu must be held
  const std::vector<Point>& basis_locked(std::size_t summand, int m) const {
    auto key = std::make_pair(static_cast<std::uint32_t>(summand), m);
    auto it = cache_->bases.find(key);
    if (it != cache_->bases.end()) return it->second;
    std::vector<Point> result;
    if (m >= 0) {
      if (proj_) {
        int deg = proj_->b_degrees[summand] + m * proj_->l_degree;
        result = degree_monomials(deg, proj_->n + 1);
      } else if (m == 0) {
        result = b_point_summands_[summand];
      } else {
        // iterated Minkowski sum B + m*L; associativity makes the
        // incremental form exact
        const auto& prev = basis_locked(summand, m - 1);
        if (!prev.empty()) result = minkowski_sum(prev, l_points_);
      }
    }
    return cache_->bases.emplace(key, std::move(result)).first->second;
  }

  std::string projective_description() const {
    std::string s = "P^" + std::to_string(proj_->n) + "; B=";
    for (std::size_t i = 0; i < proj_->b_degrees.size(); ++i) {
      if (i) s += "+";
      s += "O(" + std::to_string(proj_->b_degrees[i]) + ")";
    }
    s += "; L=O(" + std::to_string(proj_->l_degree) + ")";
    return s;
  }

  std::string polytope_description() const {
    return "polytope(rank " + std::to_string(ambient_rank_) + ", dim " +
           std::to_string(variety_dim_) + ", |L|=" + std::to_string(l_points_.size()) +
           ", B summands " + std::to_string(b_point_summands_.size()) + ")";
  }

  std::size_t ambient_rank_ = 0;
  std::size_t variety_dim_ = 0;
  std::vector<Point> l_points_;
  std::vector<std::vector<Point>> b_point_summands_;
  std::optional<ProjectiveParams> proj_;
  std::string description_;
  std::shared_ptr<Cache> cache_;
};

/// Convenience constructors mirroring the library vocabulary.
inline MonomialSystem projective_system(int n, std::vector<int> b_degrees,
                                        int l_degree) {
  return MonomialSystem::projective(n, std::move(b_degrees), l_degree);
}

inline MonomialSystem polytope_system(std::vector<Point> l_points,
                                      std::vector<std::vector<Point>> b_summands,
                                      std::size_t variety_dim) {
  return MonomialSystem::polytope(std::move(l_points), std::move(b_summands),
                                  variety_dim);
}

/// Line-bundle cohomology on projective space: h^i(P^n, O(a)).
struct CohomologyQuery {
  int proj_dim = 1;  // n of P^n
  int twist = 0;     // a
  int index = 0;     // i
};

inline std::uint64_t proj_cohomology(const CohomologyQuery& q) {
  if (q.index < 0 || q.index > q.proj_dim)
    throw config_error("cohomology index out of range");
  if (q.index == 0) return q.twist >= 0 ? binomial(q.twist + q.proj_dim, q.proj_dim) : 0;
  if (q.index == q.proj_dim)
    return q.twist <= -q.proj_dim - 1 ? binomial(-q.twist - 1, q.proj_dim) : 0;
  return 0;  // intermediate cohomology of line bundles on P^n vanishes
}

/// One-parameter family L_d = P + d*A over a fixed base pair (X, B).
/// Members are monomial systems with the same B and an L that grows with d.
class TwistFamily {
public:
  TwistFamily(MonomialSystem base, std::vector<Point> a_points,
              std::vector<Point> p_points)
      : base_(std::move(base)),
        a_points_(canonical_point_set(std::move(a_points))),
        p_points_(canonical_point_set(std::move(p_points))) {
    if (a_points_.empty() || p_points_.empty())
      throw config_error("twist family needs nonempty A and P point sets");
    if (a_points_.front().size() != base_.ambient_rank() ||
        p_points_.front().size() != base_.ambient_rank())
      throw config_error("twist family rank mismatch with base system");
  }

  /// Projective shorthand: A = O(a_degree), P = O(p_degree) on the base's P^n.
  static TwistFamily projective(const MonomialSystem& base, int a_degree,
                                int p_degree) {
    if (!base.is_projective())
      throw config_error("degree shorthand requires a projective base");
    int nvars = base.projective_params()->n + 1;
    return TwistFamily(base, degree_monomials(a_degree, nvars),
                       degree_monomials(p_degree, nvars));
  }

  const MonomialSystem& base() const { return base_; }

  MonomialSystem member(int d) const {
    if (d < 0) throw config_error("family parameter d must be >= 0");
    // Projective fast path: if A and P are full degree sets, the member is
    // again a projective system (and keeps its duality data).
    if (base_.is_projective()) {
      const auto& bp = *base_.projective_params();
      int a_deg = degree_sum(a_points_.front());
      int p_deg = degree_sum(p_points_.front());
      if (a_points_ == degree_monomials(a_deg, bp.n + 1) &&
          p_points_ == degree_monomials(p_deg, bp.n + 1)) {
        return MonomialSystem::projective(bp.n, bp.b_degrees,
                                          p_deg + d * a_deg);
      }
      for (int b : bp.b_degrees)
        if (b < 0)
          throw config_error(
              "twist family over a projective base with negative twists "
              "requires A and P to be full degree sets");
    }
    std::vector<Point> l = p_points_;
    for (int i = 0; i < d; ++i) l = minkowski_sum(l, a_points_);
    std::vector<std::vector<Point>> b;
    for (std::size_t s = 0; s < base_.num_summands(); ++s)
      b.push_back(base_.basis(s, 0));
    return MonomialSystem::polytope(std::move(l), std::move(b),
                                    base_.variety_dim());
  }

  std::string describe() const {
    return base_.description() + "; L_d = P + d*A (|A|=" +
           std::to_string(a_points_.size()) + ", |P|=" +
           std::to_string(p_points_.size()) + ")";
  }

private:
  static int degree_sum(const Point& p) {
    int s = 0;
    for (auto c : p) s += c;
    return s;
  }

  MonomialSystem base_;
  std::vector<Point> a_points_;
  std::vector<Point> p_points_;
};

}  // namespace syz
