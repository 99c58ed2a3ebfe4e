#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "syzygy/errors.hpp"
#include "syzygy/field.hpp"
#include "syzygy/koszul.hpp"
#include "syzygy/sections.hpp"

namespace syz {

/// Samples of d -> dim K_{p,q}(B, P + dA), ascending in d.
struct DSweep {
  std::string family;
  int p = 0;
  int q = 0;
  std::vector<std::pair<int, std::size_t>> samples;
};

/// Sweeps the family with the Koszul engine.  Defaults to two-prime
/// certified ranks so sampled dimensions are characteristic-zero values.
inline DSweep sweep(const TwistFamily& family, int p, int q, int d_from, int d_to,
                    const KoszulOptions& opts = {.mode = FieldMode::certified()},
                    RankStats* stats = nullptr) {
  if (d_from > d_to) throw config_error("sweep needs d_from <= d_to");
  DSweep out;
  out.family = family.describe();
  out.p = p;
  out.q = q;
  for (int d = d_from; d <= d_to; ++d) {
    MonomialSystem member = family.member(d);
    out.samples.emplace_back(d, koszul_dim(member, p, q, opts, stats).dim);
  }
  return out;
}

/// Forward-difference rows: rows[0] is the sampled sequence, rows[k] its
/// k-th differences.  stabilized_order is the least k >= 1 whose row is
/// identically zero with at least two entries of evidence; a single zero
/// (or none) is an insufficient tail.
struct DifferenceTable {
  std::vector<std::vector<std::int64_t>> rows;
  std::optional<int> stabilized_order;
};

inline DifferenceTable finite_differences(const DSweep& s) {
  if (s.samples.size() < 2)
    throw config_error("finite differences need at least 2 samples");
  for (std::size_t i = 1; i < s.samples.size(); ++i)
    if (s.samples[i].first != s.samples[i - 1].first + 1)
      throw config_error("finite differences need consecutive d values");
  DifferenceTable t;
  std::vector<std::int64_t> row;
  row.reserve(s.samples.size());
  for (const auto& [d, dim] : s.samples) {
    (void)d;
    row.push_back(static_cast<std::int64_t>(dim));
  }
  t.rows.push_back(row);
  int k = 0;
  while (t.rows.back().size() > 1) {
    const auto& prev = t.rows.back();
    std::vector<std::int64_t> next(prev.size() - 1);
    for (std::size_t i = 0; i + 1 < prev.size(); ++i) next[i] = prev[i + 1] - prev[i];
    t.rows.push_back(std::move(next));
    ++k;
    const auto& r = t.rows.back();
    if (!t.stabilized_order && r.size() >= 2 &&
        std::all_of(r.begin(), r.end(), [](std::int64_t v) { return v == 0; }))
      t.stabilized_order = k;
  }
  return t;
}

/// Exact interpolation result.  coefficients[k] multiplies d^k; the fitted
/// polynomial reproduces every sample with d >= stabilization_d0 exactly.
struct PolyFit {
  int degree = 0;
  std::vector<Rational> coefficients;
  int stabilization_d0 = 0;
  bool validated = false;
  std::optional<int> first_failing_d;  // earliest holdout sample that differs
};

namespace detail {

inline Rational eval_poly(const std::vector<Rational>& coeffs, int d) {
  Rational acc = 0;
  Rational x = 1;
  for (const auto& c : coeffs) {
    acc += c * x;
    x *= d;
  }
  return acc;
}

// Newton interpolation through (d_i, y_i), expanded into monomial
// coefficients; exact rational arithmetic throughout.
inline std::vector<Rational> interpolate(const std::vector<std::pair<int, std::size_t>>& pts) {
  const std::size_t n = pts.size();
  std::vector<Rational> divided(n);
  for (std::size_t i = 0; i < n; ++i) divided[i] = Rational(static_cast<std::int64_t>(pts[i].second));
  // divided differences in place: divided[k] = f[x_0..x_k]
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = n - 1; i >= level; --i) {
      divided[i] = (divided[i] - divided[i - 1]) /
                   Rational(pts[i].first - pts[i - level].first);
      if (i == level) break;
    }
  // expand sum_k divided[k] * prod_{j<k} (x - x_j)
  std::vector<Rational> coeffs{Rational(0)};
  std::vector<Rational> basis{Rational(1)};
  for (std::size_t k = 0; k < n; ++k) {
    if (coeffs.size() < basis.size()) coeffs.resize(basis.size(), Rational(0));
    for (std::size_t i = 0; i < basis.size(); ++i) coeffs[i] += divided[k] * basis[i];
    // basis *= (x - x_k)
    std::vector<Rational> next(basis.size() + 1, Rational(0));
    for (std::size_t i = 0; i < basis.size(); ++i) {
      next[i + 1] += basis[i];
      next[i] -= basis[i] * pts[k].first;
    }
    basis = std::move(next);
  }
  while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
  return coeffs;
}

}  // namespace detail

/// Interpolates exactly on the consecutive train window [train_from,
/// train_to] and validates on every later sample.  A holdout mismatch
/// returns validated = false with the earliest failing d: that is sweep
/// data (not yet stabilized), not an engine failure.
inline PolyFit fit_and_validate(const DSweep& s, int train_from, int train_to) {
  if (train_from > train_to) throw config_error("empty train window");
  std::vector<std::pair<int, std::size_t>> train;
  for (const auto& sample : s.samples)
    if (sample.first >= train_from && sample.first <= train_to)
      train.push_back(sample);
  if (train.size() != static_cast<std::size_t>(train_to - train_from + 1))
    throw config_error("train window not fully sampled");
  for (std::size_t i = 1; i < train.size(); ++i)
    if (train[i].first != train[i - 1].first + 1)
      throw config_error("train window must be consecutive");

  PolyFit fit;
  fit.coefficients = detail::interpolate(train);
  fit.degree = static_cast<int>(fit.coefficients.size()) - 1;
  fit.validated = true;
  for (const auto& [d, dim] : s.samples) {
    if (d <= train_to) continue;
    if (detail::eval_poly(fit.coefficients, d) !=
        Rational(static_cast<std::int64_t>(dim))) {
      fit.validated = false;
      if (!fit.first_failing_d) fit.first_failing_d = d;
    }
  }
  // walk back from the train window while earlier samples still agree
  fit.stabilization_d0 = train_from;
  for (auto it = s.samples.rbegin(); it != s.samples.rend(); ++it) {
    const auto& [d, dim] = *it;
    if (d >= train_from) continue;
    if (detail::eval_poly(fit.coefficients, d) ==
        Rational(static_cast<std::int64_t>(dim)))
      fit.stabilization_d0 = d;
    else
      break;
  }
  return fit;
}

/// Least sampled d0 with dim = 0 from there on; q >= 2 only, where eventual
/// vanishing is the expected behavior.
struct VanishingReport {
  std::optional<int> threshold;
  DSweep data;
};

inline VanishingReport vanishing_threshold(const TwistFamily& family, int p, int q,
                                           int d_from, int d_max,
                                           const KoszulOptions& opts =
                                               {.mode = FieldMode::certified()},
                                           RankStats* stats = nullptr) {
  if (q < 2) throw config_error("vanishing_threshold applies to q >= 2");
  VanishingReport rep;
  rep.data = sweep(family, p, q, d_from, d_max, opts, stats);
  std::optional<int> d0;
  for (auto it = rep.data.samples.rbegin(); it != rep.data.samples.rend(); ++it) {
    if (it->second != 0) break;
    d0 = it->first;
  }
  rep.threshold = d0;
  return rep;
}

}  // namespace syz
