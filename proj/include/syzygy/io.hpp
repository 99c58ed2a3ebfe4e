#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "syzygy/asymptotics.hpp"
#include "syzygy/field.hpp"
#include "syzygy/koszul.hpp"

namespace syz {

// All emitters produce LF line endings and no trailing whitespace, so the
// outputs are byte-comparable across runs and platforms.

inline std::string rational_to_string(const Rational& r) {
  std::ostringstream os;
  os << boost::multiprecision::numerator(r);
  if (boost::multiprecision::denominator(r) != 1)
    os << "/" << boost::multiprecision::denominator(r);
  return os.str();
}

/// CSV rows sorted by (q, p): header `p,q,dim`, every cell in range
/// including zeros.
inline std::string betti_csv(const BettiTable& t) {
  std::string out = "p,q,dim\n";
  for (int q = t.q_min; q <= t.q_max; ++q)
    for (int p = 0; p <= t.p_max; ++p)
      out += std::to_string(p) + "," + std::to_string(q) + "," +
             std::to_string(t.at(p, q)) + "\n";
  return out;
}

/// Text diagram: rows indexed by q, columns by p, zeros printed as ".".
inline std::string betti_diagram(const BettiTable& t) {
  const int cols = t.p_max + 1;
  std::vector<std::size_t> width(cols, 1);
  std::vector<std::vector<std::string>> cells(t.q_max - t.q_min + 1,
                                              std::vector<std::string>(cols));
  for (int q = t.q_min; q <= t.q_max; ++q) {
    for (int p = 0; p < cols; ++p) {
      std::size_t v = t.at(p, q);
      std::string s = (v == 0) ? "." : std::to_string(v);
      width[p] = std::max({width[p], s.size(), std::to_string(p).size()});
      cells[q - t.q_min][p] = std::move(s);
    }
  }
  std::size_t label = 0;
  for (int q = t.q_min; q <= t.q_max; ++q)
    label = std::max(label, (std::to_string(q) + ":").size());

  auto pad_left = [](const std::string& s, std::size_t w) {
    return std::string(w > s.size() ? w - s.size() : 0, ' ') + s;
  };

  std::string out = std::string(label, ' ');
  for (int p = 0; p < cols; ++p) out += "  " + pad_left(std::to_string(p), width[p]);
  out += "\n";
  for (int q = t.q_min; q <= t.q_max; ++q) {
    out += pad_left(std::to_string(q) + ":", label);
    for (int p = 0; p < cols; ++p)
      out += "  " + pad_left(cells[q - t.q_min][p], width[p]);
    out += "\n";
  }
  return out;
}

/// CSV `d,dim` sorted by d.
inline std::string sweep_csv(const DSweep& s) {
  std::string out = "d,dim\n";
  for (const auto& [d, dim] : s.samples)
    out += std::to_string(d) + "," + std::to_string(dim) + "\n";
  return out;
}

inline std::string fit_report(const DSweep& s, const PolyFit& fit, int train_from,
                              int train_to) {
  std::string out;
  out += "family: " + s.family + "\n";
  out += "cell: p=" + std::to_string(s.p) + " q=" + std::to_string(s.q) + "\n";
  out += "samples: d=" + std::to_string(s.samples.front().first) + ".." +
         std::to_string(s.samples.back().first) + "\n";
  out += "train: d=" + std::to_string(train_from) + ".." + std::to_string(train_to) +
         "\n";
  out += "degree: " + std::to_string(fit.degree) + "\n";
  for (std::size_t k = 0; k < fit.coefficients.size(); ++k)
    out += "coefficient[" + std::to_string(k) +
           "]: " + rational_to_string(fit.coefficients[k]) + "\n";
  out += "stabilization_d0: " + std::to_string(fit.stabilization_d0) + "\n";
  if (fit.validated) {
    out += "validated: yes\n";
  } else {
    out += "validated: no\n";
    if (fit.first_failing_d)
      out += "first_failing_d: " + std::to_string(*fit.first_failing_d) + "\n";
  }
  return out;
}

}  // namespace syz
