#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "syzygy/errors.hpp"
#include "syzygy/field.hpp"
#include "syzygy/sections.hpp"

namespace syz {

// Versioned JSON run configuration.  Unknown keys are errors: configs that
// drift from the schema fail loudly instead of being silently ignored.

namespace detail {

using nlohmann::json;

inline void require_keys(const json& obj, const std::string& where,
                         const std::set<std::string>& required,
                         const std::set<std::string>& optional) {
  if (!obj.is_object()) throw config_error(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!required.count(key) && !optional.count(key))
      throw config_error("unknown key \"" + key + "\" in " + where);
  }
  for (const auto& key : required)
    if (!obj.contains(key))
      throw config_error("missing key \"" + key + "\" in " + where);
}

inline int get_int(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.at(key).is_number_integer())
    throw config_error(where + "." + key + " must be an integer");
  return obj.at(key).get<int>();
}

inline int get_int_or(const json& obj, const std::string& where,
                      const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  return get_int(obj, where, key);
}

inline Point parse_point(const json& j, const std::string& where) {
  if (!j.is_array()) throw config_error(where + " must be an array of integers");
  Point p;
  for (const auto& c : j) {
    if (!c.is_number_integer()) throw config_error(where + " must hold integers");
    p.push_back(c.get<std::int32_t>());
  }
  return p;
}

inline std::vector<Point> parse_point_set(const json& j, const std::string& where) {
  if (!j.is_array()) throw config_error(where + " must be an array of points");
  std::vector<Point> pts;
  for (const auto& p : j) pts.push_back(parse_point(p, where + " point"));
  return pts;
}

}  // namespace detail

struct SystemSpec {
  enum class Kind { projective, polytope, product };
  Kind kind = Kind::projective;

  // projective
  int n = 1;
  std::vector<int> b_degrees{0};
  int l_degree = 1;

  // polytope
  std::size_t variety_dim = 1;
  std::vector<Point> l_points;
  std::vector<std::vector<Point>> b_summands;

  // product of projective spaces
  struct Factor {
    int n = 1;
    int l_degree = 1;
  };
  std::vector<Factor> factors;
  std::vector<std::vector<int>> b_multidegrees;

  MonomialSystem build() const {
    switch (kind) {
      case Kind::projective:
        return MonomialSystem::projective(n, b_degrees, l_degree);
      case Kind::polytope:
        return MonomialSystem::polytope(l_points, b_summands, variety_dim);
      case Kind::product: {
        std::vector<Point> l{Point{}};
        for (const auto& f : factors)
          l = product_points(l, degree_monomials(f.l_degree, f.n + 1));
        std::vector<std::vector<Point>> b;
        for (const auto& multi : b_multidegrees) {
          if (multi.size() != factors.size())
            throw config_error("b multidegree arity must match factor count");
          std::vector<Point> pts{Point{}};
          for (std::size_t i = 0; i < factors.size(); ++i)
            pts = product_points(pts, degree_monomials(multi[i], factors[i].n + 1));
          b.push_back(std::move(pts));
        }
        std::size_t dim = 0;
        for (const auto& f : factors) dim += static_cast<std::size_t>(f.n);
        return MonomialSystem::polytope(std::move(l), std::move(b), dim);
      }
    }
    throw config_error("unreachable system kind");
  }

private:
  static std::vector<Point> product_points(const std::vector<Point>& a,
                                           const std::vector<Point>& b) {
    std::vector<Point> out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a)
      for (const auto& y : b) {
        Point p = x;
        p.insert(p.end(), y.begin(), y.end());
        out.push_back(std::move(p));
      }
    return out;
  }
};

struct BettiParams {
  int p_max = 0;
  int q_min = 0;
  int q_max = 0;
};

struct OracleParams {
  int p_max = 0;
  int q_min = 0;
  int q_max = -1;        // -1: defaults to variety_dim + 1
  int degree_bound = 0;  // 0: defaults to p_max + variety_dim + 2
};

struct DualityParams {
  int p_max = 0;
  int q_min = 0;
  int q_max = 0;
};

struct SweepParams {
  int a_degree = 1;
  int p_degree = 1;
  int p = 0;
  int q = 0;
  int d_from = 0;
  int d_to = 0;
};

struct FitParams {
  int train_from = 0;
  int train_to = 0;
};

struct EquivariantParams {
  int n = 1;
  std::size_t brute_force_cap = 20000;
};

struct RunConfig {
  SystemSpec system;
  FieldSpec field = FieldSpec::prime(kDefaultPrime);
  bool certify = false;
  int threads = 1;
  std::string out_path;

  std::optional<BettiParams> betti;
  std::optional<OracleParams> oracle;
  std::optional<DualityParams> duality;
  std::optional<SweepParams> sweep;
  std::optional<FitParams> fit;
  std::optional<EquivariantParams> equivariant;

  FieldMode mode() const {
    if (certify) return FieldMode::certified();
    return FieldMode::single(field);
  }
};

inline RunConfig parse_config(const nlohmann::json& j) {
  using detail::get_int;
  using detail::get_int_or;
  using detail::require_keys;

  require_keys(j, "config", {"schema_version", "system"},
               {"field", "threads", "out", "betti", "oracle", "duality", "sweep",
                "fit", "equivariant"});
  if (get_int(j, "config", "schema_version") != 1)
    throw config_error("unsupported schema_version (expected 1)");

  RunConfig cfg;
  const auto& sys = j.at("system");
  require_keys(sys, "system", {"kind"},
               {"n", "b_degrees", "l_degree", "variety_dim", "l_points",
                "b_summands", "factors", "b_multidegrees"});
  std::string kind = sys.at("kind").get<std::string>();
  if (kind == "projective") {
    require_keys(sys, "system(projective)", {"kind", "n", "b_degrees", "l_degree"}, {});
    cfg.system.kind = SystemSpec::Kind::projective;
    cfg.system.n = get_int(sys, "system", "n");
    cfg.system.b_degrees.clear();
    for (const auto& b : sys.at("b_degrees")) {
      if (!b.is_number_integer()) throw config_error("b_degrees must hold integers");
      cfg.system.b_degrees.push_back(b.get<int>());
    }
    cfg.system.l_degree = get_int(sys, "system", "l_degree");
  } else if (kind == "polytope") {
    require_keys(sys, "system(polytope)",
                 {"kind", "variety_dim", "l_points", "b_summands"}, {});
    cfg.system.kind = SystemSpec::Kind::polytope;
    cfg.system.variety_dim =
        static_cast<std::size_t>(get_int(sys, "system", "variety_dim"));
    cfg.system.l_points = detail::parse_point_set(sys.at("l_points"), "l_points");
    for (const auto& summand : sys.at("b_summands"))
      cfg.system.b_summands.push_back(
          detail::parse_point_set(summand, "b_summands entry"));
  } else if (kind == "product") {
    require_keys(sys, "system(product)", {"kind", "factors", "b_multidegrees"}, {});
    cfg.system.kind = SystemSpec::Kind::product;
    cfg.system.factors.clear();
    for (const auto& f : sys.at("factors")) {
      require_keys(f, "factor", {"n", "l_degree"}, {});
      cfg.system.factors.push_back(
          {get_int(f, "factor", "n"), get_int(f, "factor", "l_degree")});
    }
    for (const auto& multi : sys.at("b_multidegrees")) {
      std::vector<int> degrees;
      for (const auto& v : multi) {
        if (!v.is_number_integer())
          throw config_error("b_multidegrees must hold integers");
        degrees.push_back(v.get<int>());
      }
      cfg.system.b_multidegrees.push_back(std::move(degrees));
    }
  } else {
    throw config_error("system.kind must be projective, polytope, or product");
  }

  if (j.contains("field")) {
    const auto& f = j.at("field");
    require_keys(f, "field", {}, {"prime", "certify", "rationals"});
    if (f.contains("rationals") && f.at("rationals").get<bool>()) {
      cfg.field = FieldSpec::rationals();
    } else if (f.contains("prime")) {
      cfg.field = FieldSpec::prime(
          static_cast<std::uint64_t>(get_int(f, "field", "prime")));
    }
    if (f.contains("certify")) cfg.certify = f.at("certify").get<bool>();
  }
  cfg.threads = get_int_or(j, "config", "threads", 1);
  if (cfg.threads < 1) throw config_error("threads must be >= 1");
  if (j.contains("out")) cfg.out_path = j.at("out").get<std::string>();

  if (j.contains("betti")) {
    const auto& b = j.at("betti");
    require_keys(b, "betti", {"p_max", "q_min", "q_max"}, {});
    cfg.betti = BettiParams{get_int(b, "betti", "p_max"), get_int(b, "betti", "q_min"),
                            get_int(b, "betti", "q_max")};
  }
  if (j.contains("oracle")) {
    const auto& o = j.at("oracle");
    require_keys(o, "oracle", {"p_max"}, {"q_min", "q_max", "degree_bound"});
    OracleParams p;
    p.p_max = get_int(o, "oracle", "p_max");
    p.q_min = get_int_or(o, "oracle", "q_min", 0);
    p.q_max = get_int_or(o, "oracle", "q_max", -1);
    p.degree_bound = get_int_or(o, "oracle", "degree_bound", 0);
    cfg.oracle = p;
  }
  if (j.contains("duality")) {
    const auto& d = j.at("duality");
    require_keys(d, "duality", {"p_max", "q_min", "q_max"}, {});
    cfg.duality = DualityParams{get_int(d, "duality", "p_max"),
                                get_int(d, "duality", "q_min"),
                                get_int(d, "duality", "q_max")};
  }
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    require_keys(s, "sweep", {"p", "q", "d_from", "d_to"},
                 {"a_degree", "p_degree"});
    SweepParams p;
    p.a_degree = get_int_or(s, "sweep", "a_degree", 1);
    p.p_degree = get_int_or(s, "sweep", "p_degree", 1);
    p.p = get_int(s, "sweep", "p");
    p.q = get_int(s, "sweep", "q");
    p.d_from = get_int(s, "sweep", "d_from");
    p.d_to = get_int(s, "sweep", "d_to");
    cfg.sweep = p;
  }
  if (j.contains("fit")) {
    const auto& f = j.at("fit");
    require_keys(f, "fit", {"train_from", "train_to"}, {});
    cfg.fit = FitParams{get_int(f, "fit", "train_from"), get_int(f, "fit", "train_to")};
  }
  if (j.contains("equivariant")) {
    const auto& e = j.at("equivariant");
    require_keys(e, "equivariant", {"n"}, {"brute_force_cap"});
    EquivariantParams p;
    p.n = get_int(e, "equivariant", "n");
    p.brute_force_cap = static_cast<std::size_t>(
        get_int_or(e, "equivariant", "brute_force_cap", 20000));
    cfg.equivariant = p;
  }
  return cfg;
}

inline RunConfig parse_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    return parse_config(j);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("malformed config: ") + e.what());
  }
}

}  // namespace syz
