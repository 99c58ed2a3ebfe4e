// Command-line front end: config ingestion, orchestration, and table
// emission for the Koszul cohomology engines.
//
// Exit codes: 0 success/agreement, 1 computed disagreement (a finding),
// 2 configuration error, 3 internal integrity error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "syzygy/asymptotics.hpp"
#include "syzygy/config.hpp"
#include "syzygy/equivariant.hpp"
#include "syzygy/io.hpp"
#include "syzygy/koszul.hpp"
#include "syzygy/resolution.hpp"

namespace {

struct CliOverrides {
  std::string config_path;
  std::string out_path;
  std::uint64_t field_prime = 0;
  bool certify = false;
  int threads = 0;
};

syz::RunConfig load_config(const CliOverrides& cli) {
  std::ifstream in(cli.config_path);
  if (!in) throw syz::config_error("cannot open config file " + cli.config_path);
  std::stringstream buf;
  buf << in.rdbuf();
  syz::RunConfig cfg = syz::parse_config_text(buf.str());
  if (cli.field_prime != 0) cfg.field = syz::FieldSpec::prime(cli.field_prime);
  if (cli.certify) cfg.certify = true;
  if (cli.threads > 0) cfg.threads = cli.threads;
  if (!cli.out_path.empty()) cfg.out_path = cli.out_path;
  return cfg;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw syz::config_error("cannot open output file " + path);
  out << text;
}

syz::KoszulOptions engine_options(const syz::RunConfig& cfg) {
  syz::KoszulOptions opts;
  opts.mode = cfg.mode();
  opts.threads = cfg.threads;
  return opts;
}

int clipped_p_max(const syz::MonomialSystem& sys, int requested) {
  int h0 = static_cast<int>(sys.h0_of_l());
  if (requested > h0) {
    std::cerr << "warning: p_max " << requested << " clipped to h0(L) = " << h0
              << " (higher wedge powers vanish)\n";
    return h0;
  }
  return requested;
}

int cmd_betti(const syz::RunConfig& cfg) {
  if (!cfg.betti) throw syz::config_error("config has no \"betti\" section");
  syz::MonomialSystem sys = cfg.system.build();
  int p_max = clipped_p_max(sys, cfg.betti->p_max);
  syz::BettiTable table = syz::betti_table(sys, p_max, cfg.betti->q_min,
                                           cfg.betti->q_max, engine_options(cfg));
  write_output(syz::betti_csv(table), cfg.out_path);
  if (!cfg.out_path.empty()) {
    std::cout << table.system_description << "  [" << table.field_description
              << "]\n";
    std::cout << syz::betti_diagram(table);
  }
  return 0;
}

int cmd_oracle_compare(const syz::RunConfig& cfg) {
  if (!cfg.oracle) throw syz::config_error("config has no \"oracle\" section");
  syz::MonomialSystem sys = cfg.system.build();
  int p_max = clipped_p_max(sys, cfg.oracle->p_max);
  int dim = static_cast<int>(sys.variety_dim());
  int q_min = cfg.oracle->q_min;
  int q_max = cfg.oracle->q_max < 0 ? dim + 1 : cfg.oracle->q_max;
  int bound = cfg.oracle->degree_bound > 0 ? cfg.oracle->degree_bound
                                           : p_max + dim + 2;

  syz::BettiTable table =
      syz::betti_table(sys, p_max, q_min, q_max, engine_options(cfg));
  syz::ResolutionOptions ropts;
  ropts.mode = cfg.mode();
  syz::ResolutionLedger ledger = syz::minimal_resolution(sys, p_max, bound, ropts);

  std::string out;
  out += "system: " + sys.description() + "\n";
  out += "field: " + cfg.mode().describe() + "\n";
  bool all_match = true;
  for (int q = q_min; q <= q_max; ++q) {
    for (int p = 0; p <= p_max; ++p) {
      std::size_t kz = table.at(p, q);
      std::size_t tr = syz::tor_dim(ledger, p, q);
      bool match = kz == tr;
      all_match = all_match && match;
      out += "p=" + std::to_string(p) + " q=" + std::to_string(q) +
             " koszul=" + std::to_string(kz) + " resolution=" + std::to_string(tr) +
             (match ? "" : "  MISMATCH") + "\n";
    }
  }
  out += all_match ? "oracle-compare: all cells agree\n"
                   : "oracle-compare: DISAGREEMENT found\n";
  write_output(out, cfg.out_path);
  return all_match ? 0 : 1;
}

int cmd_duality(const syz::RunConfig& cfg) {
  if (!cfg.duality) throw syz::config_error("config has no \"duality\" section");
  syz::MonomialSystem sys = cfg.system.build();
  int p_max = clipped_p_max(sys, cfg.duality->p_max);
  auto opts = engine_options(cfg);
  std::string out;
  out += "system: " + sys.description() + "\n";
  bool all_agree = true;
  for (int q = cfg.duality->q_min; q <= cfg.duality->q_max; ++q) {
    for (int p = 0; p <= p_max; ++p) {
      syz::DualityReport rep = syz::check_duality(sys, p, q, opts);
      out += "p=" + std::to_string(p) + " q=" + std::to_string(q) + ": ";
      if (!rep.hypotheses_hold) {
        out += "hypotheses failed (";
        for (std::size_t i = 0; i < rep.failed_hypotheses.size(); ++i)
          out += (i ? ", " : "") + rep.failed_hypotheses[i];
        out += ")\n";
        continue;
      }
      out += "dim=" + std::to_string(rep.dim) + " dual(p=" +
             std::to_string(rep.dual_p) + ",q=" + std::to_string(rep.dual_q) +
             ")=" + std::to_string(rep.dual_dim) +
             (rep.agree ? "  equal" : "  UNEQUAL") + "\n";
      all_agree = all_agree && rep.agree;
    }
  }
  out += all_agree ? "duality: all comparable cells agree\n"
                   : "duality: DISAGREEMENT found\n";
  write_output(out, cfg.out_path);
  return all_agree ? 0 : 1;
}

syz::TwistFamily family_from_config(const syz::RunConfig& cfg,
                                    const syz::MonomialSystem& sys) {
  if (!sys.is_projective())
    throw syz::config_error(
        "sweep/fit via config requires a projective system (A and P are degrees)");
  return syz::TwistFamily::projective(sys, cfg.sweep->a_degree, cfg.sweep->p_degree);
}

int cmd_sweep(const syz::RunConfig& cfg) {
  if (!cfg.sweep) throw syz::config_error("config has no \"sweep\" section");
  syz::MonomialSystem sys = cfg.system.build();
  syz::TwistFamily family = family_from_config(cfg, sys);
  // sweeps always run in certified mode so sampled dimensions are
  // characteristic-zero values
  syz::KoszulOptions opts;
  opts.mode = syz::FieldMode::certified();
  opts.threads = cfg.threads;
  syz::DSweep data = syz::sweep(family, cfg.sweep->p, cfg.sweep->q,
                                cfg.sweep->d_from, cfg.sweep->d_to, opts);
  write_output(syz::sweep_csv(data), cfg.out_path);
  return 0;
}

int cmd_fit(const syz::RunConfig& cfg) {
  if (!cfg.sweep) throw syz::config_error("config has no \"sweep\" section");
  if (!cfg.fit) throw syz::config_error("config has no \"fit\" section");
  syz::MonomialSystem sys = cfg.system.build();
  syz::TwistFamily family = family_from_config(cfg, sys);
  syz::KoszulOptions opts;
  opts.mode = syz::FieldMode::certified();
  opts.threads = cfg.threads;
  syz::DSweep data = syz::sweep(family, cfg.sweep->p, cfg.sweep->q,
                                cfg.sweep->d_from, cfg.sweep->d_to, opts);
  syz::PolyFit fit =
      syz::fit_and_validate(data, cfg.fit->train_from, cfg.fit->train_to);
  write_output(syz::fit_report(data, fit, cfg.fit->train_from, cfg.fit->train_to),
               cfg.out_path);
  return fit.validated ? 0 : 1;
}

int cmd_equivariant(const syz::RunConfig& cfg) {
  if (!cfg.equivariant)
    throw syz::config_error("config has no \"equivariant\" section");
  syz::MonomialSystem sys = cfg.system.build();
  const int n = cfg.equivariant->n;
  auto opts = engine_options(cfg);
  std::string out;
  out += "system: " + sys.description() + "\n";
  out += "n: " + std::to_string(n) + "\n";
  bool all_ok = true;

  syz::InvariantComplex cx = syz::build_invariant_complex(sys, n);
  bool composite_zero = true;
  for (int m = 0; m + 1 < n; ++m) {
    const syz::SparseMatrix& f = (m == 0) ? cx.augmentation : cx.differentials[m - 1];
    if (!syz::multiply(cx.differentials[m], f).is_zero()) composite_zero = false;
  }
  out += std::string("composite d.d = 0: ") + (composite_zero ? "yes" : "NO") + "\n";
  all_ok = all_ok && composite_zero;

  for (int q = 1; q <= n; ++q) {
    std::size_t inv = syz::invariant_cohomology(sys, n, q, opts);
    std::size_t ksz = syz::koszul_dim(sys, n - q, q, opts).dim;
    bool match = inv == ksz;
    all_ok = all_ok && match;
    out += "q=" + std::to_string(q) + ": invariant=" + std::to_string(inv) +
           " koszul=" + std::to_string(ksz) + (match ? "  equal" : "  UNEQUAL") +
           "\n";
  }
  syz::FourTermBalance bal = syz::four_term_balance(sys, n - 1, opts);
  out += "exact sequence balance (p=" + std::to_string(n - 1) +
         "): " + std::to_string(bal.k_top_zero) + " - " +
         std::to_string(bal.free_term) + " + " + std::to_string(bal.invariant_h0) +
         " - " + std::to_string(bal.k_p_one) +
         (bal.balanced ? " = 0" : " != 0  UNEQUAL") + "\n";
  all_ok = all_ok && bal.balanced;

  for (int m = 1; m <= n; ++m) {
    syz::ActionModel model =
        syz::ActionModel::create(sys, n, m, syz::ActionTwist::alternating);
    if (model.space_dim > cfg.equivariant->brute_force_cap) {
      out += "m=" + std::to_string(m) + ": brute force skipped (dim " +
             std::to_string(model.space_dim) + " over cap)\n";
      continue;
    }
    std::size_t got = syz::brute_force_invariant_dim(
        sys, n, m, syz::ActionTwist::alternating, cfg.equivariant->brute_force_cap);
    std::size_t expected =
        sys.h0_total(m) *
        syz::binomial(static_cast<std::uint32_t>(sys.h0_of_l()), n - m);
    bool match = got == expected;
    all_ok = all_ok && match;
    out += "m=" + std::to_string(m) + ": projector rank=" + std::to_string(got) +
           " expected=" + std::to_string(expected) +
           (match ? "  equal" : "  UNEQUAL") + "\n";
  }
  out += all_ok ? "equivariant: all checks agree\n" : "equivariant: DISAGREEMENT\n";
  write_output(out, cfg.out_path);
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Koszul cohomology tables for monomial section systems"};
  app.require_subcommand(1);

  CliOverrides cli;
  app.add_option("--config", cli.config_path, "JSON run configuration")
      ->required();
  app.add_option("--field-prime", cli.field_prime, "override the field prime");
  app.add_flag("--certify", cli.certify, "two-prime certified ranks");
  app.add_option("--threads", cli.threads, "parallel cells (default from config)");
  app.add_option("--out", cli.out_path, "output path (default stdout)");

  auto* betti = app.add_subcommand("betti", "Betti table CSV and diagram");
  auto* oracle = app.add_subcommand("oracle-compare",
                                    "Koszul engine vs resolution oracle");
  auto* duality = app.add_subcommand("duality", "duality theorem check");
  auto* sweep_cmd = app.add_subcommand("sweep", "dim K_{p,q}(B, P + dA) samples");
  auto* fit = app.add_subcommand("fit", "polynomial fit of a sweep");
  auto* equivariant =
      app.add_subcommand("equivariant", "invariant-complex checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    syz::RunConfig cfg = load_config(cli);
    if (betti->parsed()) return cmd_betti(cfg);
    if (oracle->parsed()) return cmd_oracle_compare(cfg);
    if (duality->parsed()) return cmd_duality(cfg);
    if (sweep_cmd->parsed()) return cmd_sweep(cfg);
    if (fit->parsed()) return cmd_fit(cfg);
    if (equivariant->parsed()) return cmd_equivariant(cfg);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const syz::integrity_error& e) {
    std::cerr << "integrity error: " << e.what() << "\n";
    return 3;
  } catch (const syz::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const syz::truncation_error& e) {
    std::cerr << "truncation: " << e.what() << "\n";
    return 2;
  } catch (const syz::unsupported_error& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
