#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "framelet/io.hpp"
#include "framelet/sampling.hpp"
#include "framelet/transform.hpp"

namespace framelet::cli {

namespace {

using io::Json;

// Shortest text that reads back to the same double.
std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

ExecPolicy policy_of(const JobConfig& cfg) { return cfg.bit_repro ? ExecPolicy::serial : ExecPolicy::parallel; }

FilterBank load_bank(const JobConfig& cfg) {
  if (cfg.bank == FilterBank::kShippedName) return FilterBank::dau2_simplex_r2();
  if (std::filesystem::is_regular_file(cfg.bank)) return io::bank_from_json(io::read_json(cfg.bank));
  throw ValidationError("unknown bank '" + cfg.bank + "' (expected " + FilterBank::kShippedName +
                        " or a bank JSON file)");
}

FrameletSystem build_system(const JobConfig& cfg, const FilterBank& bank, int top) {
  if (cfg.rules == RuleFamily::gauss) return FrameletSystem::exact(bank, top, policy_of(cfg));
  return FrameletSystem::kronecker(bank, top, cfg.lattice, policy_of(cfg));
}

std::string family_name(RuleFamily f) { return f == RuleFamily::gauss ? "gauss" : "kronecker"; }

SpectralVector random_band_limited(int cutoff, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  SpectralVector v(cutoff);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = {g(rng), g(rng)};
  return v;
}

void write_json(const std::filesystem::path& path, const Json& j, std::ostream& out) {
  io::write_atomic(path, j.dump(1) + "\n");
  out << "wrote " << path.string() << "\n";
}

int cmd_gen_lattice(const JobConfig& cfg, std::ostream& out) {
  const int cutoff = degree_cutoff(cfg.level);
  const auto rule = cfg.rules == RuleFamily::gauss ? gauss_reference_rule(2 * cutoff)
                                                   : kronecker_lattice(cfg.level, cfg.lattice);
  const auto name = (cfg.rules == RuleFamily::gauss ? "gauss_j" : "lattice_j") + std::to_string(cfg.level) + ".json";
  const auto path = output_path(cfg, name);
  write_json(path, io::to_json(rule), out);
  out << "nodes: " << rule.size() << "\n";
  if (!cfg.skip_gram) {
    const auto g = gram_matrix(rule, cutoff, policy_of(cfg));
    out << "gram deviation (cutoff " << cutoff << "): " << sci(g.max_deviation_from_identity()) << "\n";
  }
  return kExitOk;
}

// Spectral input comes from --in (a spectral document) or --random SEED at cutoff Lambda_J.
std::optional<SpectralVector> spectral_input(const JobConfig& cfg, const std::optional<Json>& doc) {
  if (doc && doc->is_object() && doc->contains("coeffs")) return io::spectral_from_json(*doc);
  if (!doc && cfg.random_seed) return random_band_limited(degree_cutoff(cfg.level), *cfg.random_seed);
  return std::nullopt;
}

void check_tree_rules(const FrameletSystem& sys, const CoefficientTree& tree) {
  auto check = [&](const CoefficientSequence& s) {
    const auto expected = sys.rule(s.level).id();
    if (s.rule_ref != expected) {
      throw ValidationError("coefficient tree level " + std::to_string(s.level) + " lives on '" + s.rule_ref +
                            "', but the selected rules give '" + expected + "'");
    }
  };
  check(tree.v0);
  for (const auto& level : tree.high) {
    for (const auto& w : level) check(w);
  }
}

int cmd_transform(const JobConfig& cfg, std::ostream& out) {
  std::optional<Json> doc;
  if (cfg.in) doc = io::read_json(*cfg.in);
  const auto bank = load_bank(cfg);

  if (cfg.mode == TransformMode::reconstruct) {
    if (!doc || !doc->is_object() || !doc->contains("levels")) {
      throw ValidationError("--reconstruct needs a coefficient-tree JSON via --in");
    }
    const auto tree = io::tree_from_json(*doc);
    if (tree.top > kMaxLevel) throw ValidationError("tree level exceeds " + std::to_string(kMaxLevel));
    if (static_cast<int>(tree.high.empty() ? bank.r() : tree.high.front().size()) != bank.r()) {
      throw ValidationError("tree channel count does not match bank '" + bank.name() + "'");
    }
    const auto sys = build_system(cfg, bank, tree.top);
    check_tree_rules(sys, tree);
    const auto v = multilevel_reconstruct(sys, tree);
    write_json(output_path(cfg, "reconstructed_J" + std::to_string(tree.top) + ".json"), io::to_json(v), out);
    out << "reconstructed v_" << tree.top << ": " << v.values.size() << " values\n";
    return kExitOk;
  }

  const auto f = spectral_input(cfg, doc);
  if (!f) throw ValidationError("transform needs a spectral-vector JSON via --in, or --random SEED");
  if (cfg.level < 1) throw ValidationError("transform needs --level >= 1");

  const auto sys = build_system(cfg, bank, cfg.level);
  const auto v = sys.make_sequence(cfg.level, *f);
  const auto tree = multilevel_decompose(sys, v);
  const auto J = std::to_string(cfg.level);
  out << "levels: " << cfg.level << ", coefficients: " << tree.coefficient_count() << "\n";

  if (cfg.mode == TransformMode::decompose) {
    write_json(output_path(cfg, "tree_J" + J + ".json"), io::to_json(tree, bank.r()), out);
    return kExitOk;
  }

  const auto rec = multilevel_reconstruct(sys, tree);
  const double residual = relative_error(rec.values, v.values);
  const double tol = cfg.tol.value_or(1e-9);
  write_json(output_path(cfg, "roundtrip_J" + J + ".json"), io::to_json(rec), out);
  out << "round-trip residual: " << sci(residual) << " (tol " << sci(tol) << ")\n";
  return residual <= tol ? kExitOk : kExitTolerance;
}

struct Check {
  std::string name;
  double value;
  double tol;
  bool pass;
};

int cmd_diagnostics(const JobConfig& cfg, std::ostream& out) {
  if (cfg.level < 1) throw ValidationError("diagnostics needs --level >= 1");
  const auto bank = load_bank(cfg);
  const int J = cfg.level;
  const auto sys = build_system(cfg, bank, J);
  const bool exact = cfg.rules == RuleFamily::gauss;
  const double mask_tol = cfg.tol.value_or(1e-12);
  const double exact_tol = cfg.tol.value_or(1e-10);

  std::vector<Check> checks;
  Json report;
  report["bank"] = bank.name();
  report["rules"] = family_name(cfg.rules);
  report["J"] = J;

  const auto grid = uniform_grid(0.0, 0.5, 10000);
  const double partition = check_partition(bank, grid);
  const double refinement = check_refinement(bank, grid);
  report["partition_residual"] = partition;
  report["refinement_residual"] = refinement;
  checks.push_back({"partition", partition, mask_tol, partition <= mask_tol});
  checks.push_back({"refinement", refinement, mask_tol, refinement <= mask_tol});

  out << "bank " << bank.name() << ", " << family_name(cfg.rules) << " rules, J = " << J << "\n";
  out << "  partition residual   " << sci(partition) << "\n";
  out << "  refinement residual  " << sci(refinement) << "\n";
  out << "  level  nodes  exact-degree  cutoff  gram-deviation\n";

  report["levels"] = Json::array();
  for (int j = 0; j <= J; ++j) {
    const auto& rule = sys.rule(j);
    const int cutoff = degree_cutoff(j);
    const int degree = exactness_degree(rule, 1e-10, std::max(2 * cutoff, 8));
    Json row{{"j", j}, {"nodes", rule.size()}, {"exactness_degree", degree}, {"gram_cutoff", cutoff}};
    std::string dev = "skipped";
    if (!cfg.skip_gram) {
      const double d = gram_matrix(rule, cutoff, policy_of(cfg)).max_deviation_from_identity();
      row["gram_deviation"] = d;
      dev = sci(d);
      if (exact) checks.push_back({"gram j=" + std::to_string(j), d, exact_tol, d <= exact_tol});
    } else {
      row["gram_deviation"] = nullptr;
    }
    report["levels"].push_back(row);
    char line[128];
    std::snprintf(line, sizeof line, "  %5d  %5zu  %12d  %6d  %s\n", j, rule.size(), degree, cutoff, dev.c_str());
    out << line;
  }

  report["generalized"] = Json::array();
  out << "  generalized tightness residual\n";
  for (int j = 1; j <= J; ++j) {
    const double r = generalized_tightness_residual(sys.rule(j - 1), sys.rule(j), bank, j, degree_cutoff(j));
    report["generalized"].push_back({{"j", j}, {"residual", r}});
    out << "    j = " << j << ": " << sci(r) << "\n";
    const bool ok = exact ? r <= exact_tol : std::isfinite(r);
    checks.push_back({"generalized j=" + std::to_string(j), r, exact ? exact_tol : INFINITY, ok});
  }

  // Parseval needs f band-limited to Lambda_{J-1}.
  const auto f = random_band_limited(degree_cutoff(J - 1), cfg.random_seed.value_or(1));
  const auto pr = parseval_report(sys, f, J);
  Json rows = Json::array();
  out << "  parseval (relative to ||f||^2 = " << sci(pr.norm_sq) << ")\n";
  out << "    j  fine        coarse      high        residual\n";
  for (const auto& row : pr.levels) {
    rows.push_back({{"j", row.j}, {"fine", row.fine}, {"coarse", row.coarse}, {"high", row.high},
                    {"residual", row.residual}});
    char line[160];
    std::snprintf(line, sizeof line, "    %d  %.4e  %.4e  %.4e  %.3e\n", row.j, row.fine, row.coarse, row.high,
                  row.residual / pr.norm_sq);
    out << line;
    const double rel = std::abs(row.residual) / pr.norm_sq;
    const bool ok = exact ? rel <= exact_tol : std::isfinite(rel);
    checks.push_back({"parseval j=" + std::to_string(row.j), rel, exact ? exact_tol : INFINITY, ok});
  }
  const double top_rel = std::abs(pr.top_residual) / pr.norm_sq;
  out << "    top energy residual " << sci(top_rel) << "\n";
  checks.push_back({"parseval top", top_rel, exact ? exact_tol : INFINITY, exact ? top_rel <= exact_tol
                                                                                 : std::isfinite(top_rel)});
  report["parseval"] = {{"levels", rows},
                        {"top_energy", pr.top_energy},
                        {"norm_sq", pr.norm_sq},
                        {"top_residual", pr.top_residual}};

  bool all = true;
  report["checks"] = Json::array();
  for (const auto& c : checks) {
    all = all && c.pass;
    Json jc{{"name", c.name}, {"value", c.value}, {"pass", c.pass}};
    jc["tol"] = std::isfinite(c.tol) ? Json(c.tol) : Json(nullptr);
    report["checks"].push_back(jc);
    if (!c.pass) out << "  FAIL " << c.name << ": " << sci(c.value) << " > " << sci(c.tol) << "\n";
  }
  report["pass"] = all;
  write_json(output_path(cfg, "diagnostics_J" + std::to_string(J) + ".json"), report, out);
  out << (all ? "all checks passed" : "tolerance check failed") << "\n";
  return all ? kExitOk : kExitTolerance;
}

FrameletKind parse_kind(const std::string& kind, int r) {
  if (kind == "low") return {Channel::low, 0};
  if (kind.rfind("high", 0) == 0 && kind.size() > 4) {
    int n = 0;
    const auto* first = kind.data() + 4;
    const auto* last = kind.data() + kind.size();
    const auto res = std::from_chars(first, last, n);
    if (res.ec == std::errc{} && res.ptr == last && n >= 1 && n <= r) return {Channel::high, n - 1};
  }
  throw ValidationError("--kind must be low, high1..high" + std::to_string(r) + " or masks, got '" + kind + "'");
}

int cmd_sample(const JobConfig& cfg, std::ostream& out) {
  const auto bank = load_bank(cfg);
  std::ostringstream csv;

  if (cfg.kind == "masks") {
    csv << "xi,a_hat";
    for (int n = 1; n <= bank.r(); ++n) csv << ",b" << n << "_hat";
    csv << "\n";
    for (double xi : uniform_grid(0.0, 0.5, cfg.mask_points)) {
      csv << shortest(xi) << "," << shortest(bank.low()(xi));
      for (const auto& b : bank.highs()) csv << "," << shortest(b(xi));
      csv << "\n";
    }
    const auto path = output_path(cfg, "masks.csv");
    io::write_atomic(path, csv.str());
    out << "wrote " << path.string() << "\n" << "rows: " << cfg.mask_points << "\n";
    return kExitOk;
  }

  const auto kind = parse_kind(cfg.kind, bank.r());
  const int node_level = kind.channel == Channel::low ? cfg.level : cfg.level + 1;
  if (node_level > kMaxLevel) throw ValidationError("node level exceeds " + std::to_string(kMaxLevel));
  const auto sys = build_system(cfg, bank, node_level);
  if (cfg.node >= sys.rule(node_level).size()) {
    throw ValidationError("--node " + std::to_string(cfg.node) + " out of range: level " +
                          std::to_string(node_level) + " has " + std::to_string(sys.rule(node_level).size()) +
                          " nodes");
  }

  const auto points = simplex_grid(cfg.grid);
  const auto values = sample_framelet(sys, kind, cfg.level, cfg.node, points, policy_of(cfg));
  csv << "x1,x2,value\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    csv << shortest(points[i].x1) << "," << shortest(points[i].x2) << "," << shortest(values[i]) << "\n";
  }
  const auto path = output_path(cfg, cfg.kind + "_j" + std::to_string(cfg.level) + "_k" + std::to_string(cfg.node) +
                                         ".csv");
  io::write_atomic(path, csv.str());

  const auto center = framelet_center(sys, kind, cfg.level, cfg.node);
  const auto loc = localization(points, values, center);
  const auto& peak = points[loc.argmax];
  out << "wrote " << path.string() << "\n";
  out << "points: " << points.size() << "\n";
  out << "center: (" << shortest(center.x1) << ", " << shortest(center.x2) << ")\n";
  out << "argmax |value|: (" << shortest(peak.x1) << ", " << shortest(peak.x2) << "), distance "
      << sci(std::hypot(peak.x1 - center.x1, peak.x2 - center.x2)) << "\n";
  out << "90% mass radius: " << sci(loc.mass_radius) << "\n";
  return kExitOk;
}

template <class E>
E parse_enum(const std::string& s, const std::map<std::string, E>& names, const char* what) {
  const auto it = names.find(s);
  if (it == names.end()) throw ValidationError(std::string("unknown ") + what + " '" + s + "'");
  return it->second;
}

}  // namespace

void validate(const JobConfig& cfg) {
  if (cfg.level < 0 || cfg.level > kMaxLevel) {
    throw ValidationError("--level must lie in [0, " + std::to_string(kMaxLevel) + "], got " +
                          std::to_string(cfg.level));
  }
  if (cfg.grid < 2 || cfg.grid > kMaxGrid) {
    throw ValidationError("--grid must lie in [2, " + std::to_string(kMaxGrid) + "], got " + std::to_string(cfg.grid));
  }
  if (cfg.mask_points < 2) throw ValidationError("--points must be at least 2");
  for (double s : cfg.lattice.shift) {
    if (!(s >= 0.0 && s < 1.0)) throw ValidationError("--shift components must lie in [0, 1)");
  }
  for (double g : cfg.lattice.generator) {
    if (!std::isfinite(g)) throw ValidationError("--generator components must be finite");
  }
  if (cfg.tol && !(*cfg.tol > 0.0)) throw ValidationError("--tol must be positive");
}

std::filesystem::path output_path(const JobConfig& cfg, const std::string& default_name) {
  if (cfg.out) return *cfg.out;
  const char* dir = std::getenv("FRAMELET_DATA_DIR");
  return (dir && *dir ? std::filesystem::path(dir) : std::filesystem::current_path()) / default_name;
}

int run(const JobConfig& cfg, std::ostream& out) {
  validate(cfg);
  switch (cfg.command) {
    case Command::gen_lattice: return cmd_gen_lattice(cfg, out);
    case Command::transform: return cmd_transform(cfg, out);
    case Command::diagnostics: return cmd_diagnostics(cfg, out);
    case Command::sample: return cmd_sample(cfg, out);
  }
  return kExitFailure;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  JobConfig cfg;
  CLI::App app{"Tight framelets on the triangle: lattices, transforms, diagnostics and figure data"};
  app.require_subcommand(1);

  std::string strategy = "fold";
  std::string rules = "kronecker";
  std::vector<double> generator;
  std::vector<double> shift;
  std::string in;
  std::string out_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--level", cfg.level, "Level j (or top level J), at most 8");
    sub->add_option("--bank", cfg.bank, "Filter bank name or bank JSON file");
    sub->add_option("--generator", generator, "Lattice generator g1,g2")->expected(2)->delimiter(',');
    sub->add_option("--shift", shift, "Lattice shift s1,s2 in [0,1)")->expected(2)->delimiter(',');
    sub->add_option("--strategy", strategy, "Lattice strategy: fold or intersect");
    sub->add_option("--rules", rules, "Rule family: kronecker or gauss");
    sub->add_option("--out", out_path, "Output file (default: $FRAMELET_DATA_DIR or cwd)");
    sub->add_flag("--bit-repro", cfg.bit_repro, "Use the serial kernels");
  };

  auto* gen = app.add_subcommand("gen-lattice", "Write a quadrature rule and report its Gram deviation");
  add_common(gen);
  gen->add_flag("--skip-gram", cfg.skip_gram, "Do not compute the Gram deviation");

  auto* tr = app.add_subcommand("transform", "Multilevel decomposition and reconstruction");
  add_common(tr);
  tr->add_option("--in", in, "Spectral-vector or coefficient-tree JSON");
  tr->add_option("--random", cfg.random_seed, "Use a random spectrum of degree Lambda_J with this seed");
  tr->add_option("--tol", cfg.tol, "Round-trip tolerance (default 1e-9)");
  auto* dec = tr->add_flag("--decompose", "Emit the coefficient tree");
  auto* rec = tr->add_flag("--reconstruct", "Emit v_J from a coefficient tree");
  auto* rt = tr->add_flag("--roundtrip", "Decompose, reconstruct and report the residual");
  dec->excludes(rec)->excludes(rt);
  rec->excludes(rt);

  auto* diag = app.add_subcommand("diagnostics", "Mask, quadrature and Parseval diagnostics");
  add_common(diag);
  diag->add_option("--tol", cfg.tol, "Override every tolerance");
  diag->add_option("--random", cfg.random_seed, "Seed of the Parseval test function");
  diag->add_flag("--skip-gram", cfg.skip_gram, "Do not compute Gram deviations");

  auto* smp = app.add_subcommand("sample", "Framelet values on a grid, or mask curves, as CSV");
  add_common(smp);
  smp->add_option("--kind", cfg.kind, "low, high1, high2 or masks");
  smp->add_option("--node", cfg.node, "Translation node index (0-based)");
  smp->add_option("--grid", cfg.grid, "Grid points per axis, at most 2048");
  smp->add_option("--points", cfg.mask_points, "Mask samples on [0, 1/2]");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (gen->parsed()) cfg.command = Command::gen_lattice;
    if (tr->parsed()) cfg.command = Command::transform;
    if (diag->parsed()) cfg.command = Command::diagnostics;
    if (smp->parsed()) cfg.command = Command::sample;
    if (dec->count()) cfg.mode = TransformMode::decompose;
    if (rec->count()) cfg.mode = TransformMode::reconstruct;
    cfg.lattice.strategy = parse_enum<LatticeStrategy>(
        strategy, {{"fold", LatticeStrategy::fold}, {"intersect", LatticeStrategy::intersect}}, "strategy");
    cfg.rules = parse_enum<RuleFamily>(rules, {{"kronecker", RuleFamily::kronecker}, {"gauss", RuleFamily::gauss}},
                                       "rule family");
    if (!generator.empty()) cfg.lattice.generator = {generator[0], generator[1]};
    if (!shift.empty()) cfg.lattice.shift = {shift[0], shift[1]};
    if (!in.empty()) cfg.in = in;
    if (!out_path.empty()) cfg.out = out_path;
    return run(cfg, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const io::SchemaError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace framelet::cli
