#include "framelet/io.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

namespace framelet::io {
namespace {

std::string join(const std::string& path, const std::string& key) { return path + "/" + key; }

const Json& require(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path.empty() ? "/" : path + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw SchemaError(join(path, key) + ": missing required field");
  return *it;
}

double as_number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path + ": expected a number");
  return j.get<double>();
}

int as_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path + ": expected an integer");
  return j.get<int>();
}

const Json& as_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path + ": expected an array");
  return j;
}

std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path + ": expected a string");
  return j.get<std::string>();
}

Json complex_array(std::span<const Complex> values) {
  Json out = Json::array();
  for (const auto& c : values) out.push_back({c.real(), c.imag()});
  return out;
}

std::vector<Complex> complex_from_json(const Json& j, const std::string& path) {
  as_array(j, path);
  std::vector<Complex> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = join(path, std::to_string(i));
    const auto& pair = as_array(j[i], p);
    if (pair.size() != 2) throw SchemaError(p + ": expected a [re, im] pair");
    out.emplace_back(as_number(pair[0], join(p, "0")), as_number(pair[1], join(p, "1")));
  }
  return out;
}

std::array<double, 2> pair_from_json(const Json& j, const std::string& path) {
  const auto& a = as_array(j, path);
  if (a.size() != 2) throw SchemaError(path + ": expected two numbers");
  return {as_number(a[0], join(path, "0")), as_number(a[1], join(path, "1"))};
}

const char* kind_name(SymbolBranch::Kind kind) {
  switch (kind) {
    case SymbolBranch::Kind::constant:
      return "constant";
    case SymbolBranch::Kind::cos_nu:
      return "cos_nu";
    case SymbolBranch::Kind::sin_nu:
      return "sin_nu";
    case SymbolBranch::Kind::cos_sq_nu:
      return "cos_sq_nu";
    case SymbolBranch::Kind::cos_sin_nu:
      return "cos_sin_nu";
  }
  return "constant";
}

SymbolBranch::Kind kind_from_name(const std::string& s, const std::string& path) {
  using K = SymbolBranch::Kind;
  for (K k : {K::constant, K::cos_nu, K::sin_nu, K::cos_sq_nu, K::cos_sin_nu}) {
    if (s == kind_name(k)) return k;
  }
  throw SchemaError(path + ": unknown branch kind '" + s + "'");
}

}  // namespace

Json to_json(const QuadratureRule& rule) {
  Json j;
  j["kind"] = to_string(rule.kind());
  j["level"] = rule.level() ? Json(*rule.level()) : Json(nullptr);
  if (const auto& p = rule.lattice()) {
    j["generator"] = {p->generator[0], p->generator[1]};
    j["shift"] = {p->shift[0], p->shift[1]};
    j["strategy"] = to_string(p->strategy);
  } else {
    j["generator"] = nullptr;
    j["shift"] = nullptr;
    j["strategy"] = nullptr;
  }
  if (rule.exact_degree()) j["degree"] = *rule.exact_degree();
  Json nodes = Json::array();
  for (const auto& x : rule.nodes()) nodes.push_back({x.x1, x.x2});
  j["nodes"] = std::move(nodes);
  j["weights"] = rule.weights();
  return j;
}

QuadratureRule rule_from_json(const Json& j) {
  RuleKind kind{};
  try {
    kind = rule_kind_from_string(as_string(require(j, "kind", ""), "/kind"));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("/kind: ") + e.what());
  }
  std::optional<int> level;
  if (const auto it = j.find("level"); it != j.end() && !it->is_null()) level = as_int(*it, "/level");

  std::optional<LatticeParams> lattice;
  if (const auto it = j.find("generator"); it != j.end() && !it->is_null()) {
    LatticeParams p;
    p.generator = pair_from_json(*it, "/generator");
    p.shift = pair_from_json(require(j, "shift", ""), "/shift");
    try {
      p.strategy = lattice_strategy_from_string(as_string(require(j, "strategy", ""), "/strategy"));
    } catch (const std::invalid_argument& e) {
      throw SchemaError(std::string("/strategy: ") + e.what());
    }
    lattice = p;
  }
  std::optional<int> degree;
  if (const auto it = j.find("degree"); it != j.end() && !it->is_null()) degree = as_int(*it, "/degree");

  const auto& jn = as_array(require(j, "nodes", ""), "/nodes");
  std::vector<SimplexPoint> nodes;
  nodes.reserve(jn.size());
  for (std::size_t k = 0; k < jn.size(); ++k) {
    const auto xy = pair_from_json(jn[k], "/nodes/" + std::to_string(k));
    nodes.push_back({xy[0], xy[1]});
  }
  const auto& jw = as_array(require(j, "weights", ""), "/weights");
  std::vector<double> weights;
  weights.reserve(jw.size());
  for (std::size_t k = 0; k < jw.size(); ++k) weights.push_back(as_number(jw[k], "/weights/" + std::to_string(k)));

  try {
    return QuadratureRule(std::move(nodes), std::move(weights), kind, level, lattice, degree);
  } catch (const std::exception& e) {
    throw SchemaError(std::string("rule: ") + e.what());
  }
}

Json to_json(const SpectralVector& v) {
  return {{"cutoff", v.cutoff()}, {"coeffs", complex_array(v.coeffs())}};
}

SpectralVector spectral_from_json(const Json& j, const std::string& path) {
  const int cutoff = as_int(require(j, "cutoff", path), join(path, "cutoff"));
  if (cutoff < 0) throw SchemaError(join(path, "cutoff") + ": must be nonnegative");
  auto coeffs = complex_from_json(require(j, "coeffs", path), join(path, "coeffs"));
  if (coeffs.size() != spectral_dim(cutoff)) {
    throw SchemaError(join(path, "coeffs") + ": expected " + std::to_string(spectral_dim(cutoff)) +
                      " entries for cutoff " + std::to_string(cutoff) + ", got " + std::to_string(coeffs.size()));
  }
  return SpectralVector(cutoff, std::move(coeffs));
}

Json to_json(const SpectralSymbol& s) {
  Json pieces = Json::array();
  for (const auto& p : s.pieces()) {
    Json jp{{"lo", p.lo},
            {"hi", p.hi},
            {"lo_closed", p.lo_closed},
            {"hi_closed", p.hi_closed},
            {"kind", kind_name(p.branch.kind)}};
    if (p.branch.kind == SymbolBranch::Kind::constant) {
      jp["value"] = p.branch.value;
    } else {
      jp["scale"] = p.branch.scale;
    }
    pieces.push_back(std::move(jp));
  }
  return {{"pieces", std::move(pieces)}};
}

SpectralSymbol symbol_from_json(const Json& j, const std::string& path) {
  const std::string pp = join(path, "pieces");
  const auto& jp = as_array(require(j, "pieces", path), pp);
  std::vector<SymbolPiece> pieces;
  for (std::size_t i = 0; i < jp.size(); ++i) {
    const std::string p = join(pp, std::to_string(i));
    SymbolPiece piece;
    piece.lo = as_number(require(jp[i], "lo", p), join(p, "lo"));
    piece.hi = as_number(require(jp[i], "hi", p), join(p, "hi"));
    piece.lo_closed = jp[i].value("lo_closed", true);
    piece.hi_closed = jp[i].value("hi_closed", true);
    piece.branch.kind = kind_from_name(as_string(require(jp[i], "kind", p), join(p, "kind")), join(p, "kind"));
    if (piece.branch.kind == SymbolBranch::Kind::constant) {
      piece.branch.value = as_number(require(jp[i], "value", p), join(p, "value"));
    } else {
      piece.branch.scale = as_number(require(jp[i], "scale", p), join(p, "scale"));
    }
    pieces.push_back(piece);
  }
  try {
    return SpectralSymbol(std::move(pieces));
  } catch (const std::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

Json to_json(const FilterBank& bank) {
  if (bank.name() == FilterBank::kShippedName) return {{"name", bank.name()}};
  Json highs = Json::array();
  Json scaling_highs = Json::array();
  for (int n = 0; n < bank.r(); ++n) {
    highs.push_back(to_json(bank.high(n)));
    scaling_highs.push_back(to_json(bank.scaling_high(n)));
  }
  return {{"name", bank.name()},
          {"r", bank.r()},
          {"low", to_json(bank.low())},
          {"highs", std::move(highs)},
          {"scaling_low", to_json(bank.scaling_low())},
          {"scaling_highs", std::move(scaling_highs)}};
}

FilterBank bank_from_json(const Json& j) {
  const std::string name = as_string(require(j, "name", ""), "/name");
  if (!j.contains("low")) {
    if (name == FilterBank::kShippedName) return FilterBank::dau2_simplex_r2();
    throw SchemaError("/name: unknown bank '" + name + "' and no pieces given");
  }
  auto low = symbol_from_json(require(j, "low", ""), "/low");
  auto scaling_low = symbol_from_json(require(j, "scaling_low", ""), "/scaling_low");
  const auto& jh = as_array(require(j, "highs", ""), "/highs");
  const auto& js = as_array(require(j, "scaling_highs", ""), "/scaling_highs");
  std::vector<SpectralSymbol> highs;
  std::vector<SpectralSymbol> scaling_highs;
  for (std::size_t i = 0; i < jh.size(); ++i) highs.push_back(symbol_from_json(jh[i], "/highs/" + std::to_string(i)));
  for (std::size_t i = 0; i < js.size(); ++i) {
    scaling_highs.push_back(symbol_from_json(js[i], "/scaling_highs/" + std::to_string(i)));
  }
  if (const auto it = j.find("r"); it != j.end() && as_int(*it, "/r") != static_cast<int>(highs.size())) {
    throw SchemaError("/r: does not match the number of high-pass symbols");
  }
  try {
    return FilterBank(name, std::move(low), std::move(highs), std::move(scaling_low), std::move(scaling_highs));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("bank: ") + e.what());
  }
}

Json to_json(const CoefficientSequence& seq) {
  Json j{{"level", seq.level}, {"rule_ref", seq.rule_ref}, {"v", complex_array(seq.values)}};
  j["spectral"] = seq.spectral ? to_json(*seq.spectral) : Json(nullptr);
  return j;
}

CoefficientSequence sequence_from_json(const Json& j, const std::string& path) {
  CoefficientSequence seq;
  seq.level = as_int(require(j, "level", path), join(path, "level"));
  if (seq.level < 0) throw SchemaError(join(path, "level") + ": must be nonnegative");
  seq.rule_ref = as_string(require(j, "rule_ref", path), join(path, "rule_ref"));
  seq.values = complex_from_json(require(j, "v", path), join(path, "v"));
  if (const auto it = j.find("spectral"); it != j.end() && !it->is_null()) {
    seq.spectral = spectral_from_json(*it, join(path, "spectral"));
  }
  return seq;
}

Json to_json(const CoefficientTree& tree, int r) {
  Json levels = Json::array();
  auto entry = [](const CoefficientSequence& seq, int j, const char* channel, int n) {
    Json e = to_json(seq);
    e["j"] = j;
    e["channel"] = channel;
    if (n > 0) e["n"] = n;
    return e;
  };
  levels.push_back(entry(tree.v0, 0, "low", 0));
  for (std::size_t j = 0; j < tree.high.size(); ++j) {
    for (std::size_t n = 0; n < tree.high[j].size(); ++n) {
      levels.push_back(entry(tree.high[j][n], static_cast<int>(j), "high", static_cast<int>(n) + 1));
    }
  }
  return {{"J", tree.top}, {"r", r}, {"levels", std::move(levels)}};
}

CoefficientTree tree_from_json(const Json& j) {
  CoefficientTree tree;
  tree.top = as_int(require(j, "J", ""), "/J");
  const int r = as_int(require(j, "r", ""), "/r");
  if (tree.top < 1) throw SchemaError("/J: must be >= 1");
  if (r < 1) throw SchemaError("/r: must be >= 1");
  const auto& levels = as_array(require(j, "levels", ""), "/levels");

  tree.high.assign(static_cast<std::size_t>(tree.top), std::vector<CoefficientSequence>(static_cast<std::size_t>(r)));
  std::vector<std::vector<bool>> seen(static_cast<std::size_t>(tree.top), std::vector<bool>(static_cast<std::size_t>(r)));
  bool have_low = false;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const std::string p = "/levels/" + std::to_string(i);
    const auto& e = levels[i];
    const int jj = as_int(require(e, "j", p), p + "/j");
    const std::string channel = as_string(require(e, "channel", p), p + "/channel");
    auto seq = sequence_from_json(e, p);
    if (channel == "low") {
      if (jj != 0 || have_low) throw SchemaError(p + ": exactly one low-pass entry at j = 0 is allowed");
      tree.v0 = std::move(seq);
      have_low = true;
    } else if (channel == "high") {
      const int n = as_int(require(e, "n", p), p + "/n");
      if (jj < 0 || jj >= tree.top) throw SchemaError(p + "/j: outside [0, J-1]");
      if (n < 1 || n > r) throw SchemaError(p + "/n: outside [1, r]");
      auto slot = seen[static_cast<std::size_t>(jj)][static_cast<std::size_t>(n - 1)];
      if (slot) throw SchemaError(p + ": duplicate high-pass entry");
      slot = true;
      tree.high[static_cast<std::size_t>(jj)][static_cast<std::size_t>(n - 1)] = std::move(seq);
    } else {
      throw SchemaError(p + "/channel: expected 'low' or 'high'");
    }
  }
  if (!have_low) throw SchemaError("/levels: missing the low-pass entry");
  for (std::size_t jj = 0; jj < seen.size(); ++jj) {
    for (std::size_t n = 0; n < seen[jj].size(); ++n) {
      if (!seen[jj][n]) {
        throw SchemaError("/levels: missing high-pass entry j=" + std::to_string(jj) + " n=" + std::to_string(n + 1));
      }
    }
  }
  return tree;
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError(e.what());
  }
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse(ss.str());
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

}  // namespace framelet::io
