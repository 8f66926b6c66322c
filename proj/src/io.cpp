#include "rekit/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace rekit::io {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// nlohmann reports byte offsets; convert for line/column diagnostics.
std::pair<int, int> offset_to_line_col(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

ordered_json parse_json(const std::string& text, const std::string& path) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = offset_to_line_col(text, e.byte);
    throw input_error(path + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": " + e.what());
  }
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<std::vector<double>> parse_csv(const std::string& text, const std::string& path) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    int col = 0;
    while (std::getline(ls, cell, ',')) {
      ++col;
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size()) throw std::invalid_argument("junk");
      } catch (const std::exception&) {
        throw input_error(path + ":" + std::to_string(lineno) + ":" + std::to_string(col) +
                          ": not a number: '" + cell + "'");
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> flatten_entries(const ordered_json& entries, int n) {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(n) * n);
  if (!entries.is_array()) throw input_error("'entries' must be an array");
  if (!entries.empty() && entries.front().is_array()) {
    for (const auto& row : entries)
      for (const auto& v : row) flat.push_back(v.get<double>());
  } else {
    for (const auto& v : entries) flat.push_back(v.get<double>());
  }
  if (flat.size() != static_cast<std::size_t>(n) * n)
    throw input_error("'entries' has " + std::to_string(flat.size()) + " values, expected " +
                      std::to_string(static_cast<std::size_t>(n) * n));
  return flat;
}

}  // namespace

NextGenMatrix matrix_from_json(const ordered_json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("entries"))
    throw input_error("matrix JSON must contain 'n' and 'entries'");
  const int n = j.at("n").get<int>();
  auto flat = flatten_entries(j.at("entries"), n);
  std::optional<std::vector<double>> weights;
  if (j.contains("weights") && !j.at("weights").is_null())
    weights = j.at("weights").get<std::vector<double>>();
  return NextGenMatrix(n, std::move(flat), std::move(weights));
}

NextGenMatrix builtin_matrix(const std::string& name) {
  if (name == "counter-conv")
    return NextGenMatrix::from_rows({{16, 12, 11}, {1, 12, 12}, {8, 1, 1}});
  if (name == "counter-conc")
    return NextGenMatrix::from_rows({{9, 13, 14}, {18, 6, 5}, {1, 6, 6}});
  if (name == "friedland")
    return NextGenMatrix::from_rows({{3, 2, 0}, {2, 2, 1}, {0, 1, 4}});
  throw input_error("unknown builtin matrix '@" + name +
                    "' (available: counter-conv, counter-conc, friedland)");
}

NextGenMatrix load_matrix(const std::string& path) {
  if (!path.empty() && path[0] == '@') return builtin_matrix(path.substr(1));
  const std::string text = read_file(path);
  if (ends_with(path, ".json")) return matrix_from_json(parse_json(text, path));
  const auto rows = parse_csv(text, path);
  if (rows.empty()) throw input_error(path + ": empty matrix");
  return NextGenMatrix::from_rows(rows);
}

std::vector<double> load_vector(const std::string& path) {
  const std::string text = read_file(path);
  if (ends_with(path, ".json")) {
    const auto j = parse_json(text, path);
    if (j.is_array()) return j.get<std::vector<double>>();
    if (j.is_object() && j.contains("eta")) return j.at("eta").get<std::vector<double>>();
    if (j.is_object() && j.contains("values")) return j.at("values").get<std::vector<double>>();
    throw input_error(path + ": vector JSON must be an array or contain 'eta'/'values'");
  }
  const auto rows = parse_csv(text, path);
  std::vector<double> v;
  for (const auto& r : rows) v.insert(v.end(), r.begin(), r.end());
  return v;
}

Strategy load_strategy(const std::string& path) { return Strategy(load_vector(path)); }

namespace {

std::function<double(double)> profile_from_json(const ordered_json& j, const std::string& what) {
  if (j.is_number()) {
    const double c = j.get<double>();
    return [c](double) { return c; };
  }
  if (!j.is_object() || !j.contains("type"))
    throw input_error("profile '" + what + "' must be a number or {\"type\": ...}");
  const std::string type = j.at("type").get<std::string>();
  if (type == "constant") {
    const double c = j.at("value").get<double>();
    return [c](double) { return c; };
  }
  if (type == "affine") {
    const double a = j.value("intercept", 0.0), b = j.value("slope", 0.0);
    return [a, b](double x) { return a + b * x; };
  }
  if (type == "power") {
    const double s = j.value("scale", 1.0), e = j.at("exponent").get<double>();
    return [s, e](double x) { return s * std::pow(x, e); };
  }
  throw input_error("unknown profile type '" + type + "' for '" + what + "'");
}

std::function<double(double, double)> graphon_from_json(const ordered_json& j) {
  if (j.is_number()) {
    const double c = j.get<double>();
    return [c](double, double) { return c; };
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "constant") {
    const double c = j.at("value").get<double>();
    return [c](double, double) { return c; };
  }
  if (type == "product") return [](double x, double y) { return x * y; };
  if (type == "min") return [](double x, double y) { return std::min(x, y); };
  if (type == "sbm") {
    // Stochastic block model: cut points + symmetric rate matrix.
    auto cuts = j.at("cuts").get<std::vector<double>>();
    auto rates = j.at("rates").get<std::vector<std::vector<double>>>();
    const std::size_t blocks = cuts.size() + 1;
    if (rates.size() != blocks) throw input_error("sbm rates must be (cuts+1) x (cuts+1)");
    for (const auto& row : rates)
      if (row.size() != blocks) throw input_error("sbm rates must be square");
    auto block_of = [cuts](double x) {
      std::size_t b = 0;
      while (b < cuts.size() && x >= cuts[b]) ++b;
      return b;
    };
    return [block_of, rates](double x, double y) { return rates[block_of(x)][block_of(y)]; };
  }
  throw input_error("unknown graphon type '" + type + "'");
}

}  // namespace

KernelBundle kernel_from_json(const ordered_json& j, int default_grid) {
  const int m = j.value("grid", default_grid);
  const std::string rule = j.value("rule", std::string("midpoint"));
  QuadratureGrid grid = (rule == "trapezoid") ? QuadratureGrid::trapezoid(m)
                        : (rule == "midpoint")
                            ? QuadratureGrid::midpoint(m)
                            : throw input_error("unknown quadrature rule '" + rule + "'");

  if (j.contains("tabulated")) {
    auto values = j.at("tabulated").get<std::vector<std::vector<double>>>();
    const int k = static_cast<int>(values.size());
    if (k != grid.size())
      throw input_error("tabulated kernel is " + std::to_string(k) + "x" + std::to_string(k) +
                        " but the grid descriptor has " + std::to_string(grid.size()) + " nodes");
    for (const auto& row : values)
      if (static_cast<int>(row.size()) != k) throw input_error("tabulated kernel must be square");
    auto nodes = grid.nodes;
    auto nearest = [nodes](double x) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < nodes.size(); ++i)
        if (std::abs(nodes[i] - x) < std::abs(nodes[best] - x)) best = i;
      return best;
    };
    KernelSpec spec{[values, nearest](double x, double y) { return values[nearest(x)][nearest(y)]; },
                    "tabulated"};
    return {spec, grid};
  }

  const std::string family = j.value("family", std::string());
  if (family == "graphon-sis") {
    GraphonSISParams params;
    params.beta = profile_from_json(j.value("beta", ordered_json(1.0)), "beta");
    params.theta = profile_from_json(j.value("theta", ordered_json(1.0)), "theta");
    params.gamma = profile_from_json(j.value("gamma", ordered_json(1.0)), "gamma");
    params.W = graphon_from_json(j.value("W", ordered_json({{"type", "constant"}, {"value", 1.0}})));
    return {params.kernel(), grid};
  }
  if (family == "configuration") {
    ConfigurationKernel ck;
    ck.f = profile_from_json(j.value("f", ordered_json(1.0)), "f");
    ck.g = profile_from_json(j.value("g", ordered_json(1.0)), "g");
    return {ck.kernel(), grid};
  }
  if (family == "constant") {
    const double c = j.value("value", 1.0);
    return {KernelSpec{[c](double, double) { return c; }, "constant"}, grid};
  }
  throw input_error("kernel JSON needs 'family' (graphon-sis, configuration, constant) "
                    "or 'tabulated'");
}

ordered_json to_json(const Spectrum& s) {
  ordered_json eigs = ordered_json::array();
  for (const auto& e : s.eigenvalues)
    eigs.push_back({{"re", e.value.real()}, {"im", e.value.imag()}, {"multiplicity", e.multiplicity}});
  return {{"dimension", s.dimension},
          {"cluster_radius", s.cluster_radius},
          {"radius", s.radius()},
          {"eigenvalues", eigs}};
}

ordered_json to_json(const Inertia& in) {
  return {{"positive", in.positive_count}, {"negative", in.negative_count}, {"zero", in.zero_count}};
}

ordered_json to_json(const PerronPair& pp) {
  return {{"radius", pp.radius}, {"right", pp.right}, {"left", pp.left}};
}

ordered_json to_json(const NextGenMatrix& m) {
  return {{"n", m.size()}, {"entries", m.entries()}, {"weights", m.weights()}};
}

ordered_json to_json(const SymmetrizationCertificate& c) {
  return {{"status", "certified"}, {"d", c.d}, {"residual", c.residual}};
}

ordered_json to_json(const SymmetrizeResult& r) {
  if (is_certificate(r)) return to_json(std::get<SymmetrizationCertificate>(r));
  const auto& obs = std::get<SymmetrizationObstruction>(r);
  ordered_json j{{"status", "obstructed"},
                 {"kind", obs.kind == SymmetrizationObstruction::Kind::zero_pattern_asymmetry
                              ? "zero-pattern-asymmetry"
                              : "cycle-inconsistency"},
                 {"witness", obs.witness}};
  if (obs.kind == SymmetrizationObstruction::Kind::cycle_inconsistency)
    j["ratio_product"] = obs.ratio_product;
  return j;
}

ordered_json to_json(const ReReport& r) {
  return {{"value", r.value},
          {"r0", r.r0},
          {"effective_spectrum", to_json(r.effective_spectrum)}};
}

ordered_json to_json(const PropertyReport& r) {
  ordered_json v = ordered_json::array();
  for (const auto& x : r.violations)
    v.push_back({{"trial", x.trial}, {"property", x.property}, {"lhs", x.lhs}, {"rhs", x.rhs}});
  return {{"trials", r.trials}, {"ok", r.ok()}, {"violations", v}};
}

ordered_json to_json(const InvarianceReport& r) {
  return {{"conjugation_ok", r.conjugation_ok},
          {"transpose_ok", r.transpose_ok},
          {"multiplier_swap_ok", r.multiplier_swap_ok},
          {"max_deviation", r.max_deviation},
          {"ok", r.ok()}};
}

ordered_json to_json(const AtomDecomposition& d) {
  return {{"components", d.components},
          {"nonzero_atoms", d.nonzero_atoms},
          {"block_radii", d.block_radii},
          {"residual", d.residual}};
}

ordered_json to_json(const MonatomicEvidence& e) {
  ordered_json j{{"monatomic", e.monatomic}, {"nonzero_atom_count", e.nonzero_atom_count}};
  if (e.atom) j["atom"] = *e.atom;
  if (e.r0_multiplicity) j["r0_multiplicity"] = *e.r0_multiplicity;
  j["reachable_from_atom"] = e.reachable_from_atom;
  return j;
}

ordered_json to_json(const ShapeViolation& v) {
  return {{"mode", v.mode == ViolationMode::convexity ? "convexity" : "concavity"},
          {"eta0", v.eta0.values()},
          {"eta1", v.eta1.values()},
          {"theta", v.theta},
          {"gap", v.gap},
          {"sample_index", v.sample_index}};
}

std::string shape_class_name(ShapeClass c) {
  switch (c) {
    case ShapeClass::convex_certified: return "convex-certified";
    case ShapeClass::concave_certified: return "concave-certified";
    case ShapeClass::linear_certified: return "linear-certified";
    case ShapeClass::violation_found: return "violation-found";
    case ShapeClass::inconclusive: return "inconclusive";
  }
  return "?";
}

std::string method_name(OptimMethod m) {
  switch (m) {
    case OptimMethod::gradient: return "gradient";
    case OptimMethod::vertex_search: return "vertex-search";
    case OptimMethod::grid_fallback: return "grid-fallback";
  }
  return "?";
}

ordered_json to_json(const ShapeVerdict& v) {
  ordered_json j{{"classification", shape_class_name(v.classification)}};
  if (v.certificate) j["certificate"] = to_json(*v.certificate);
  if (v.spectrum_inertia) j["inertia"] = to_json(*v.spectrum_inertia);
  ordered_json viols = ordered_json::array();
  for (const auto& w : v.violations) viols.push_back(to_json(w));
  j["violations"] = viols;
  return j;
}

ordered_json to_json(const SecondDerivativeReport& r) {
  ordered_json terms = ordered_json::array();
  for (const auto& [lambda, coeff] : r.terms)
    terms.push_back({{"lambda", lambda}, {"coefficient", coeff}});
  return {{"alpha", r.alpha},       {"r_alpha", r.r_alpha},   {"r_second", r.r_second},
          {"terms", terms},         {"fd_estimate", r.fd_estimate},
          {"fd_step", r.fd_step}};
}

ordered_json to_json(const OptimizationResult& r) {
  return {{"eta_star", r.eta_star.values()},
          {"value", r.value},
          {"method", method_name(r.method)},
          {"iterations", r.iterations},
          {"certificate_used", shape_class_name(r.certificate_used)},
          {"converged", r.converged},
          {"optimality_claimed", r.optimality_claimed},
          {"subgradient_fallback", r.subgradient_fallback}};
}

ordered_json envelope(const std::string& kind, ordered_json payload) {
  ordered_json j{{"schema_version", kSchemaVersion}, {"kind", kind}};
  j["report"] = std::move(payload);
  return j;
}

}  // namespace rekit::io
