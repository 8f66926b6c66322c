#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rekit/io.hpp"
#include "rekit/selftest.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitViolations = 3;

void emit(const rekit::io::ordered_json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw rekit::input_error("cannot open output file: " + out_path);
    out << j.dump(2) << "\n";
  }
}

void emit_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw rekit::input_error("cannot open output file: " + out_path);
    out << text;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rekit: effective reproduction number toolkit for next-generation matrices"};
  app.require_subcommand(1);

  std::string matrix_path, eta_path, costs_path, out_path, which = "conv", kernel_path,
      which_rule = "midpoint";
  double tol = 1e-8, budget = 0.0, norm_p = 2.0;
  int samples = 10000, grid = 200, max_iter = 500;
  std::uint64_t seed = 0;
  bool strict = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "write the report to a file instead of stdout");
    cmd->add_flag("--strict", strict, "exit with status 3 when violations are found");
  };

  auto* cmd_spectrum = app.add_subcommand("spectrum", "eigenvalues, radius and inertia");
  cmd_spectrum->add_option("--matrix", matrix_path, "matrix file (.json/.csv) or @builtin")->required();
  cmd_spectrum->add_option("--tol", tol, "eigenvector residual tolerance");
  add_common(cmd_spectrum);

  auto* cmd_re = app.add_subcommand("re", "effective reproduction number R_e(eta)");
  cmd_re->add_option("--matrix", matrix_path)->required();
  cmd_re->add_option("--eta", eta_path, "strategy file (.json/.csv)")->required();
  add_common(cmd_re);

  auto* cmd_classify = app.add_subcommand("classify", "convexity/concavity verdict");
  cmd_classify->add_option("--matrix", matrix_path)->required();
  cmd_classify->add_option("--samples", samples, "violation search samples");
  cmd_classify->add_option("--seed", seed);
  add_common(cmd_classify);

  auto* cmd_decomp = app.add_subcommand("decompose", "Frobenius atomic decomposition");
  cmd_decomp->add_option("--matrix", matrix_path)->required();
  add_common(cmd_decomp);

  auto* cmd_sym = app.add_subcommand("symmetrize", "diagonal symmetrizability certificate");
  cmd_sym->add_option("--matrix", matrix_path)->required();
  cmd_sym->add_option("--tol", tol, "support threshold relative to the max entry");
  add_common(cmd_sym);

  auto* cmd_opt = app.add_subcommand("optimize", "budget-constrained minimization of R_e");
  cmd_opt->add_option("--matrix", matrix_path)->required();
  cmd_opt->add_option("--budget", budget)->required();
  cmd_opt->add_option("--costs", costs_path, "cost weights file (defaults to matrix weights)");
  cmd_opt->add_option("--samples", samples, "shape classification samples");
  cmd_opt->add_option("--seed", seed);
  cmd_opt->add_option("--max-iter", max_iter);
  add_common(cmd_opt);

  std::string tabulated_path;
  auto* cmd_kernel = app.add_subcommand("kernel", "discretize an integral kernel");
  auto* spec_opt = cmd_kernel->add_option("--spec", kernel_path, "kernel parameter JSON");
  cmd_kernel->add_option("--tabulated", tabulated_path,
                         "m x m CSV of kernel values at the grid nodes")
      ->excludes(spec_opt);
  cmd_kernel->add_option("--grid", grid, "grid size (must match a tabulated kernel)")
      ->default_val(128);
  cmd_kernel->add_option("--rule", which_rule, "midpoint or trapezoid")
      ->check(CLI::IsMember({"midpoint", "trapezoid"}));
  cmd_kernel->add_option("--p", norm_p, "exponent for the double norm");
  add_common(cmd_kernel);

  auto* cmd_demo = app.add_subcommand(
      "demo-counterexample", "CSV of R_e over the plane eta1+eta2+eta3 = 1/3");
  cmd_demo->add_option("--which", which, "conv or conc")->check(CLI::IsMember({"conv", "conc"}));
  cmd_demo->add_option("--grid", grid, "points per axis")->default_val(200);
  add_common(cmd_demo);

  auto* cmd_selftest = app.add_subcommand("selftest", "run the built-in invariant battery");
  add_common(cmd_selftest);

  CLI11_PARSE(app, argc, argv);

  using rekit::io::envelope;
  using rekit::io::to_json;

  try {
    if (cmd_spectrum->parsed()) {
      const auto m = rekit::io::load_matrix(matrix_path);
      const auto s = rekit::spectrum(m, tol);
      auto j = to_json(s);
      j["inertia"] = to_json(rekit::inertia(s));
      emit(envelope("spectrum", j), out_path);
      return kExitOk;
    }

    if (cmd_re->parsed()) {
      const auto m = rekit::io::load_matrix(matrix_path);
      const auto eta = rekit::io::load_strategy(eta_path);
      emit(envelope("re", to_json(rekit::re(m, eta))), out_path);
      return kExitOk;
    }

    if (cmd_classify->parsed()) {
      const auto m = rekit::io::load_matrix(matrix_path);
      const auto verdict = rekit::classify_shape(m, samples, seed);
      emit(envelope("classify", to_json(verdict)), out_path);
      return (strict && verdict.classification == rekit::ShapeClass::violation_found)
                 ? kExitViolations
                 : kExitOk;
    }

    if (cmd_decomp->parsed()) {
      const auto m = rekit::io::load_matrix(matrix_path);
      auto j = to_json(rekit::atomic_decomposition(m));
      j["monatomic"] = to_json(rekit::is_monatomic(m));
      emit(envelope("decompose", j), out_path);
      return kExitOk;
    }

    if (cmd_sym->parsed()) {
      const auto m = rekit::io::load_matrix(matrix_path);
      emit(envelope("symmetrize", to_json(rekit::symmetrize(m, tol))), out_path);
      return kExitOk;
    }

    if (cmd_opt->parsed()) {
      auto m = rekit::io::load_matrix(matrix_path);
      std::optional<std::vector<double>> costs;
      if (!costs_path.empty()) costs = rekit::io::load_vector(costs_path);
      const rekit::BudgetProblem problem(m, budget, costs);
      const auto verdict = rekit::classify_shape(m, samples, seed);
      const auto result = rekit::minimize_re(problem, verdict, max_iter, seed);
      auto j = to_json(result);
      j["cost_model"] = "linear: sum c_i (1 - eta_i) <= budget";
      emit(envelope("optimize", j), out_path);
      return kExitOk;
    }

    if (cmd_kernel->parsed()) {
      rekit::io::ordered_json spec_json;
      if (!tabulated_path.empty()) {
        const auto values = rekit::io::load_matrix(tabulated_path);
        rekit::io::ordered_json rows = rekit::io::ordered_json::array();
        for (int i = 0; i < values.size(); ++i) {
          rekit::io::ordered_json row = rekit::io::ordered_json::array();
          for (int j = 0; j < values.size(); ++j) row.push_back(values(i, j));
          rows.push_back(row);
        }
        spec_json["tabulated"] = rows;
        spec_json["grid"] = values.size();
        spec_json["rule"] = which_rule;
      } else {
        if (kernel_path.empty())
          throw rekit::input_error("kernel needs either --spec or --tabulated");
        std::ifstream in(kernel_path);
        if (!in) throw rekit::input_error("cannot open kernel spec: " + kernel_path);
        try {
          spec_json = rekit::io::ordered_json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
          throw rekit::input_error(kernel_path + ": " + e.what());
        }
        if (!spec_json.contains("grid")) spec_json["grid"] = grid;
        if (!spec_json.contains("rule")) spec_json["rule"] = which_rule;
      }
      const auto bundle = rekit::io::kernel_from_json(spec_json);
      const auto m = rekit::discretize(bundle.kernel, bundle.grid);
      auto j = to_json(m);
      j["kernel"] = bundle.kernel.description;
      j["rule"] = bundle.grid.rule == rekit::QuadratureGrid::Rule::midpoint ? "midpoint" : "trapezoid";
      j["measure"] = "probability measure on [0,1]";
      j["spectral_radius"] = rekit::spectral_radius(m);
      j["double_norm_p"] = norm_p;
      j["double_norm"] = rekit::double_norm(bundle.kernel, norm_p, bundle.grid);
      emit(envelope("kernel", j), out_path);
      return kExitOk;
    }

    if (cmd_demo->parsed()) {
      const auto m = rekit::io::builtin_matrix(which == "conv" ? "counter-conv" : "counter-conc");
      std::string csv = "eta1,eta2,re\n";
      for (const auto& s : rekit::sample_simplex_plane(m, grid)) {
        csv += std::to_string(s.eta1);
        csv += ',';
        csv += std::to_string(s.eta2);
        csv += ',';
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.12g", s.value);
        csv += buf;
        csv += '\n';
      }
      emit_text(csv, out_path);
      return kExitOk;
    }

    if (cmd_selftest->parsed()) {
      const int failures = rekit::run_selftest(std::cout);
      if (failures == 0) return kExitOk;
      return strict ? kExitViolations : kExitNumerical;
    }
  } catch (const rekit::input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const rekit::numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}
