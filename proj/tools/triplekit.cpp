// triplekit command-line tool: factor inspection, tripotent predicates,
// triple-isomorphism reconstruction, a Lorentz boost demo, and the
// self-test suites. All structured output is JSON with complex numbers as
// [re, im]; exit codes are 0 = pass, 1 = fail, 2 = input error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "triplekit/selftest.hpp"

namespace tk = triplekit;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

// Thrown for malformed command input (bad JSON, bad flags); maps to exit 2.
struct input_error : tk::error {
  using tk::error::error;
};

// Parse an argument that is either inline JSON or a path to a JSON file.
tk::json load_spec(const std::string& arg) {
  try {
    if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) return tk::json::parse(arg);
    return tk::load_json(arg);
  } catch (const tk::json::parse_error& e) {
    throw input_error(std::string("malformed JSON: ") + e.what());
  } catch (const tk::structure_error& e) {
    throw input_error(e.what());
  }
}

tk::FactorDescriptor factor_from_arg(const std::string& arg) {
  try {
    return tk::factor_from_json(load_spec(arg));
  } catch (const tk::structure_error& e) {
    throw input_error(e.what());
  }
}

tk::Element element_from_file(const std::string& path) {
  try {
    return tk::element_from_json(load_spec(path));
  } catch (const tk::structure_error& e) {
    throw input_error(std::string(e.what()) + " (" + path + ")");
  } catch (const tk::shape_error& e) {
    throw input_error(std::string(e.what()) + " (" + path + ")");
  }
}

std::string fmt_complex(tk::cplx z) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g%+.6gi", z.real(), z.imag());
  return buf;
}

void print_matrix(std::ostream& os, const tk::Matrix& m, const std::string& indent = "  ") {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << indent << "[";
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      os << (j ? "  " : " ") << fmt_complex(m(i, j));
    os << " ]\n";
  }
}

void write_report(const std::string& out_path, const tk::json& j) {
  if (!out_path.empty()) tk::save_json(out_path, j);
}

struct CommonFlags {
  tk::RunConfig cfg;
  std::string out_path;

  void attach(CLI::App* cmd) {
    cmd->add_option("--seed", cfg.seed, "master RNG seed")
        ->envname("TRIPLEKIT_SEED")
        ->capture_default_str();
    cmd->add_option("--tol-abs", cfg.tol_abs, "absolute tolerance")->capture_default_str();
    cmd->add_option("--tol-rel", cfg.tol_rel, "relative tolerance")->capture_default_str();
    cmd->add_option("--samples", cfg.samples, "override per-suite sample counts (0 = defaults)");
    cmd->add_option("--out", out_path, "write a JSON report to this file");
  }
};

// ---------------------------------------------------------------------------
// factor-info

int run_factor_info(const std::string& spec, const CommonFlags& flags) {
  tk::FactorDescriptor f = factor_from_arg(spec);
  std::cout << "factor:            " << f.describe() << "\n";
  std::cout << "complex dimension: " << f.complex_dim() << "\n";
  std::cout << "rank:              " << f.rank() << "\n";
  std::cout << "unitary tripotent: " << (f.has_unitary() ? "yes" : "no") << "\n";
  write_report(flags.out_path, tk::json{{"factor", tk::factor_to_json(f)},
                                        {"describe", f.describe()},
                                        {"complex_dim", f.complex_dim()},
                                        {"rank", f.rank()},
                                        {"has_unitary", f.has_unitary()}});
  return kExitPass;
}

// ---------------------------------------------------------------------------
// check

int run_check(const std::string& predicate, const std::vector<std::string>& files,
              const CommonFlags& flags) {
  const tk::Tolerance tol = flags.cfg.tol();
  auto need = [&](size_t n) {
    if (files.size() != n)
      throw input_error("predicate " + predicate + " needs " + std::to_string(n) +
                        " element file(s), got " + std::to_string(files.size()));
  };
  std::vector<tk::Element> xs;
  for (const auto& p : files) xs.push_back(element_from_file(p));

  bool pass = false;
  tk::json report{{"predicate", predicate}};
  if (predicate == "is-tripotent") {
    need(1);
    double res = tk::tripotent_residual(xs[0]);
    pass = tk::is_tripotent(xs[0], tol);
    report["residual"] = res;
    std::cout << (pass ? "tripotent" : "not a tripotent") << " (residual " << res << ")\n";
  } else if (predicate == "is-orthogonal") {
    need(2);
    pass = tk::is_orthogonal(xs[0], xs[1], tol);
    std::cout << (pass ? "orthogonal" : "not orthogonal") << "\n";
  } else if (predicate == "leq") {
    need(2);
    pass = tk::leq(xs[0], xs[1], tol);
    std::cout << (pass ? "first <= second" : "not ordered") << "\n";
  } else if (predicate == "classify") {
    need(1);
    if (!tk::is_tripotent(xs[0], tol)) {
      std::cout << "not a tripotent (residual " << tk::tripotent_residual(xs[0]) << ")\n";
      report["ok"] = false;
      write_report(flags.out_path, report);
      return kExitFail;
    }
    tk::Classification c = tk::classify(xs[0], tol);
    std::cout << "category: " << tk::to_string(c.category) << "\n"
              << "rank:     " << c.rank << "\n"
              << "peirce:   d2=" << c.dims[0] << " d1=" << c.dims[1] << " d0=" << c.dims[2]
              << "\n"
              << "minimal=" << (c.minimal ? "yes" : "no")
              << " complete=" << (c.complete ? "yes" : "no")
              << " unitary=" << (c.unitary ? "yes" : "no") << "\n";
    report["classification"] = tk::classification_to_json(c);
    pass = true;
  } else if (predicate == "is-quadrangle") {
    need(4);
    pass = tk::is_quadrangle(xs[0], xs[1], xs[2], xs[3], tol);
    std::cout << (pass ? "quadrangle" : "not a quadrangle") << "\n";
  } else if (predicate == "is-trangle") {
    need(3);
    pass = tk::is_trangle(xs[0], xs[1], xs[2], tol);
    std::cout << (pass ? "trangle" : "not a trangle") << "\n";
  } else {
    throw input_error("unknown predicate " + predicate +
                      " (expected is-tripotent, is-orthogonal, leq, classify, is-quadrangle, "
                      "is-trangle)");
  }
  report["ok"] = pass;
  write_report(flags.out_path, report);
  return pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// reconstruct

tk::RealLinearMap map_from_recipe(const tk::json& recipe) {
  const std::string kind = recipe.at("recipe").get<std::string>();
  if (kind == "spin-rotation") {
    int d = recipe.at("dim").get<int>();
    tk::cplx lambda0 =
        recipe.contains("lambda0") ? tk::complex_from_json(recipe["lambda0"]) : tk::cplx{1, 0};
    double mod = std::abs(lambda0);
    if (mod < 1e-12) throw input_error("recipe: lambda0 must be nonzero");
    tk::Branch branch = recipe.contains("branch") ? tk::branch_from_json(recipe["branch"])
                                                  : tk::Branch::linear;
    return tk::spin_rotation_map(d, lambda0 / mod, recipe.value("seed", std::uint64_t{0}),
                                 branch);
  }
  if (kind == "rect-product") {
    int m = recipe.at("m").get<int>();
    int n = recipe.at("n").get<int>();
    int form = recipe.value("form", 1);
    if (form < 1 || form > 4) throw input_error("recipe: form must be 1..4");
    return tk::rect_product_map(m, n, recipe.value("seed", std::uint64_t{0}),
                                static_cast<tk::RectForm>(form));
  }
  if (kind == "sum-routing") {
    std::vector<int> sigma = recipe.at("sigma").get<std::vector<int>>();
    std::vector<tk::RealLinearMap> comps;
    std::vector<tk::FactorDescriptor> dcomps;
    for (const auto& c : recipe.at("components")) {
      comps.push_back(map_from_recipe(c));
      dcomps.push_back(comps.back().domain);
    }
    return tk::sum_routing_map(tk::FactorDescriptor::sum(dcomps), sigma, comps);
  }
  throw input_error("unknown recipe \"" + kind + "\"");
}

int run_reconstruct(const std::string& factor_spec, const std::string& oracle_spec,
                    double threshold, const CommonFlags& flags) {
  const tk::Tolerance tol = flags.cfg.tol();
  tk::FactorDescriptor domain = factor_from_arg(factor_spec);
  tk::json ospec = load_spec(oracle_spec);

  std::optional<tk::TripotentOracle> oracle;
  try {
    if (ospec.is_array()) {
      // A bare table file: domain/target inferred from the first entry.
      auto entries = tk::oracle_table_from_json(ospec);
      oracle.emplace(tk::make_table_oracle(entries.front().first.factor(),
                                           entries.front().second.factor(), entries, tol));
    } else if (ospec.contains("table")) {
      auto entries = tk::oracle_table_from_json(tk::load_json(ospec["table"].get<std::string>()));
      oracle.emplace(tk::make_table_oracle(entries.front().first.factor(),
                                           entries.front().second.factor(), entries, tol));
    } else {
      oracle.emplace(tk::make_oracle(map_from_recipe(ospec), tol));
    }
  } catch (const tk::structure_error& e) {
    throw input_error(e.what());
  }
  if (oracle->domain() != domain)
    throw input_error("oracle domain " + oracle->domain().describe() +
                      " does not match --factor " + domain.describe());

  const int samples = flags.cfg.samples > 0 ? flags.cfg.samples : 300;
  tk::ReconstructionReport rep;
  switch (domain.kind()) {
    case tk::FactorKind::spin:
      rep = tk::reconstruct_spin(*oracle, tol, samples, flags.cfg.seed);
      break;
    case tk::FactorKind::rect:
      rep = tk::reconstruct_rectangular(*oracle, tol, samples, flags.cfg.seed);
      break;
    case tk::FactorKind::sum:
      rep = tk::reconstruct_atomic(*oracle, tol, samples, flags.cfg.seed);
      break;
    default:
      throw input_error("reconstruction supports spin, rect, and sum factors (got " +
                        domain.describe() + ")");
  }
  tk::ExtensionReport ext = tk::verify_extension(rep.map, *oracle, samples, flags.cfg.seed + 1, tol);

  double worst = std::max(rep.max_residual, ext.max_tripotent_residual);
  bool pass = worst <= threshold;
  std::cout << "branch:        " << tk::to_string(rep.branch) << "\n";
  std::cout << "lambda0:       " << fmt_complex(rep.lambda0) << "\n";
  if (rep.sigma.size() > 1) {
    std::cout << "routing:       [";
    for (size_t i = 0; i < rep.sigma.size(); ++i) std::cout << (i ? " " : "") << rep.sigma[i];
    std::cout << "]\n";
  }
  for (const auto& b : rep.blocks)
    if (b.product_form != 0) std::cout << "form:          " << b.product_form << "\n";
  std::cout << "max residual:  " << worst << " over " << rep.n_samples + ext.n_samples
            << " samples\n";
  std::cout << (pass ? "PASS" : "FAIL") << " (threshold " << threshold << ")\n";

  tk::json report = tk::reconstruction_report_to_json(rep);
  report["extension"] = tk::extension_report_to_json(ext);
  report["threshold"] = threshold;
  report["ok"] = pass;
  write_report(flags.out_path, report);
  return pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// demo lorentz

int run_demo_lorentz(double rapidity, const std::string& axis_arg,
                     const std::string& direction_arg, const CommonFlags& flags) {
  int axis = 0;
  if (axis_arg == "x" || axis_arg == "1") axis = 1;
  else if (axis_arg == "y" || axis_arg == "2") axis = 2;
  else if (axis_arg == "z" || axis_arg == "3") axis = 3;
  else throw input_error("axis must be one of x, y, z (or 1, 2, 3)");

  Eigen::Vector3d b;
  if (std::sscanf(direction_arg.c_str(), "%lf,%lf,%lf", &b(0), &b(1), &b(2)) != 3)
    throw input_error("direction must be three comma-separated reals, e.g. 0,0,1");
  if (std::abs(b.norm() - 1.0) > 1e-6)
    throw input_error("direction must be a unit vector (|b| = " + std::to_string(b.norm()) + ")");

  const tk::Tolerance tol = flags.cfg.tol();
  tk::Element state = tk::spin_state(b);
  tk::Element boosted = tk::lorentz_boost(state, rapidity, axis);
  tk::Element polar = tk::polar_tripotent_part(boosted, tol);
  tk::cplx det_before = tk::spin_determinant(state);
  tk::cplx det_after = tk::spin_determinant(boosted);
  bool trip_before = tk::is_tripotent(state, tol);
  bool trip_after = tk::is_tripotent(boosted, tol);
  bool trip_polar = tk::is_tripotent(polar, tol);

  std::cout << "spin state for direction (" << b(0) << ", " << b(1) << ", " << b(2) << "):\n";
  print_matrix(std::cout, tk::matrix_rep(state));
  std::cout << "boost: rapidity " << rapidity << " along axis " << axis_arg << "\n";
  std::cout << "boosted state:\n";
  print_matrix(std::cout, tk::matrix_rep(boosted));
  std::cout << "det before: " << fmt_complex(det_before)
            << "   det after: " << fmt_complex(det_after) << "\n";
  std::cout << "tripotent before: " << (trip_before ? "yes" : "no")
            << "   after: " << (trip_after ? "yes" : "no") << "\n";
  std::cout << "polar tripotent part:\n";
  print_matrix(std::cout, tk::matrix_rep(polar));
  std::cout << "polar part tripotent: " << (trip_polar ? "yes" : "no") << "\n";

  write_report(flags.out_path,
               tk::json{{"direction", {b(0), b(1), b(2)}},
                        {"rapidity", rapidity},
                        {"axis", axis},
                        {"state", tk::element_to_json(state)},
                        {"state_matrix", tk::matrix_to_json(tk::matrix_rep(state))},
                        {"boosted", tk::element_to_json(boosted)},
                        {"boosted_matrix", tk::matrix_to_json(tk::matrix_rep(boosted))},
                        {"det_before", tk::complex_to_json(det_before)},
                        {"det_after", tk::complex_to_json(det_after)},
                        {"tripotent_before", trip_before},
                        {"tripotent_after", trip_after},
                        {"polar", tk::element_to_json(polar)},
                        {"polar_matrix", tk::matrix_to_json(tk::matrix_rep(polar))},
                        {"polar_tripotent", trip_polar}});
  return kExitPass;
}

// ---------------------------------------------------------------------------
// selftest

int run_selftest(const CommonFlags& flags) {
  std::vector<tk::SuiteResult> results = tk::run_acceptance_suites(flags.cfg);
  tk::print_suite_results(std::cout, results);
  bool ok = tk::all_ok(results);
  std::cout << (ok ? "all suites passed" : "some suites FAILED") << "\n";
  write_report(flags.out_path, tk::selftest_report_to_json(results));
  return ok ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cartan factors, tripotent calculus, and reconstruction of triple isomorphisms"};
  app.require_subcommand(1);
  int rc = kExitPass;

  // factor-info
  auto* info_cmd = app.add_subcommand("factor-info", "describe a factor given a JSON spec");
  auto info_flags = std::make_shared<CommonFlags>();
  auto info_spec = std::make_shared<std::string>();
  info_cmd->add_option("spec", *info_spec, "factor spec (inline JSON or a file path)")->required();
  info_flags->attach(info_cmd);
  info_cmd->callback([&rc, info_spec, info_flags] { rc = run_factor_info(*info_spec, *info_flags); });

  // check
  auto* check_cmd = app.add_subcommand("check", "run a tripotent predicate on element files");
  auto check_flags = std::make_shared<CommonFlags>();
  auto check_pred = std::make_shared<std::string>();
  auto check_files = std::make_shared<std::vector<std::string>>();
  check_cmd->add_option("predicate", *check_pred,
                        "is-tripotent | is-orthogonal | leq | classify | is-quadrangle | is-trangle")
      ->required();
  check_cmd->add_option("elements", *check_files, "element JSON files")->expected(1, 4);
  check_flags->attach(check_cmd);
  check_cmd->callback(
      [&rc, check_pred, check_files, check_flags] { rc = run_check(*check_pred, *check_files, *check_flags); });

  // reconstruct
  auto* rec_cmd = app.add_subcommand("reconstruct",
                                     "reconstruct a real-linear triple isomorphism from an oracle");
  auto rec_flags = std::make_shared<CommonFlags>();
  auto rec_factor = std::make_shared<std::string>();
  auto rec_oracle = std::make_shared<std::string>();
  auto rec_threshold = std::make_shared<double>(1e-8);
  rec_cmd->add_option("--factor", *rec_factor, "domain factor spec (inline JSON or file)")
      ->required();
  rec_cmd->add_option("--oracle", *rec_oracle,
                      "oracle spec: a recipe JSON, a table file, or {\"table\": path}")
      ->required();
  rec_cmd->add_option("--threshold", *rec_threshold, "pass/fail residual threshold")
      ->capture_default_str();
  rec_flags->attach(rec_cmd);
  rec_cmd->callback([&rc, rec_factor, rec_oracle, rec_threshold, rec_flags] {
    rc = run_reconstruct(*rec_factor, *rec_oracle, *rec_threshold, *rec_flags);
  });

  // demo lorentz
  auto* demo_cmd = app.add_subcommand("demo", "worked demonstrations");
  demo_cmd->require_subcommand(1);
  auto* lorentz_cmd = demo_cmd->add_subcommand("lorentz", "boost a spin state and repair it");
  auto lor_flags = std::make_shared<CommonFlags>();
  auto lor_rapidity = std::make_shared<double>(0.5);
  auto lor_axis = std::make_shared<std::string>("z");
  auto lor_dir = std::make_shared<std::string>("0,0,1");
  lorentz_cmd->add_option("--rapidity", *lor_rapidity, "boost rapidity")->capture_default_str();
  lorentz_cmd->add_option("--axis", *lor_axis, "boost axis: x, y, or z")->capture_default_str();
  lorentz_cmd->add_option("--direction", *lor_dir, "spin direction b as bx,by,bz")
      ->capture_default_str();
  lor_flags->attach(lorentz_cmd);
  lorentz_cmd->callback([&rc, lor_rapidity, lor_axis, lor_dir, lor_flags] {
    rc = run_demo_lorentz(*lor_rapidity, *lor_axis, *lor_dir, *lor_flags);
  });

  // selftest
  auto* self_cmd = app.add_subcommand("selftest", "run the full acceptance suites");
  auto self_flags = std::make_shared<CommonFlags>();
  self_flags->attach(self_cmd);
  self_cmd->callback([&rc, self_flags] { rc = run_selftest(*self_flags); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInput;
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const tk::shape_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const tk::precondition_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const tk::error& e) {
    // Structure and degeneracy failures: the computation ran and rejected.
    std::cerr << "failed: " << e.what() << "\n";
    return kExitFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return rc;
}
