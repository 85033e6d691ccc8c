#include "monolab/errors.hpp"
#include "monolab/fibercut.hpp"
#include "monolab/geometry.hpp"
#include "monolab/io.hpp"
#include "monolab/vlab.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

using namespace monolab;

constexpr const char* kVersion = "monolab 0.1.0";

struct Report {
  std::ostringstream body;

  Report(const std::string& command, const std::vector<std::string>& config) {
    body << "# " << kVersion << "\n";
    body << "# command: " << command << "\n";
    for (const auto& line : config) body << "# config: " << line << "\n";
  }
  template <typename T>
  Report& operator<<(const T& value) {
    body << value;
    return *this;
  }
  void deliver(const std::string& out_path) const {
    if (out_path.empty())
      std::cout << body.str();
    else
      write_text_file(out_path, body.str());
  }
};

std::string selector_string(const Quadrant& q) {
  std::string s;
  for (auto sel : q.selectors)
    s += sel == Selector::Zero ? 'Z' : (sel == Selector::Positive ? 'P' : 'N');
  return s;
}

std::string radius_string(const std::vector<Rational>& radius) {
  std::string s;
  for (std::size_t v = 0; v < radius.size(); ++v) {
    if (v) s += " ";
    s += format_rational(radius[v]);
  }
  return s;
}

std::vector<GenSeries> load_series(const std::vector<std::string>& paths) {
  std::vector<GenSeries> series;
  for (const auto& path : paths) series.push_back(parse_series_file(path));
  return series;
}

void describe_status(Report& report, const SeriesStatus& st) {
  switch (st.status.kind) {
    case NormalStatus::Kind::Normal: {
      report << "normal gamma=(";
      const auto& gamma = st.status.decomposition->monomial_exponent;
      for (std::size_t v = 0; v < gamma.size(); ++v) {
        if (v) report << ",";
        report << format_rational(gamma[v]);
      }
      report << ") unit-terms=" << st.status.decomposition->unit.term_count();
      break;
    }
    case NormalStatus::Kind::Zero:
      report << "zero";
      break;
    case NormalStatus::Kind::NotNormal:
      report << "not-normal";
      break;
  }
}

int run_normalize(const std::vector<std::string>& inputs, bool star,
                  std::size_t max_depth, const std::string& out,
                  const std::string& report_path) {
  auto series = load_series(inputs);
  std::vector<std::string> config;
  for (const auto& p : inputs) config.push_back("input=" + p);
  config.push_back(std::string("star=") + (star ? "true" : "false"));
  config.push_back("max-depth=" + std::to_string(max_depth));
  Report report("normalize", config);

  AdmissibleTree tree =
      star ? star_monomialize(series, max_depth) : monomialize(series, max_depth);
  auto outcome = verify_tree(tree, series);
  if (!outcome.ok) {
    report << "verification FAILED: " << outcome.failure << "\n";
    report.deliver(report_path);
    return 1;
  }
  report << "branches " << outcome.reports.size() << "\n";
  for (std::size_t b = 0; b < outcome.reports.size(); ++b) {
    const auto& branch = outcome.reports[b];
    report << "branch " << b << " | " << describe_chain(branch.chain) << "\n";
    for (std::size_t s = 0; s < branch.series_status.size(); ++s) {
      report << "  series " << s << " : ";
      describe_status(report, branch.series_status[s]);
      report << "\n";
    }
    for (const auto& entry : branch.ledger) {
      report << "  critical pos=" << entry.chain_pos << " var=x"
             << entry.critical_index + 1 << " : ";
      describe_status(report, entry.status);
      report << "\n";
    }
  }
  if (!out.empty()) write_tree_file(out, tree);
  report.deliver(report_path);
  return 0;
}

int run_verify(const std::vector<std::string>& inputs, const std::string& tree_path,
               const std::string& report_path) {
  auto series = load_series(inputs);
  std::vector<std::string> config;
  for (const auto& p : inputs) config.push_back("input=" + p);
  config.push_back("tree=" + tree_path);
  Report report("verify", config);

  AdmissibleTree tree = parse_tree_file(tree_path);
  auto outcome = verify_tree(tree, series);
  if (!outcome.ok) {
    report << "verification FAILED: " << outcome.failure << "\n";
    report.deliver(report_path);
    return 1;
  }
  report << "verification OK, branches " << outcome.reports.size() << "\n";
  report.deliver(report_path);
  return 0;
}

int run_signs(const std::string& input, const std::string& report_path) {
  GenSeries f = parse_series_file(input);
  Report report("signs", {"input=" + input});

  auto st = normal_decompose(f);
  if (st.kind == NormalStatus::Kind::NotNormal) {
    report << "series is not normal; incomparable minimal exponents witness\n";
    report.deliver(report_path);
    return 1;
  }
  if (st.is_zero()) {
    report << "series is zero: sign 0 on every quadrant\n";
    report.deliver(report_path);
    return 0;
  }
  const auto& nd = *st.decomposition;
  const auto certified = validity_radius(nd, f.sig.polyradius);
  report << "validity radius " << radius_string(certified) << "\n";

  const std::size_t total = f.sig.total();
  std::vector<std::size_t> radix(total);
  for (std::size_t v = 0; v < total; ++v) radix[v] = f.sig.is_generalized(v) ? 2 : 3;
  std::vector<std::size_t> idx(total, 0);
  for (;;) {
    Quadrant q;
    q.sig = f.sig;
    q.sig.polyradius = certified;
    q.selectors.resize(total);
    for (std::size_t v = 0; v < total; ++v)
      q.selectors[v] = idx[v] == 0 ? Selector::Zero
                                   : (idx[v] == 1 ? Selector::Positive
                                                  : Selector::Negative);
    report << selector_string(q) << " : " << sign_on_quadrant(nd, q) << "\n";
    std::size_t v = 0;
    while (v < total && ++idx[v] == radix[v]) idx[v++] = 0;
    if (v == total) break;
  }
  report.deliver(report_path);
  return 0;
}

int run_parametrize(const std::vector<std::string>& inputs, bool basic,
                    std::uint64_t seed, std::size_t max_depth, std::size_t samples,
                    std::size_t sign_samples, const std::string& scale,
                    const std::string& report_path) {
  auto series = load_series(inputs);
  std::vector<std::string> config;
  for (const auto& p : inputs) config.push_back("input=" + p);
  config.push_back(std::string("basic=") + (basic ? "true" : "false"));
  config.push_back("seed=" + std::to_string(seed));
  config.push_back("max-depth=" + std::to_string(max_depth));
  config.push_back("samples=" + std::to_string(samples));
  config.push_back("scale=" + scale);
  Report report("parametrize", config);

  if (series.empty()) throw std::invalid_argument("parametrize needs at least one input");
  ParamOptions opt;
  opt.max_depth = max_depth;
  opt.radius_scale = parse_rational(scale);

  const VariableSignature target = series.front().sig;
  std::vector<ParamChart> charts;
  if (basic) {
    BasicSetDescriptor descriptor{series.front(),
                                  {series.begin() + 1, series.end()},
                                  target};
    charts = build_local_parametrization(descriptor, series, opt);
  } else {
    charts = build_local_parametrization(target, series, opt);
  }

  report << "charts " << charts.size() << "\n";
  bool signs_ok = true;
  for (std::size_t c = 0; c < charts.size(); ++c) {
    const auto& pc = charts[c];
    report << "chart " << c << " | " << describe_chain(pc.chart.chain) << " | Q="
           << selector_string(pc.chart.domain) << " | radius "
           << radius_string(pc.chart.domain.sig.polyradius) << " | signs";
    for (int s : pc.signs) report << " " << s;
    auto check = sign_constancy_check(pc, series, sign_samples, seed + c);
    report << " | sign-check " << (check.ok ? "ok" : "FAIL");
    if (!check.ok) signs_ok = false;
    report << "\n";
  }
  auto covering = covering_check(charts, target, samples, seed);
  report << "covering " << covering.covered << "/" << covering.samples << " = "
         << format_real(covering.fraction) << " within radius";
  for (double r : covering.sample_radius) report << " " << format_real(r);
  report << "\n";
  report.deliver(report_path);
  return signs_ok ? 0 : 1;
}

int run_fibercut(const std::vector<std::string>& inputs, std::size_t m_split,
                 std::size_t budget, std::uint64_t seed,
                 const std::string& report_path) {
  auto series = load_series(inputs);
  std::vector<std::string> config;
  for (const auto& p : inputs) config.push_back("input=" + p);
  config.push_back("m-split=" + std::to_string(m_split));
  config.push_back("budget=" + std::to_string(budget));
  config.push_back("seed=" + std::to_string(seed));
  Report report("fibercut", config);

  if (series.empty()) throw std::invalid_argument("fibercut needs map components");
  SeriesMap eta;
  eta.domain = series.front().sig;
  eta.components = series;
  eta.validate();
  if (m_split == 0) m_split = eta.output_dim();

  Chart chart{TransformChain::identity(eta.domain), Quadrant::open(eta.domain)};
  RefineOptions ropt;
  ropt.seed = seed;
  auto refined = refine_by_rank({chart}, m_split, ropt);
  for (std::size_t c = 0; c < refined.size(); ++c) {
    const auto& rc = refined[c];
    const std::size_t d = rc.map.eta.dim();
    report << "chart " << c << " | " << describe_chain(rc.chart.chain) << " | Q="
           << selector_string(rc.chart.domain) << " | rank " << rc.rank << " | iota";
    if (rc.iota.empty())
      report << " -";
    else
      for (auto v : rc.iota) report << " " << v + 1;
    report << "\n";
    if (rc.rank < 0 || static_cast<std::size_t>(rc.rank) >= d) {
      report << "  no cutting needed (rank = dimension)\n";
      continue;
    }
    SeriesMap eta_c = rc.map.eta;
    ClearedJacobian cj = cleared_jacobian(eta_c, rc.iota, rc.rank);
    auto system = fiber_cut_equations(eta_c, cj, rc.rank);
    auto witness = witness_certificate(eta_c, cj, system, 20, seed);
    report << "  equations " << system.equations.size() << " witness "
           << (witness.ok ? "ok" : "FAIL") << " min-max-dot "
           << format_real(witness.min_max_dot) << "\n";
    std::vector<Rational> rprime;
    for (const auto& r : eta_c.domain.polyradius) rprime.push_back(r / 2);
    auto cut = verify_fiber_cut(eta_c, system, rprime, budget, seed);
    report << "  fibers attempted " << cut.attempted << " solved " << cut.solved
           << " failed " << cut.failed << " max-discrepancy "
           << format_real(cut.max_discrepancy) << "\n";
  }
  report.deliver(report_path);
  return 0;
}

// One shared deterministic generator for the vlab reports.
double vlab_uniform(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) / 9007199254740992.0;
}

int run_vlab(const std::string& mode, std::size_t n, std::size_t p, std::size_t k,
             std::uint64_t seed, std::size_t grid, std::size_t degree,
             const std::string& report_path) {
  if (p < k) throw std::invalid_argument("vlab requires p >= k");
  std::vector<std::string> config{"n=" + std::to_string(n), "p=" + std::to_string(p),
                                  "k=" + std::to_string(k),
                                  "seed=" + std::to_string(seed),
                                  "grid=" + std::to_string(grid),
                                  "degree=" + std::to_string(degree)};
  Report report("vlab " + mode, config);

  auto bp = BreakpointSystem::dyadic(k);
  const std::size_t default_degree = (n + 2) * (p + 1) - 1;
  const std::size_t piece_degree = degree >= default_degree ? degree : default_degree;
  auto wb = w_basis(bp, piece_degree);

  auto seeded = [&](std::uint64_t salt, double scale) {
    Eigen::VectorXd v(wb.basis.cols());
    std::uint64_t state = seed ^ salt;
    for (Eigen::Index t = 0; t < v.size(); ++t)
      v(t) = scale * (2.0 * vlab_uniform(state) - 1.0);
    return v;
  };
  VElement f = element_from_w(wb, bp, piece_degree, seeded(0x5eed, 0.5));

  auto pick_points = [&](std::uint64_t salt, double min_gap) {
    std::vector<double> xs;
    std::uint64_t state = seed ^ salt;
    while (xs.size() < n) {
      const double x = 0.82 * (2.0 * vlab_uniform(state) - 1.0);
      bool clash = false;
      for (const auto& b : bp.sorted)
        if (std::abs(to_double(b) - x) < min_gap) clash = true;
      for (double other : xs)
        if (std::abs(other - x) < min_gap) clash = true;
      if (!clash) xs.push_back(x);
    }
    return xs;
  };

  report << "breakpoints";
  for (const auto& a : bp.points) report << " " << format_rational(a);
  report << "\npiece-degree " << piece_degree << "\n";

  if (mode == "wbasis") {
    report << "ambient " << wb.ambient << "\n";
    report << "codim " << wb.codim << "\n";
    report << "numeric-rank " << wb.numeric_rank << "\n";
    report << "dimW " << wb.basis.cols() << "\n";
    report.deliver(report_path);
    return wb.numeric_rank == static_cast<long>(wb.codim) ? 0 : 1;
  }

  if (mode == "jet") {
    report << "order: x-derivatives (i asc, q asc); matched a-derivatives (i asc, "
              "q asc); one-sided pairs (i asc, q asc, -/+)\n";
    const auto xs = pick_points(0x1e7, 1e-3);
    report << "points";
    for (double x : xs) report << " " << format_real(x);
    report << "\n";
    auto jet = jet_tuple(f, xs, n, p, k);
    report << "length " << jet.size() << "\n";
    report << "target-dim " << jet_target_dim(n, p, k) << "\n";
    for (double value : jet) report << format_real(value) << "\n";
    report.deliver(report_path);
    return 0;
  }

  if (mode == "gradcheck") {
    bool ok = true;
    for (std::size_t trial = 0; trial < 5; ++trial) {
      const auto xs = pick_points(1000 * trial + 7, 0.05);
      auto result = phi_jacobian(f, wb, seeded(trial + 1, 0.25), xs, n, p, k);
      const bool pass = result.max_rel_err <= 1e-6 &&
                        result.rank == static_cast<long>(jet_target_dim(n, p, k));
      report << "trial " << trial << " max-rel-err " << format_real(result.max_rel_err)
             << " rank " << result.rank << "/" << jet_target_dim(n, p, k) << " "
             << (pass ? "ok" : "FAIL") << "\n";
      if (!pass) ok = false;
    }
    report.deliver(report_path);
    return ok ? 0 : 1;
  }

  if (mode == "avoid") {
    // Default algebraic set: the first jet coordinate vanishes.
    JetPolynomial first;
    std::vector<unsigned> exps(jet_target_dim(n, p, k), 0);
    exps[n] = 1;
    first.terms[exps] = Rational(1);
    auto violations = avoidance_check(f, {first}, n, p, k, grid);
    report << "grid " << grid << " violations " << violations.size() << "\n";
    for (const auto& v : violations) {
      report << "at";
      for (double x : v.x) report << " " << format_real(x);
      report << "\n";
    }
    report.deliver(report_path);
    return 0;
  }

  throw std::invalid_argument("vlab mode must be one of jet|wbasis|gradcheck|avoid");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kVersion) +
               " - generalized power series monomialization laboratory"};
  app.require_subcommand(1);

  std::vector<std::string> inputs;
  std::string out, report_path, tree_path, scale = "1";
  bool star = false, basic = false;
  std::size_t max_depth = 64, samples = 10000, sign_samples = 1000, budget = 100;
  std::size_t m_split = 0, n = 1, p = 2, k = 0, grid = 25, degree = 0;
  std::uint64_t seed = 0;

  auto* normalize = app.add_subcommand("normalize", "monomialize input series");
  normalize->add_option("--input", inputs, "series file (.gps), repeatable")
      ->required();
  normalize->add_flag("--star", star, "track critical variables");
  normalize->add_option("--max-depth", max_depth, "branch depth guard");
  normalize->add_option("--out", out, "write the tree (.qtree)");
  normalize->add_option("--report", report_path, "report file (default stdout)");

  auto* verify = app.add_subcommand("verify", "re-verify a tree against its inputs");
  verify->add_option("--input", inputs, "series file (.gps), repeatable")->required();
  verify->add_option("--tree", tree_path, "tree file (.qtree)")->required();
  verify->add_option("--report", report_path, "report file (default stdout)");

  auto* signs = app.add_subcommand("signs", "per-quadrant sign table of a normal series");
  signs->add_option("--input", inputs, "series file (.gps)")->required();
  signs->add_option("--report", report_path, "report file (default stdout)");

  auto* parametrize =
      app.add_subcommand("parametrize", "local parametrization with compatible signs");
  parametrize
      ->add_option("--input", inputs,
                   "series files; with --basic the first is the equation")
      ->required();
  parametrize->add_flag("--basic", basic, "treat inputs as a basic set descriptor");
  parametrize->add_option("--seed", seed, "sampling seed");
  parametrize->add_option("--max-depth", max_depth, "engine depth guard");
  parametrize->add_option("--samples", samples, "covering sample count");
  parametrize->add_option("--sign-samples", sign_samples, "per-chart sign samples");
  parametrize->add_option("--scale", scale, "radius scale p/q applied to the target");
  parametrize->add_option("--report", report_path, "report file (default stdout)");

  auto* fibercut = app.add_subcommand("fibercut", "fiber-cutting equations and check");
  fibercut->add_option("--input", inputs, "map component files (.gps)")->required();
  fibercut->add_option("--m-split", m_split,
                       "projection width (default: all components)");
  fibercut->add_option("--budget", budget, "sampled image values");
  fibercut->add_option("--seed", seed, "sampling seed");
  fibercut->add_option("--report", report_path, "report file (default stdout)");

  auto* vlab = app.add_subcommand("vlab", "piecewise jet space laboratory");
  std::string vlab_mode;
  vlab->add_option("mode", vlab_mode, "jet|wbasis|gradcheck|avoid")->required();
  vlab->add_option("--n", n, "number of evaluation points");
  vlab->add_option("--p", p, "derivative order");
  vlab->add_option("--k", k, "marked breakpoint index bound");
  vlab->add_option("--seed", seed, "sampling seed");
  vlab->add_option("--grid", grid, "grid points per dimension");
  vlab->add_option("--degree", degree, "piece degree override (>= default)");
  vlab->add_option("--report", report_path, "report file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (normalize->parsed())
      return run_normalize(inputs, star, max_depth, out, report_path);
    if (verify->parsed()) return run_verify(inputs, tree_path, report_path);
    if (signs->parsed()) return run_signs(inputs.front(), report_path);
    if (parametrize->parsed())
      return run_parametrize(inputs, basic, seed, max_depth, samples, sign_samples,
                             scale, report_path);
    if (fibercut->parsed())
      return run_fibercut(inputs, m_split, budget, seed, report_path);
    if (vlab->parsed())
      return run_vlab(vlab_mode, n, p, k, seed, grid, degree, report_path);
  } catch (const ParseError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const DepthExhausted& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 2;
}
