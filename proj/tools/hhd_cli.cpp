// hhd: command-line front end for the spectral Helmholtz-Hodge decomposition.
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hhd/hhd.hpp"

namespace fs = std::filesystem;
using namespace hhd;

namespace {

constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;

std::vector<double> parse_lengths(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (tok.find_first_not_of(" \t", used) != std::string::npos) {
      throw std::invalid_argument("bad length '" + tok + "'");
    }
    out.push_back(v);
  }
  return out;
}

// shortest text that reads back to the same double
std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string join_lengths(const Domain& dom) {
  std::string s;
  for (int i = 0; i < dom.dim(); ++i) s += (i ? "," : "") + format_double(dom.length(i));
  return s;
}

// Settings of a decompose run. Defaults are overridden by the config file,
// which is overridden by flags.
struct RunConfig {
  std::vector<double> lengths;
  RegularizationParams reg;
  OuterConfig outer;
  SolverConfig inner;
  std::uint64_t seed = 1;
  int grid = 96;
  std::string input;
  std::string out_dir = ".";

  void apply(const std::string& key, const std::string& value) {
    auto num = [&] {
      std::size_t used = 0;
      const double v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument("bad number for " + key + ": '" + value + "'");
      return v;
    };
    auto integer = [&] {
      const double v = num();
      if (v != std::floor(v)) throw std::invalid_argument(key + " must be an integer");
      return static_cast<long long>(v);
    };
    if (key == "lengths") lengths = parse_lengths(value);
    else if (key == "eps_div") reg.eps_div = num();
    else if (key == "eps_curl") reg.eps_curl = num();
    else if (key == "k_div") reg.k_div = num();
    else if (key == "k_curl") reg.k_curl = num();
    else if (key == "eps_boundary_div") outer.eps_boundary_div = num();
    else if (key == "eps_boundary_curl") outer.eps_boundary_curl = num();
    else if (key == "delta_div") outer.delta_div = num();
    else if (key == "delta_curl") outer.delta_curl = num();
    else if (key == "total_it") outer.total_it = static_cast<int>(integer());
    else if (key == "grad_tol") inner.grad_tol = num();
    else if (key == "max_inner_iters") inner.max_inner_iters = static_cast<int>(integer());
    else if (key == "warm_start") {
      if (value == "true" || value == "1") inner.warm_start = true;
      else if (value == "false" || value == "0") inner.warm_start = false;
      else throw std::invalid_argument("warm_start must be true or false");
    } else if (key == "seed") seed = static_cast<std::uint64_t>(integer());
    else if (key == "grid") grid = static_cast<int>(integer());
    else if (key == "input") input = value;
    else if (key == "out_dir") out_dir = value;
    else throw std::invalid_argument("unknown config key '" + key + "'");
  }

  void write(std::ostream& out) const {
    out << "lengths = ";
    for (std::size_t i = 0; i < lengths.size(); ++i) out << (i ? "," : "") << shortest(lengths[i]);
    out << "\neps_div = " << shortest(reg.eps_div) << "\neps_curl = " << shortest(reg.eps_curl)
        << "\nk_div = " << shortest(reg.k_div) << "\nk_curl = " << shortest(reg.k_curl)
        << "\neps_boundary_div = " << shortest(outer.eps_boundary_div)
        << "\neps_boundary_curl = " << shortest(outer.eps_boundary_curl)
        << "\ndelta_div = " << shortest(outer.delta_div) << "\ndelta_curl = " << shortest(outer.delta_curl)
        << "\ntotal_it = " << outer.total_it << "\ngrad_tol = " << shortest(inner.grad_tol)
        << "\nmax_inner_iters = " << inner.max_inner_iters << "\nwarm_start = " << (inner.warm_start ? "true" : "false")
        << "\nseed = " << seed << "\ngrid = " << grid << '\n';
    if (!input.empty()) out << "input = " << input << '\n';
  }
};

// Parameters used for each analytic field in the reference experiments.
RunConfig reference_config(TestField field) {
  RunConfig c;
  c.lengths = test_field_domain(field).lengths();
  if (field == TestField::TwoScaleSource3D) {
    c.reg = {1e-6, 1e-6, 1.6, 1.6};
    c.outer.eps_boundary_div = c.outer.eps_boundary_curl = 0.2;
    c.grid = 48;
  }
  return c;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory " + dir + ": " + ec.message());
}

std::string in_dir(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

std::vector<Vec3> evaluate_all(const std::vector<Vec3>& points, const CoefficientSet* a, const CoefficientSet* b) {
  std::vector<Vec3> out(points.size(), Vec3::Zero());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (a) out[i] += a->evaluate(points[i]);
    if (b) out[i] += b->evaluate(points[i]);
  }
  return out;
}

// ---- generate --------------------------------------------------------------

struct GenerateArgs {
  std::string field;
  std::size_t points = 250;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  std::optional<int> grid;
};

int run_generate(const GenerateArgs& a) {
  const TestField field = parse_test_field(a.field);
  const Domain dom = test_field_domain(field);
  RunConfig cfg = reference_config(field);
  if (a.grid) cfg.grid = *a.grid;
  cfg.seed = a.seed;
  cfg.input = "measurements.csv";

  ensure_dir(a.out_dir);
  const MeasurementSet m = sample_random(field, dom, a.points, a.seed);
  write_measurements(in_dir(a.out_dir, "measurements.csv"), m);

  const UniformGrid grid(dom, cfg.grid);
  const auto pts = grid.points();
  std::vector<Vec3> u(pts.size()), ud(pts.size()), uc(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const FieldParts f = evaluate_test_field(field, pts[i]);
    u[i] = f.u;
    ud[i] = f.ud;
    uc[i] = f.uc;
  }
  write_sample_csv(in_dir(a.out_dir, "truth_u.csv"), dom.dim(), pts, u);
  write_sample_csv(in_dir(a.out_dir, "truth_ud.csv"), dom.dim(), pts, ud);
  write_sample_csv(in_dir(a.out_dir, "truth_uc.csv"), dom.dim(), pts, uc);

  std::ofstream f(in_dir(a.out_dir, "run.cfg"));
  f << "# " << to_string(field) << ", " << a.points << " samples\n";
  cfg.write(f);
  std::cout << "wrote " << a.points << " samples of " << to_string(field) << " and " << cfg.grid
            << "-point truth grids to " << a.out_dir << '\n';
  return 0;
}

// ---- decompose -------------------------------------------------------------

int run_decompose(RunConfig cfg, const std::string& config_dir, bool verbose) {
  if (cfg.input.empty()) throw std::invalid_argument("no input measurements (set --input or input in the config)");
  if (cfg.lengths.empty()) throw std::invalid_argument("no domain lengths (set --lengths or lengths in the config)");
  fs::path input = cfg.input;
  if (input.is_relative() && !config_dir.empty() && !fs::exists(input)) input = fs::path(config_dir) / input;
  if (cfg.grid < 2) throw std::invalid_argument("grid must be at least 2");

  const Domain dom(cfg.lengths);
  const MeasurementSet m = read_measurements(input.string(), dom);
  ensure_dir(cfg.out_dir);

  auto write_trace = [&](const std::vector<TraceEntry>& trace) {
    std::ofstream f(in_dir(cfg.out_dir, "trace.csv"));
    write_trace_csv(f, trace);
  };

  DecompositionResult res = [&] {
    try {
      auto report = [](const TraceEntry& t) {
        std::fprintf(stderr, "iteration %d: |I| = %zu, |J| = %zu, boundary ratios %.3g %.3g, objective %.6g, %d inner\n",
                     t.iter, t.n_div, t.n_curl, t.bratio_div, t.bratio_curl, t.objective, t.inner_iters);
      };
      return decompose(m, cfg.reg, cfg.outer, cfg.inner, verbose ? std::function<void(const TraceEntry&)>(report) : nullptr);
    } catch (const DecompositionError& e) {
      write_trace(e.trace());
      throw;
    }
  }();
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
  write_trace(res.trace);
  write_coefficients(in_dir(cfg.out_dir, "div.coef"), res.div);
  write_coefficients(in_dir(cfg.out_dir, "curl.coef"), res.curl);

  const UniformGrid grid(dom, cfg.grid);
  const auto pts = grid.points();
  write_sample_csv(in_dir(cfg.out_dir, "grid_u.csv"), dom.dim(), pts, evaluate_all(pts, &res.div, &res.curl));
  write_sample_csv(in_dir(cfg.out_dir, "grid_ud.csv"), dom.dim(), pts, evaluate_all(pts, &res.div, nullptr));
  write_sample_csv(in_dir(cfg.out_dir, "grid_uc.csv"), dom.dim(), pts, evaluate_all(pts, nullptr, &res.curl));
  if (dom.dim() == 2) write_scalar_csv(in_dir(cfg.out_dir, "vorticity.csv"), 2, pts, vorticity(res.div, pts), "w");

  const auto& last = res.trace.back();
  std::cout << (res.converged ? "converged" : "not converged") << " after " << last.iter
            << " outer iterations: |I| = " << res.div.layout()->indices().size()
            << ", |J| = " << res.curl.layout()->indices().size() << ", objective = " << format_double(last.objective)
            << '\n';
  return res.converged ? 0 : kExitNotConverged;
}

// ---- evaluate --------------------------------------------------------------

struct EvaluateArgs {
  std::string div, curl, points, out;
  std::optional<int> grid;
};

int run_evaluate(const EvaluateArgs& a) {
  if (a.div.empty() && a.curl.empty()) throw std::invalid_argument("give --div, --curl or both");
  std::optional<CoefficientSet> div, curl;
  if (!a.div.empty()) div = read_coefficients(a.div);
  if (!a.curl.empty()) curl = read_coefficients(a.curl);
  const Domain dom = div ? div->domain() : curl->domain();
  if (div && curl && !(div->domain() == curl->domain())) throw std::invalid_argument("coefficient domains differ");

  std::vector<Vec3> pts;
  if (!a.points.empty()) {
    if (a.grid) throw std::invalid_argument("--grid and --points are exclusive");
    SampleTable t = read_sample_csv(a.points);
    if (t.dim != dom.dim()) throw std::invalid_argument("point file dimension does not match the coefficients");
    pts = std::move(t.points);
  } else {
    pts = UniformGrid(dom, a.grid.value_or(96)).points();
  }
  const auto values = evaluate_all(pts, div ? &*div : nullptr, curl ? &*curl : nullptr);
  if (a.out.empty() || a.out == "-") {
    write_sample_csv(std::cout, dom.dim(), pts, values);
  } else {
    write_sample_csv(a.out, dom.dim(), pts, values);
  }
  return 0;
}

// ---- errors ----------------------------------------------------------------

struct ErrorsArgs {
  std::string approx_dir, truth_dir, out_dir;
  std::optional<double> vmin, vmax;
};

// Recovers the grid resolution and box from a cell-centred grid file.
UniformGrid grid_of(const SampleTable& t) {
  const auto count = static_cast<double>(t.points.size());
  const int res = static_cast<int>(std::lround(std::pow(count, 1.0 / t.dim)));
  std::size_t expect = 1;
  for (int i = 0; i < t.dim; ++i) expect *= static_cast<std::size_t>(res);
  if (res < 2 || expect != t.points.size()) throw std::invalid_argument("grid file is not a full uniform grid");
  std::vector<double> lengths(t.dim);
  for (int c = 0; c < t.dim; ++c) {
    double lo = t.points[0][c];
    for (const auto& p : t.points) lo = std::min(lo, p[c]);
    lengths[c] = 2.0 * res * lo;
  }
  UniformGrid g(Domain(lengths), res);
  for (std::size_t i = 0; i < t.points.size(); ++i) {
    if ((g.point(i) - t.points[i]).norm() > 1e-9 * (1.0 + t.points[i].norm())) {
      throw std::invalid_argument("grid file points are not in cell-centred grid order");
    }
  }
  return g;
}

int run_errors(const ErrorsArgs& a) {
  const std::string out_dir = a.out_dir.empty() ? a.approx_dir : a.out_dir;
  ensure_dir(out_dir);
  struct Part {
    const char* name;
    const char* approx;
    const char* truth;
  };
  const Part parts[] = {{"u", "grid_u.csv", "truth_u.csv"},
                        {"ud", "grid_ud.csv", "truth_ud.csv"},
                        {"uc", "grid_uc.csv", "truth_uc.csv"}};

  const SampleTable total = read_sample_csv(in_dir(a.truth_dir, "truth_u.csv"));
  double scale = 0.0;
  for (const auto& v : total.values) scale = std::max(scale, v.norm());

  std::ofstream table(in_dir(out_dir, "errors.csv"));
  table << "part,l2,linf,rel_linf\n";
  std::cout << "part  L2               Linf             Linf/max|u|\n";
  for (const auto& p : parts) {
    const SampleTable approx = read_sample_csv(in_dir(a.approx_dir, p.approx));
    const SampleTable truth = read_sample_csv(in_dir(a.truth_dir, p.truth));
    if (approx.points.size() != truth.points.size() || approx.dim != truth.dim) {
      throw std::invalid_argument(std::string(p.approx) + " and " + p.truth + " have different shapes");
    }
    const UniformGrid grid = grid_of(truth);
    std::vector<double> e(truth.points.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      if ((approx.points[i] - truth.points[i]).norm() > 1e-9 * (1.0 + truth.points[i].norm())) {
        throw std::invalid_argument(std::string(p.approx) + " and " + p.truth + " use different points");
      }
      e[i] = (approx.values[i] - truth.values[i]).norm();
    }
    const double l2 = l2_error(e, grid), linf = linf_error(e);
    const double rel = scale > 0.0 ? linf / scale : 0.0;
    table << p.name << ',' << format_double(l2) << ',' << format_double(linf) << ',' << format_double(rel) << '\n';
    std::printf("%-4s  %-15.9g  %-15.9g  %.6g\n", p.name, l2, linf, rel);

    write_scalar_csv(in_dir(out_dir, std::string("error_") + p.name + ".csv"), truth.dim, truth.points, e, "e");
    if (truth.dim == 2) {
      write_heatmap(in_dir(out_dir, std::string("error_") + p.name + ".pgm"), grid_to_image(e, grid.resolution()),
                    a.vmin, a.vmax);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Helmholtz-Hodge decomposition of scattered vector samples on a periodic box"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Sample an analytic test field and write truth grids");
  g->add_option("--field", gen.field, "counter_rotating, two_scale_2d or two_scale_3d")->required();
  g->add_option("--points", gen.points, "number of random samples")->check(CLI::PositiveNumber);
  g->add_option("--seed", gen.seed, "sampling seed");
  g->add_option("--out-dir", gen.out_dir, "output directory");
  g->add_option("--grid", gen.grid, "truth grid points per direction")->check(CLI::Range(2, 4096));

  std::string config_path;
  std::map<std::string, std::string> overrides;
  auto* d = app.add_subcommand("decompose", "Fit divergence-free and curl-free parts to measurements");
  d->add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
  bool verbose = false;
  d->add_flag("-v,--verbose", verbose, "print each outer iteration to stderr");
  const char* keys[] = {"input",           "out_dir",      "lengths",          "eps_div",
                        "eps_curl",        "k_div",        "k_curl",           "eps_boundary_div",
                        "eps_boundary_curl", "delta_div",  "delta_curl",       "total_it",
                        "grad_tol",        "max_inner_iters", "warm_start",    "seed",
                        "grid"};
  for (const char* key : keys) {
    std::string flag = std::string("--") + key;
    for (auto& ch : flag) {
      if (ch == '_') ch = '-';
    }
    d->add_option_function<std::string>(flag, [&overrides, key](const std::string& v) { overrides[key] = v; },
                                        std::string("overrides config key ") + key);
  }

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "Evaluate coefficient files on a grid or at given points");
  e->add_option("--div", ev.div, "divergence-free coefficient file");
  e->add_option("--curl", ev.curl, "curl-free coefficient file");
  e->add_option("--grid", ev.grid, "grid points per direction (default 96)")->check(CLI::Range(2, 4096));
  e->add_option("--points", ev.points, "CSV whose x columns give the evaluation points");
  e->add_option("--out", ev.out, "output CSV (default stdout)");

  ErrorsArgs er;
  auto* r = app.add_subcommand("errors", "Compare fitted grids with truth grids");
  r->add_option("--approx-dir", er.approx_dir, "directory with grid_u/ud/uc.csv")->required();
  r->add_option("--truth-dir", er.truth_dir, "directory with truth_u/ud/uc.csv")->required();
  r->add_option("--out-dir", er.out_dir, "output directory (default: approx dir)");
  r->add_option("--vmin", er.vmin, "heatmap lower bound");
  r->add_option("--vmax", er.vmax, "heatmap upper bound");

  CLI11_PARSE(app, argc, argv);

  try {
    if (g->parsed()) return run_generate(gen);
    if (d->parsed()) {
      RunConfig cfg;
      std::string config_dir;
      if (!config_path.empty()) {
        for (const auto& [k, v] : parse_config_file(config_path)) cfg.apply(k, v);
        config_dir = fs::path(config_path).parent_path().string();
      }
      for (const auto& [k, v] : overrides) cfg.apply(k, v);
      return run_decompose(cfg, config_dir, verbose);
    }
    if (e->parsed()) return run_evaluate(ev);
    if (r->parsed()) return run_errors(er);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
