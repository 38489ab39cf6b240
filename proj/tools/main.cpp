// goh-atlas command line. Data goes to --out (stdout by default), logs to stderr.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <optional>

#include "goh_atlas/errors.hpp"
#include "goh_atlas/goh.hpp"
#include "goh_atlas/io.hpp"
#include "goh_atlas/metabelian.hpp"
#include "goh_atlas/normalform.hpp"
#include "goh_atlas/trajectories.hpp"
#include "scenarios.hpp"

using namespace goh_atlas;
using io::json;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Options {
  int rank = 2;
  int step = 3;
  std::string lambda;
  std::string frame;
  std::string curve;
  std::string control;
  std::string window;
  std::string x0;
  std::string csv;
  std::string dir;
  int res = kDefaultResolution;
  double eps = 1e-2;
  int samples = 20000;
  int degree = 6;
  int depth = 0;
  int substeps = kDefaultSubsteps;
  std::optional<double> tol;
  std::string out;
  std::uint64_t seed = 1;
  std::string scenario;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::optional<double> env_tolerance() {
  const char* s = std::getenv("GOH_ATLAS_TOL");
  if (!s || !*s) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s, &end);
  if (*end != '\0' || !(v > 0)) throw UsageError(std::string("GOH_ATLAS_TOL is not a positive number: ") + s);
  return v;
}

double tolerance(const Options& o, double fallback) {
  if (o.tol) return *o.tol;
  return env_tolerance().value_or(fallback);
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(s.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& s, const char* what) {
  std::vector<double> v;
  for (const auto& part : split(s)) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::logic_error&) {
      throw UsageError(std::string("cannot parse ") + what + ": " + s);
    }
  }
  return v;
}

std::vector<Rational> parse_lambda(const std::string& s, int n) {
  if (s.empty()) throw UsageError("--lambda is required");
  std::vector<Rational> v;
  for (const auto& part : split(s)) v.push_back(parse_rational(part));
  if (static_cast<int>(v.size()) != n)
    throw UsageError("--lambda has " + std::to_string(v.size()) + " entries, frame dimension is " + std::to_string(n));
  return v;
}

Eigen::VectorXd to_vector(const std::vector<Rational>& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = to_double(v[i]);
  return out;
}

Frame load_frame(const Options& o) {
  if (!o.frame.empty()) {
    const json doc = io::read_json_file(o.frame);
    io::check_schema(doc);
    return io::frame_from_json(doc.contains("frame") ? doc["frame"] : doc);
  }
  std::clog << "realizing the free nilpotent frame (" << o.rank << "," << o.step << ")\n";
  return realize_frame(generate_basis(o.rank, o.step), false).frame;
}

json load_doc(const std::string& path, const char* flag) {
  if (path.empty()) throw UsageError(std::string(flag) + " is required");
  json doc = io::read_json_file(path);
  io::check_schema(doc);
  return doc;
}

Eigen::VectorXd start_point(const Options& o, int n, const Eigen::VectorXd& base0) {
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
  if (!o.x0.empty()) {
    const auto v = parse_doubles(o.x0, "--x0");
    if (static_cast<int>(v.size()) != n) throw UsageError("--x0 has the wrong dimension");
    for (int i = 0; i < n; ++i) x0[i] = v[static_cast<std::size_t>(i)];
  } else if (base0.size() > 0) {
    x0.head(base0.size()) = base0;
  }
  return x0;
}

void emit(const Options& o, const json& body) {
  const std::string text = io::dump(io::document(body));
  if (o.out.empty() || o.out == "-")
    std::cout << text;
  else
    io::write_text(o.out, text);
}

int cmd_basis(const Options& o) {
  const auto basis = generate_basis(o.rank, o.step);
  emit(o, {{"basis", io::to_json(basis)}, {"table", io::to_json(structure_table(basis))}});
  return 0;
}

int cmd_realize(const Options& o) {
  emit(o, io::to_json(realize_frame(generate_basis(o.rank, o.step), false).frame));
  return 0;
}

int cmd_metabelian(const Options& o) {
  const Frame f = load_frame(o);
  int depth = o.depth;
  if (depth == 0) depth = f.weights.empty() ? f.n : 2 * *std::max_element(f.weights.begin(), f.weights.end());
  emit(o, io::to_json(is_metabelian(f, depth)));
  return 0;
}

int cmd_goh(const Options& o) {
  const Frame f = load_frame(o);
  emit(o, io::to_json(goh_polynomials(f, parse_lambda(o.lambda, f.n))));
  return 0;
}

Window parse_window(const std::string& s) {
  if (s.empty()) return {};
  const auto v = parse_doubles(s, "--window");
  if (v.size() != 4 || !(v[0] < v[1]) || !(v[2] < v[3])) throw UsageError("--window needs x0,x1,y0,y1 with x0<x1, y0<y1");
  return {v[0], v[1], v[2], v[3]};
}

int cmd_trace(const Options& o) {
  const Frame f = load_frame(o);
  const auto sys = goh_polynomials(f, parse_lambda(o.lambda, f.n));
  const auto trace = trace_variety(sys, parse_window(o.window), o.res, tolerance(o, kDefaultTraceTolerance));
  if (!o.csv.empty()) io::write_text(o.csv, io::polylines_csv(trace));
  emit(o, {{"goh", io::to_json(sys)}, {"trace", io::to_json(trace)}});
  return 0;
}

int cmd_lift(const Options& o) {
  const Frame f = load_frame(o);
  const auto kappa = io::curve_from_json(load_doc(o.curve, "--curve"));
  const auto lift = horizontal_lift(f, kappa, start_point(o, f.n, kappa.points.col(0)), o.substeps);
  emit(o, {{"curve", io::to_json(lift.curve)}, {"control", io::to_json(lift.control)}});
  return 0;
}

int cmd_flow(const Options& o) {
  const Frame f = load_frame(o);
  const auto u = io::control_from_json(load_doc(o.control, "--control"));
  emit(o, io::to_json(flow_control(f, u, start_point(o, f.n, {}), o.substeps)));
  return 0;
}

int cmd_residuals(const Options& o) {
  const Frame f = load_frame(o);
  const auto u = io::control_from_json(load_doc(o.control, "--control"));
  const auto l = to_vector(parse_lambda(o.lambda, f.n));
  emit(o, io::to_json(extremal_residuals(f, u, start_point(o, f.n, {}), l, o.substeps)));
  return 0;
}

int cmd_recover(const Options& o) {
  const Frame f = load_frame(o);
  const auto u = io::control_from_json(load_doc(o.control, "--control"));
  emit(o, io::to_json(recover_abnormal_covector(f, u, start_point(o, f.n, {}), tolerance(o, kAbnormalThreshold),
                                                o.substeps)));
  return 0;
}

int cmd_spiral(const Options& o) {
  emit(o, io::to_json(spiral_curve(o.eps, o.samples)));
  return 0;
}

int cmd_contain(const Options& o) {
  const auto c = io::curve_from_json(load_doc(o.curve, "--curve"));
  json results = json::array();
  for (int d = 1; d <= o.degree; ++d)
    results.push_back(io::to_json(polynomial_containment(c.points, d, tolerance(o, kContainmentThreshold))));
  emit(o, {{"containment", results}});
  return 0;
}

int cmd_demo(const Options& o) {
  const auto& names = cli::scenario_names();
  if (std::find(names.begin(), names.end(), o.scenario) == names.end()) {
    std::clog << "unknown scenario '" << o.scenario << "'; choose one of:";
    for (const auto& n : names) std::clog << " " << n;
    std::clog << "\n";
    return kExitUsage;
  }
  cli::ScenarioOptions so;
  if (!o.dir.empty()) so.dir = o.dir;
  so.seed = o.seed;
  so.tol = o.tol ? o.tol : env_tolerance();
  const auto report = cli::run_scenario(o.scenario, so);
  emit(o, report.to_json());
  return report.pass() ? 0 : kExitFailure;
}

void add_frame_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--frame", o.frame, "Frame JSON file (default: realized free frame)");
  cmd->add_option("--rank", o.rank, "Rank of the free frame")->check(CLI::Range(1, 9));
  cmd->add_option("--step", o.step, "Step of the free frame")->check(CLI::Range(1, 12));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lyndon bases, normal-form frames, Goh varieties and abnormal curves"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--out", o.out, "Output file (default stdout)");
  app.add_option("--tol", o.tol, "Tolerance override (also GOH_ATLAS_TOL)")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "Random seed");
  app.add_option("--substeps", o.substeps, "RK4 substeps per control interval")->check(CLI::Range(1, 1000));

  std::map<CLI::App*, int (*)(const Options&)> handlers;
  auto sub = [&](const char* name, const char* help, int (*fn)(const Options&)) {
    CLI::App* c = app.add_subcommand(name, help);
    handlers[c] = fn;
    return c;
  };

  auto* basis = sub("basis", "Lyndon basis and structure table", cmd_basis);
  basis->add_option("--rank", o.rank)->check(CLI::Range(1, 9));
  basis->add_option("--step", o.step)->check(CLI::Range(1, 12));
  auto* realize = sub("realize", "Normal-form frame of the free nilpotent group", cmd_realize);
  realize->add_option("--rank", o.rank)->check(CLI::Range(1, 9));
  realize->add_option("--step", o.step)->check(CLI::Range(1, 12));
  auto* meta = sub("metabelian", "Metabelian verdict with witness", cmd_metabelian);
  add_frame_flags(meta, o);
  meta->add_option("--depth", o.depth, "Largest total bracket length (default: twice the top weight)");
  auto* goh = sub("goh", "Goh polynomials for a covector", cmd_goh);
  add_frame_flags(goh, o);
  goh->add_option("--lambda", o.lambda, "Covector a,b,... (p/q accepted)")->required();
  auto* trace = sub("trace", "Trace the Goh variety in a window", cmd_trace);
  add_frame_flags(trace, o);
  trace->add_option("--lambda", o.lambda)->required();
  trace->add_option("--window", o.window, "x0,x1,y0,y1");
  trace->add_option("--res", o.res, "Grid cells per side")->check(CLI::Range(2, 1 << 14));
  trace->add_option("--csv", o.csv, "Polyline CSV output");
  auto* lift = sub("lift", "Horizontal lift of a base curve", cmd_lift);
  add_frame_flags(lift, o);
  lift->add_option("--curve", o.curve)->required();
  lift->add_option("--x0", o.x0, "Start point (default: first curve point, zeros)");
  auto* flow = sub("flow", "Trajectory of a control", cmd_flow);
  add_frame_flags(flow, o);
  flow->add_option("--control", o.control)->required();
  flow->add_option("--x0", o.x0);
  auto* residuals = sub("residuals", "Abnormal and Goh residuals along a control", cmd_residuals);
  add_frame_flags(residuals, o);
  residuals->add_option("--control", o.control)->required();
  residuals->add_option("--lambda", o.lambda)->required();
  residuals->add_option("--x0", o.x0);
  auto* recover = sub("recover", "Abnormal covector candidates from the stacked constraints", cmd_recover);
  add_frame_flags(recover, o);
  recover->add_option("--control", o.control)->required();
  recover->add_option("--x0", o.x0);
  auto* spiral = sub("spiral", "Samples of the logarithmic spiral", cmd_spiral);
  spiral->add_option("--eps", o.eps);
  spiral->add_option("--samples", o.samples)->check(CLI::Range(2, 100000000));
  auto* contain = sub("contain", "Low-degree algebraic curves through sampled points", cmd_contain);
  contain->add_option("--curve", o.curve)->required();
  contain->add_option("--degree", o.degree)->check(CLI::Range(0, 30));
  auto* demo = sub("demo", "Run a named end-to-end scenario", cmd_demo);
  demo->add_option("scenario", o.scenario)->required();
  demo->add_option("--dir", o.dir, "Directory for artifacts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  try {
    return handlers.at(chosen)(o);
  } catch (const UsageError& e) {
    std::clog << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::string kind = "error";
    if (dynamic_cast<const InvalidArgument*>(&e)) kind = "invalid-argument";
    else if (dynamic_cast<const PreconditionError*>(&e)) kind = "precondition";
    else if (dynamic_cast<const NotNilpotentError*>(&e)) kind = "not-nilpotent";
    else if (dynamic_cast<const ConditioningError*>(&e)) kind = "conditioning";
    else if (dynamic_cast<const NumericError*>(&e)) kind = "numeric";
    std::clog << "error: " << e.what() << "\n";
    std::cout << io::dump(io::document({{"command", chosen->get_name()}, {"pass", false}, {"error", kind}, {"message", e.what()}}));
    return kExitFailure;
  }
}
