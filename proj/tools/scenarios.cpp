#include "scenarios.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <random>

#include "goh_atlas/errors.hpp"
#include "goh_atlas/goh.hpp"
#include "goh_atlas/metabelian.hpp"
#include "goh_atlas/normalform.hpp"
#include "goh_atlas/trajectories.hpp"

namespace goh_atlas::cli {
namespace {

using Eigen::VectorXd;
using io::json;

class Run {
 public:
  Run(std::string name, const ScenarioOptions& options) : opt_(options) {
    report_.scenario = std::move(name);
    if (opt_.dir) std::filesystem::create_directories(*opt_.dir);
  }

  double bound(double fallback) const { return opt_.tol.value_or(fallback); }

  void check(std::string name, bool pass, json value, std::string bound) {
    std::clog << "[" << report_.scenario << "] " << (pass ? "ok   " : "FAIL ") << name << "\n";
    report_.checks.push_back({std::move(name), pass, std::move(value), std::move(bound)});
  }
  void at_most(std::string name, double value, double limit) {
    check(std::move(name), value <= limit, value, "<= " + fmt(limit));
  }
  void at_least(std::string name, double value, double limit) {
    check(std::move(name), value > limit, value, "> " + fmt(limit));
  }

  void emit(const std::string& file, const json& body) {
    if (opt_.dir) io::write_text(*opt_.dir + "/" + file, io::dump(io::document(body)));
  }
  void emit_text(const std::string& file, const std::string& text) {
    if (opt_.dir) io::write_text(*opt_.dir + "/" + file, text);
  }

  std::mt19937_64& rng() { return rng_; }
  ScenarioReport take() { return std::move(report_); }

 private:
  static std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
  }

  ScenarioOptions opt_;
  ScenarioReport report_;
  std::mt19937_64 rng_{opt_.seed};
};

VectorXd unit(int n, int i) { return VectorXd::Unit(n, i); }

std::vector<Rational> unit_rational(int n, int i) {
  std::vector<Rational> v(static_cast<std::size_t>(n), Rational(0));
  v[static_cast<std::size_t>(i)] = 1;
  return v;
}

Control random_control(std::mt19937_64& rng, int r, int steps) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Eigen::MatrixXd values(r, steps + 1);
  for (Eigen::Index i = 0; i < values.size(); ++i) values.data()[i] = d(rng);
  return Control(0.0, 1.0, values);
}

VectorXd random_vector(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

// max |x1| over the traced vertices, and whether they reach both x2 edges
std::pair<double, bool> vertical_line_fit(const VarietyTrace& trace) {
  double worst = 0.0, lo = INFINITY, hi = -INFINITY;
  for (const auto& line : trace.polylines)
    for (const auto& p : line) {
      worst = std::max(worst, std::abs(p.x()));
      lo = std::min(lo, p.y());
      hi = std::max(hi, p.y());
    }
  const double h = (trace.window.x2_max - trace.window.x2_min) / trace.resolution;
  return {worst, lo <= trace.window.x2_min + h && hi >= trace.window.x2_max - h};
}

void metabelian_checks(Run& run, const Frame& frame, int depth, bool expected) {
  const auto v = is_metabelian(frame, depth);
  run.emit("verdict.json", io::to_json(v));
  run.check("metabelian verdict", v.metabelian == expected, v.metabelian, expected ? "true" : "false");
}

void heisenberg(Run& run) {
  const Frame H = heisenberg_frame();
  run.emit("frame.json", io::to_json(H));
  metabelian_checks(run, H, 4, true);

  const auto sys = goh_polynomials(H, unit_rational(3, 2));
  run.emit("goh.json", io::to_json(sys));
  run.check("goh polynomial for e3 is 1", sys.at(1, 2) == Poly::constant(2, 1), sys.at(1, 2).str(), "1");
  const auto trace = trace_variety(sys);
  run.emit_text("trace.csv", io::polylines_csv(trace));
  run.check("variety is empty", trace.polylines.empty() && !trace.whole_plane, trace.polylines.size(), "0 branches");

  auto loop = [](double t) -> VectorXd {
    if (t < 1) return Eigen::Vector2d(1, 0);
    if (t < 2) return Eigen::Vector2d(0, 1);
    if (t < 3) return Eigen::Vector2d(-1, 0);
    return Eigen::Vector2d(0, -1);
  };
  const auto square = flow_control(H, Control::analytic(loop, 2, 0.0, 4.0, 8), VectorXd::Zero(3));
  const VectorXd end = square.points.col(square.size() - 1);
  run.at_most("square loop endpoint (0,0,1)", (end - Eigen::Vector3d(0, 0, 1)).cwiseAbs().maxCoeff(), run.bound(1e-12));

  const int N = 10000;
  SampledCurve circle;
  circle.points.resize(2, N + 1);
  for (int i = 0; i <= N; ++i) {
    const double t = 2 * std::numbers::pi * i / N;
    circle.t.push_back(t);
    circle.points.col(i) << std::cos(t), std::sin(t);
  }
  const auto lift = horizontal_lift(H, circle, Eigen::Vector3d(1, 0, 0));
  run.emit("lift.json", io::to_json(lift.curve));
  run.at_most("circle lift gains area pi", std::abs(lift.curve.points(2, N) - std::numbers::pi), run.bound(1e-6));

  const auto rec = recover_abnormal_covector(H, lift.control, Eigen::Vector3d(1, 0, 0));
  run.emit("recovery.json", io::to_json(rec));
  run.check("no abnormal covector on the circle", rec.candidates.empty(), rec.candidates.size(), "0 candidates");
}

void f23_line(Run& run) {
  const Frame F = realize_frame(generate_basis(2, 3)).frame;
  run.emit("frame.json", io::to_json(F));
  metabelian_checks(run, F, 6, true);

  auto kappa = [](double t) -> VectorXd { return Eigen::Vector2d(0, t); };
  auto velocity = [](double) -> VectorXd { return Eigen::Vector2d(0, 1); };
  const auto lift = horizontal_lift(F, kappa, velocity, 0.0, 1.0, 200, VectorXd::Zero(5));
  run.emit("lift.json", {{"curve", io::to_json(lift.curve)}, {"control", io::to_json(lift.control)}});
  run.at_most("lift stays at (0,t,0,0,0)", (lift.curve.points.bottomRows(3)).cwiseAbs().maxCoeff() +
                                               lift.curve.points.row(0).cwiseAbs().maxCoeff(),
              run.bound(1e-12));

  const auto rec = recover_abnormal_covector(F, lift.control, VectorXd::Zero(5));
  run.emit("recovery.json", io::to_json(rec));
  run.check("one abnormal candidate", rec.candidates.size() == 1, rec.candidates.size(), "1");
  if (!rec.candidates.empty())
    run.at_least("candidate aligned with e4", std::abs(rec.candidates[0][3]), 1 - 1e-6);

  const auto res = extremal_residuals(F, lift.control, VectorXd::Zero(5), unit(5, 3));
  run.emit("residuals.json", io::to_json(res));
  run.at_most("abnormal residual for e4", res.rho_sup, run.bound(1e-8));
  run.at_most("goh residual for e4", res.sigma_sup, run.bound(1e-8));

  const auto sys = goh_polynomials(F, unit_rational(5, 3));
  run.emit("goh.json", io::to_json(sys));
  run.check("goh polynomial for e4 is x1", sys.at(1, 2) == parse_poly("x1", 2), sys.at(1, 2).str(), "x1");
  const auto trace = trace_variety(sys);
  run.emit_text("trace.csv", io::polylines_csv(trace));
  const auto [dev, spans] = vertical_line_fit(trace);
  run.check("variety trace is the line x1 = 0", !trace.polylines.empty() && spans && dev <= 1e-9, dev, "|x1| <= 1e-9");
}

void f24(Run& run) {
  const Frame F = realize_frame(generate_basis(2, 4)).frame;
  run.emit("frame.json", io::to_json(F));
  metabelian_checks(run, F, 8, true);
  double push = 0.0, goh = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Control u = random_control(run.rng(), 2, 200);
    const VectorXd x0 = random_vector(run.rng(), F.n);
    push = std::max(push, pushforward_identity_residual(F, u, x0));
    const VectorXd l = random_vector(run.rng(), F.n);
    const auto sys = goh_polynomials(F, std::vector<double>(l.data(), l.data() + l.size()));
    const auto res = extremal_residuals(F, u, x0, l);
    const auto curve = flow_control(F, u, x0);
    for (int i = 0; i < curve.size(); ++i) {
      const std::vector<double> p{curve.points(0, i), curve.points(1, i)};
      goh = std::max(goh, std::abs(res.sigma(0, i) - sys.at(1, 2).evaluate<double>(p)));
    }
  }
  run.at_most("pushforward identity, 20 random controls", push, run.bound(1e-8));
  run.at_most("goh residual equals F along the curve", goh, run.bound(1e-8));
}

void f25(Run& run) {
  const Frame F = realize_frame(generate_basis(2, 5)).frame;
  run.emit("frame.json", io::to_json(F));
  const auto v = is_metabelian(F, 5);
  run.emit("verdict.json", io::to_json(v));
  run.check("not metabelian", !v.metabelian, v.metabelian, "false");
  const bool witness = v.witness && v.witness->I == MultiIndex{1, 2} && v.witness->J == MultiIndex{1, 1, 2};
  run.check("witness ((1,2),(1,1,2))", witness, v.witness ? io::to_json(v)["witness"] : json(nullptr), "((1,2),(1,1,2))");
  const auto rotating =
      Control::analytic([](double t) -> VectorXd { return Eigen::Vector2d(std::cos(t), std::sin(t)); }, 2, 0.0,
                        2 * std::numbers::pi, 400);
  run.at_least("pushforward identity fails visibly", pushforward_identity_residual(F, rotating, VectorXd::Zero(F.n)),
               1e-3);
}

void martinet(Run& run) {
  const Frame M = martinet_frame();
  run.emit("frame.json", io::to_json(M));
  metabelian_checks(run, M, 4, true);
  const auto sys = goh_polynomials(M, unit_rational(3, 2));
  run.emit("goh.json", io::to_json(sys));
  run.check("goh polynomial for e3 is x1", sys.at(1, 2) == parse_poly("x1", 2), sys.at(1, 2).str(), "x1");
  const auto trace = trace_variety(sys);
  run.emit_text("trace.csv", io::polylines_csv(trace));
  const auto [dev, spans] = vertical_line_fit(trace);
  run.check("variety trace is the line x1 = 0", !trace.polylines.empty() && spans && dev <= 1e-9, dev, "|x1| <= 1e-9");

  auto kappa = [](double t) -> VectorXd { return Eigen::Vector2d(0, t); };
  auto velocity = [](double) -> VectorXd { return Eigen::Vector2d(0, 1); };
  const auto lift = horizontal_lift(M, kappa, velocity, 0.0, 1.0, 200, VectorXd::Zero(3));
  const auto rec = recover_abnormal_covector(M, lift.control, VectorXd::Zero(3));
  run.emit("recovery.json", io::to_json(rec));
  run.check("one abnormal candidate", rec.candidates.size() == 1, rec.candidates.size(), "1");
  if (!rec.candidates.empty()) run.at_least("candidate aligned with e3", std::abs(rec.candidates[0][2]), 1 - 1e-6);
}

void f27_spiral(Run& run) {
  const auto started = std::chrono::steady_clock::now();
  const Frame F = realize_frame(generate_basis(2, 7), false).frame;
  run.emit("frame.json", io::to_json(F));
  const auto v = is_metabelian(F, 7);
  run.emit("verdict.json", io::to_json(v));
  run.check("not metabelian", !v.metabelian && v.witness.has_value(), v.metabelian, "false with witness");

  const double eps = 1e-2;
  const int N = 20000;
  VectorXd x0 = VectorXd::Zero(F.n);
  x0.head(2) = spiral_point(eps);
  const auto coarse = horizontal_lift(F, spiral_point, spiral_velocity, eps, 1.0, N, x0);
  const auto rec = recover_abnormal_covector(F, coarse.control, x0, run.bound(kAbnormalThreshold));
  run.emit("recovery.json", io::to_json(rec));
  run.check("abnormal candidate found", !rec.candidates.empty(), rec.candidates.size(), ">= 1");
  run.at_most("sigma_min / sigma_max", rec.sigma_ratio_min, 1e-6);
  if (!rec.candidates.empty()) {
    const auto fine = horizontal_lift(F, spiral_point, spiral_velocity, eps, 1.0, 4 * N, x0);
    const auto res = extremal_residuals(F, fine.control, x0, rec.candidates[0]);
    run.at_most("revalidation on a 4x finer grid (relative to stack norm)", res.rho_sup / rec.stack_norm, 1e-5);
  }

  const auto spiral = spiral_curve(1e-3, 5000);
  run.emit("spiral.json", io::to_json(spiral));
  json dims = json::array();
  int worst = 0;
  for (int d = 1; d <= 6; ++d) {
    const auto c = polynomial_containment(spiral.points, d);
    dims.push_back(io::to_json(c));
    worst = std::max(worst, c.null_space_dim);
  }
  run.emit("containment.json", {{"containment", dims}});
  run.check("containment null space 0 up to degree 6", worst == 0, dims, "null_space_dim = 0 for degrees 1..6");
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  run.at_most("runtime in seconds", seconds, 600);
}

}  // namespace

bool ScenarioReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

io::json ScenarioReport::to_json() const {
  json j;
  j["scenario"] = scenario;
  j["pass"] = pass();
  json cs = json::array(), failures = json::array();
  for (const auto& c : checks) {
    cs.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"bound", c.bound}});
    if (!c.pass) failures.push_back(c.name);
  }
  j["checks"] = cs;
  j["failures"] = failures;
  return j;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"heisenberg", "f23-line", "f24", "f25", "martinet", "f27-spiral"};
  return names;
}

ScenarioReport run_scenario(const std::string& name, const ScenarioOptions& options) {
  Run run(name, options);
  if (name == "heisenberg") heisenberg(run);
  else if (name == "f23-line") f23_line(run);
  else if (name == "f24") f24(run);
  else if (name == "f25") f25(run);
  else if (name == "martinet") martinet(run);
  else if (name == "f27-spiral") f27_spiral(run);
  else throw InvalidArgument("unknown scenario '" + name + "'");
  return run.take();
}

}  // namespace goh_atlas::cli
