#include "goh_atlas/goh.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <unordered_map>

namespace goh_atlas {
namespace {

// F and its first and second partial derivatives on the plane.
struct PlaneFunction {
  explicit PlaneFunction(const Polynomial<double>& f)
      : F(f), F1(f.derivative(0)), F2(f.derivative(1)),
        F11(F1.derivative(0)), F12(F1.derivative(1)), F22(F2.derivative(1)) {}

  static double at(const Polynomial<double>& p, const Eigen::Vector2d& x) {
    const double xs[2] = {x[0], x[1]};
    return p.evaluate(std::span<const double>(xs, 2));
  }
  double value(const Eigen::Vector2d& x) const { return at(F, x); }
  Eigen::Vector2d gradient(const Eigen::Vector2d& x) const { return {at(F1, x), at(F2, x)}; }
  Eigen::Matrix2d hessian(const Eigen::Vector2d& x) const {
    Eigen::Matrix2d h;
    h(0, 0) = at(F11, x);
    h(0, 1) = h(1, 0) = at(F12, x);
    h(1, 1) = at(F22, x);
    return h;
  }

  Polynomial<double> F, F1, F2, F11, F12, F22;
};

struct Grid {
  Window w;
  int res = 0;
  double dx = 0, dy = 0;
  int stride() const { return res + 1; }
  int node(int i, int j) const { return j * stride() + i; }
  Eigen::Vector2d point(int i, int j) const { return {w.x1_min + i * dx, w.x2_min + j * dy}; }
};

// Levenberg-Marquardt on (F, d1 F, d2 F) from a seed.
Eigen::Vector2d refine_singular(const PlaneFunction& f, Eigen::Vector2d p) {
  auto residual = [&](const Eigen::Vector2d& x) {
    Eigen::Vector3d r;
    r << f.value(x), f.gradient(x);
    return r;
  };
  double mu = 1e-3;
  Eigen::Vector3d r = residual(p);
  for (int it = 0; it < 200 && r.norm() > 0.0; ++it) {
    Eigen::Matrix<double, 3, 2> J;
    J.row(0) = f.gradient(p).transpose();
    J.bottomRows<2>() = f.hessian(p);
    const Eigen::Matrix2d A = J.transpose() * J + mu * Eigen::Matrix2d::Identity();
    const Eigen::Vector2d d = A.ldlt().solve(-J.transpose() * r);
    const Eigen::Vector3d rt = residual(p + d);
    if (rt.norm() < r.norm()) {
      p += d;
      r = rt;
      mu = std::max(mu / 3.0, 1e-12);
      if (d.norm() <= 1e-15 * (1.0 + p.norm())) break;
    } else {
      mu *= 4.0;
      if (mu > 1e12) break;
    }
  }
  return p;
}

// Coefficients of the lowest nonvanishing homogeneous part of F(p + (u, v)),
// indexed by the power of u.
std::vector<double> lowest_homogeneous_part(const Polynomial<double>& F, const Eigen::Vector2d& p, double rel) {
  const Polynomial<double> u = Polynomial<double>::variable(2, 0), v = Polynomial<double>::variable(2, 1);
  const std::vector<Polynomial<double>> subs{u + Polynomial<double>::constant(2, p[0]),
                                             v + Polynomial<double>::constant(2, p[1])};
  const Polynomial<double> G = F.compose(std::span<const Polynomial<double>>(subs));
  const int deg = G.total_degree();
  std::vector<std::vector<double>> parts(static_cast<std::size_t>(deg + 1));
  double scale = 0.0;
  for (int d = 0; d <= deg; ++d) parts[static_cast<std::size_t>(d)].assign(static_cast<std::size_t>(d + 1), 0.0);
  for (const auto& [e, c] : G.terms()) {
    parts[static_cast<std::size_t>(e[0] + e[1])][e[0]] = c;
    scale = std::max(scale, std::abs(c));
  }
  for (const auto& part : parts) {
    double m = 0.0;
    for (double c : part) m = std::max(m, std::abs(c));
    if (m > rel * scale) return part;
  }
  return {};
}

}  // namespace

void require_metabelian_shape(const Frame& frame) {
  const auto report = verify_normal_form(frame);
  if (!report.pass)
    throw PreconditionError("frame is not in normal form at (k=" + std::to_string(report.failures.front().k) +
                            ", j=" + std::to_string(report.failures.front().j) + ")");
  const auto dep = coefficient_dependence(frame);
  if (!dep.only_first_variables) {
    const auto& o = dep.offending.front();
    throw PreconditionError("coefficient A_{" + std::to_string(o[0]) + "," + std::to_string(o[1]) +
                            "} depends on x" + std::to_string(o[2]) + "; frame is not metabelian");
  }
}

std::vector<double> homogeneous_roots(const std::vector<double>& coeffs) {
  const int m = static_cast<int>(coeffs.size()) - 1;
  if (m < 1) return {};
  auto h = [&](double t) {
    const double c = std::cos(t), s = std::sin(t);
    double sum = 0.0;
    for (int i = 0; i <= m; ++i) sum += coeffs[static_cast<std::size_t>(i)] * std::pow(c, i) * std::pow(s, m - i);
    return sum;
  };
  constexpr int N = 2048;
  const double pi = std::numbers::pi;
  std::vector<double> vals(N + 1);
  double hmax = 0.0;
  for (int k = 0; k <= N; ++k) {
    vals[static_cast<std::size_t>(k)] = h(pi * k / N);
    hmax = std::max(hmax, std::abs(vals[static_cast<std::size_t>(k)]));
  }
  if (hmax == 0.0) return {};
  std::vector<double> roots;
  auto add = [&](double t) {
    t = std::fmod(t, pi);
    if (t < 0) t += pi;
    if (pi - t < 1e-9) t = 0.0;
    for (double r : roots)
      if (std::abs(r - t) < 1e-6 || pi - std::abs(r - t) < 1e-6) return;
    roots.push_back(t);
  };
  const double zero = 1e-12 * hmax;
  int last = -1;  // index of the last sample with a definite sign
  for (int k = 0; k <= N; ++k) {
    const double v = vals[static_cast<std::size_t>(k)];
    if (std::abs(v) <= zero) {
      add(pi * k / N);
      continue;
    }
    if (last >= 0 && (v > 0) != (vals[static_cast<std::size_t>(last)] > 0) && k - last == 1) {
      double lo = pi * last / N, hi = pi * k / N;
      const bool lo_pos = vals[static_cast<std::size_t>(last)] > 0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        ((h(mid) > 0) == lo_pos ? lo : hi) = mid;
      }
      add(0.5 * (lo + hi));
    }
    last = k;
  }
  // Tangential (even multiplicity) roots show up as small local minima of |h|.
  for (int k = 1; k < N; ++k) {
    const double a = std::abs(vals[static_cast<std::size_t>(k - 1)]), b = std::abs(vals[static_cast<std::size_t>(k)]),
                 c = std::abs(vals[static_cast<std::size_t>(k + 1)]);
    if (b <= a && b <= c && b <= 1e-6 * hmax) add(pi * k / N);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

VarietyTrace trace_variety(const Polynomial<double>& Fpoly, const Window& window, int resolution, double rel_tol) {
  if (Fpoly.nvars() != 2) throw InvalidArgument("trace_variety: polynomial must have two variables");
  if (resolution < 1) throw InvalidArgument("trace_variety: resolution must be positive");
  if (!(window.x1_min < window.x1_max && window.x2_min < window.x2_max))
    throw InvalidArgument("trace_variety: empty window");
  VarietyTrace out;
  out.window = window;
  out.resolution = resolution;
  if (Fpoly.is_zero()) {
    out.whole_plane = true;
    return out;
  }

  const PlaneFunction f(Fpoly);
  Grid g{window, resolution, (window.x1_max - window.x1_min) / resolution, (window.x2_max - window.x2_min) / resolution};
  const int S = g.stride();
  std::vector<double> val(static_cast<std::size_t>(S) * S), slope(static_cast<std::size_t>(S) * S);
  double max_grad = 0.0;
  for (int j = 0; j < S; ++j)
    for (int i = 0; i < S; ++i) {
      const auto p = g.point(i, j);
      const double v = f.value(p);
      const double gn = f.gradient(p).norm();
      val[static_cast<std::size_t>(g.node(i, j))] = v;
      slope[static_cast<std::size_t>(g.node(i, j))] = gn;
      out.max_abs = std::max(out.max_abs, std::abs(v));
      max_grad = std::max(max_grad, gn);
    }
  out.tolerance = rel_tol * (1.0 + out.max_abs);
  const double tol = out.tolerance;

  // Zero nodes are vertices of their own; sign changes along an edge give a
  // vertex refined by bisection and keyed by the edge.
  auto sign_at = [&](int i, int j) {
    const double v = val[static_cast<std::size_t>(g.node(i, j))];
    return (v > 0) - (v < 0);
  };
  std::unordered_map<long long, std::size_t> vertex_index;
  std::vector<Eigen::Vector2d> vertices;
  auto node_vertex = [&](int i, int j) -> long long {
    const long long key = -1 - static_cast<long long>(g.node(i, j));
    if (vertex_index.emplace(key, vertices.size()).second) vertices.push_back(g.point(i, j));
    return key;
  };
  auto edge_vertex = [&](int ia, int ja, int ib, int jb, bool vertical) -> long long {
    const int a = g.node(ia, ja);
    const long long key = 2LL * a + (vertical ? 1 : 0);
    if (vertex_index.count(key)) return key;
    const bool a_negative = val[static_cast<std::size_t>(a)] < 0;
    Eigen::Vector2d lo = a_negative ? g.point(ia, ja) : g.point(ib, jb);
    Eigen::Vector2d hi = a_negative ? g.point(ib, jb) : g.point(ia, ja);
    Eigen::Vector2d p = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      p = 0.5 * (lo + hi);
      const double fm = f.value(p);
      if (std::abs(fm) <= tol) break;
      (fm > 0 ? hi : lo) = p;
      if ((hi - lo).norm() <= 1e-16 * (1.0 + p.norm())) break;
    }
    vertex_index.emplace(key, vertices.size());
    vertices.push_back(p);
    return key;
  };

  std::vector<std::pair<long long, long long>> segments;
  std::set<std::pair<long long, long long>> seen;
  auto add_segment = [&](long long a, long long b) {
    if (a == b) return;
    const auto k = std::minmax(a, b);
    if (seen.insert(k).second) segments.emplace_back(a, b);
  };

  // Corners in the order bl, br, tr, tl; edge k joins corner k and k + 1.
  const int ci[4] = {0, 1, 1, 0}, cj[4] = {0, 0, 1, 1};
  for (int j = 0; j < resolution; ++j) {
    for (int i = 0; i < resolution; ++i) {
      int sg[4];
      for (int c = 0; c < 4; ++c) sg[c] = sign_at(i + ci[c], j + cj[c]);
      std::vector<long long> zeros, crossings;
      int zero_corner[4] = {0, 0, 0, 0};
      for (int c = 0; c < 4; ++c)
        if (sg[c] == 0) {
          zero_corner[c] = 1;
          zeros.push_back(node_vertex(i + ci[c], j + cj[c]));
        }
      long long edge_key[4] = {0, 0, 0, 0};
      for (int k = 0; k < 4; ++k) {
        const int a = k, b = (k + 1) % 4;
        if (sg[a] * sg[b] != -1) continue;
        // Keep the lower-left node first so shared edges get one key.
        const int ia = i + ci[a], ja = j + cj[a], ib = i + ci[b], jb = j + cj[b];
        const bool vertical = ia == ib;
        edge_key[k] = (ia + ja <= ib + jb) ? edge_vertex(ia, ja, ib, jb, vertical) : edge_vertex(ib, jb, ia, ja, vertical);
        crossings.push_back(edge_key[k]);
      }
      const std::size_t total = zeros.size() + crossings.size();
      if (total < 2) continue;
      if (zeros.empty() && crossings.size() == 4) {
        const bool center = f.value(g.point(i, j) + Eigen::Vector2d(0.5 * g.dx, 0.5 * g.dy)) > 0;
        if (center == (sg[0] > 0)) {
          add_segment(edge_key[0], edge_key[1]);
          add_segment(edge_key[2], edge_key[3]);
        } else {
          add_segment(edge_key[3], edge_key[0]);
          add_segment(edge_key[1], edge_key[2]);
        }
        continue;
      }
      if (total == 2) {
        std::vector<long long> ends = zeros;
        ends.insert(ends.end(), crossings.begin(), crossings.end());
        add_segment(ends[0], ends[1]);
        continue;
      }
      // Several zero corners: cell edges between zero corners lie on the set.
      for (int k = 0; k < 4; ++k)
        if (zero_corner[k] && zero_corner[(k + 1) % 4])
          add_segment(node_vertex(i + ci[k], j + cj[k]), node_vertex(i + ci[(k + 1) % 4], j + cj[(k + 1) % 4]));
      if (crossings.size() == 2) {
        add_segment(crossings[0], crossings[1]);
      } else if (crossings.size() == 1) {
        const Eigen::Vector2d& q = vertices[vertex_index.at(crossings[0])];
        long long best = zeros.front();
        for (long long z : zeros)
          if ((vertices[vertex_index.at(z)] - q).norm() < (vertices[vertex_index.at(best)] - q).norm()) best = z;
        add_segment(crossings[0], best);
      }
    }
  }

  // Chain segments into polylines, breaking at endpoints and junctions.
  std::unordered_map<long long, std::vector<std::size_t>> incident;
  std::vector<long long> order;
  for (std::size_t s = 0; s < segments.size(); ++s)
    for (long long v : {segments[s].first, segments[s].second}) {
      auto& list = incident[v];
      if (list.empty()) order.push_back(v);
      list.push_back(s);
    }
  std::vector<bool> used(segments.size(), false);
  auto walk = [&](long long start, std::size_t first) {
    std::vector<Eigen::Vector2d> line{vertices[vertex_index.at(start)]};
    long long cur = start;
    std::size_t seg = first;
    while (true) {
      used[seg] = true;
      cur = segments[seg].first == cur ? segments[seg].second : segments[seg].first;
      line.push_back(vertices[vertex_index.at(cur)]);
      const auto& inc = incident.at(cur);
      if (inc.size() == 2) {
        const std::size_t next = inc[0] == seg ? inc[1] : inc[0];
        if (used[next]) break;
        seg = next;
        continue;
      }
      // At a crossing, continue along the straightest unused segment.
      if (inc.size() < 4 || inc.size() % 2 != 0) break;
      const Eigen::Vector2d here = vertices[vertex_index.at(cur)];
      const Eigen::Vector2d dir = (here - line[line.size() - 2]).normalized();
      std::size_t best = segments.size();
      double best_dot = 0.5;
      for (std::size_t cand : inc) {
        if (used[cand]) continue;
        const long long other = segments[cand].first == cur ? segments[cand].second : segments[cand].first;
        const double d = dir.dot((vertices[vertex_index.at(other)] - here).normalized());
        if (d > best_dot) {
          best_dot = d;
          best = cand;
        }
      }
      if (best == segments.size()) break;
      seg = best;
    }
    out.polylines.push_back(std::move(line));
  };
  for (long long v : order)
    if (incident.at(v).size() % 2 == 1)
      for (std::size_t s : incident.at(v))
        if (!used[s]) walk(v, s);
  for (long long v : order)
    if (incident.at(v).size() > 2)
      for (std::size_t s : incident.at(v))
        if (!used[s]) walk(v, s);
  for (std::size_t s = 0; s < segments.size(); ++s)
    if (!used[s]) walk(segments[s].first, s);

  // Singular candidates: local minima of |F| + |grad F| refined by Levenberg-Marquardt.
  std::vector<std::pair<double, int>> seeds;
  for (int j = 0; j < S; ++j)
    for (int i = 0; i < S; ++i) {
      const auto gv = [&](int a, int b) {
        const auto k = static_cast<std::size_t>(g.node(a, b));
        return std::abs(val[k]) + slope[k];
      };
      const double here = gv(i, j);
      bool minimum = true;
      for (int dj = -1; dj <= 1 && minimum; ++dj)
        for (int di = -1; di <= 1 && minimum; ++di) {
          const int a = i + di, b = j + dj;
          if ((di || dj) && a >= 0 && b >= 0 && a < S && b < S && gv(a, b) < here) minimum = false;
        }
      if (minimum) seeds.emplace_back(here, g.node(i, j));
    }
  std::stable_sort(seeds.begin(), seeds.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  if (seeds.size() > 64) seeds.resize(64);
  const double f_tol = 1e-6 * (1.0 + out.max_abs), g_tol = 1e-6 * (1.0 + max_grad);
  const double merge = 2.0 * std::max(g.dx, g.dy);
  for (const auto& [score, node] : seeds) {
    const Eigen::Vector2d p = refine_singular(f, g.point(node % S, node / S));
    if (std::abs(f.value(p)) > f_tol || f.gradient(p).norm() > g_tol) continue;
    if (p[0] < window.x1_min - merge || p[0] > window.x1_max + merge || p[1] < window.x2_min - merge ||
        p[1] > window.x2_max + merge)
      continue;
    bool duplicate = false;
    for (const auto& c : out.singular_candidates) duplicate = duplicate || (c.point - p).norm() < merge;
    if (duplicate) continue;
    SingularCandidate c;
    c.point = p;
    const auto part = lowest_homogeneous_part(Fpoly, p, 1e-6);
    c.order = part.empty() ? 0 : static_cast<int>(part.size()) - 1;
    c.tangents = homogeneous_roots(part);
    out.singular_candidates.push_back(std::move(c));
  }
  std::sort(out.singular_candidates.begin(), out.singular_candidates.end(), [](const auto& a, const auto& b) {
    return std::pair(a.point[0], a.point[1]) < std::pair(b.point[0], b.point[1]);
  });
  return out;
}

}  // namespace goh_atlas
