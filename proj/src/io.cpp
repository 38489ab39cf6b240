#include "goh_atlas/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "goh_atlas/errors.hpp"

namespace goh_atlas::io {
namespace {

void write_double(std::ostringstream& os, double d) {
  if (!std::isfinite(d)) {
    os << "null";
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  os << buf;
  // keep it a float on the way back in
  if (std::string_view(buf).find_first_of(".eE") == std::string_view::npos) os << ".0";
}

void write(std::ostringstream& os, const json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << pad << json(k).dump() << ": ";
        write(os, v, indent + 2);
      }
      os << "\n" << close << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // arrays of scalars stay on one line
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
      if (flat) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write(os, j[i], indent);
        }
        os << "]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << pad;
        write(os, j[i], indent + 2);
      }
      os << "\n" << close << "]";
      return;
    }
    case json::value_t::number_float:
      write_double(os, j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json matrix_rows(const Eigen::MatrixXd& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vector_json(m.row(i).transpose()));
  return a;
}

json columns_json(const Eigen::MatrixXd& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.cols(); ++i) a.push_back(vector_json(m.col(i)));
  return a;
}

Eigen::MatrixXd columns_from_json(const json& values) {
  if (!values.is_array() || values.empty()) throw InvalidArgument("values must be a non-empty array");
  const auto m = static_cast<Eigen::Index>(values.front().size());
  Eigen::MatrixXd out(m, static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (static_cast<Eigen::Index>(values[i].size()) != m) throw InvalidArgument("values rows differ in length");
    for (Eigen::Index k = 0; k < m; ++k) out(k, static_cast<Eigen::Index>(i)) = values[i][static_cast<std::size_t>(k)].get<double>();
  }
  return out;
}

std::string word_string(const MultiIndex& J) {
  std::string s;
  for (int j : J) s += std::to_string(j);
  return s;
}

}  // namespace

json document(const json& body) {
  json out;
  out["schema"] = kSchema;
  for (const auto& [k, v] : body.items()) out[k] = v;
  return out;
}

void check_schema(const json& doc) {
  if (!doc.is_object() || !doc.contains("schema")) throw InvalidArgument("document has no schema tag");
  if (doc["schema"] != kSchema) throw InvalidArgument("unsupported schema " + doc["schema"].dump());
}

std::string dump(const json& j) {
  std::ostringstream os;
  write(os, j, 0);
  os << "\n";
  return os.str();
}

json to_json(const Poly& p) {
  json terms = json::array();
  for (const auto& [e, c] : p.terms()) {
    json exp = json::array();
    for (auto k : e) exp.push_back(static_cast<int>(k));
    terms.push_back({{"exp", exp}, {"coef", to_string(c)}});
  }
  return terms;
}

Poly poly_from_json(const json& j, int n) {
  if (!j.is_array()) throw InvalidArgument("polynomial must be an array of terms");
  Poly p(n);
  for (const auto& term : j) {
    const auto& exp = term.at("exp");
    if (static_cast<int>(exp.size()) != n) throw InvalidArgument("term exponent has wrong length");
    Exponent e;
    for (const auto& k : exp) {
      const int v = k.get<int>();
      if (v < 0 || v > 255) throw InvalidArgument("exponent out of range");
      e.push_back(static_cast<std::uint8_t>(v));
    }
    const auto& c = term.at("coef");
    p.add_term(e, c.is_string() ? parse_rational(c.get<std::string>()) : Rational(c.get<long>()));
  }
  return p;
}

json to_json(const Frame& frame) {
  auto fields_json = [](const std::vector<PolyVec>& fields) {
    json a = json::array();
    for (const auto& X : fields) {
      json comps = json::array();
      for (const auto& c : X) comps.push_back(to_json(c));
      a.push_back(comps);
    }
    return a;
  };
  json j;
  j["n"] = frame.n;
  j["r"] = frame.r;
  j["fields"] = fields_json(frame.fields);
  if (!frame.weights.empty()) j["weights"] = frame.weights;
  j["normal_form"] = frame.normal_form;
  if (!frame.labels.empty()) j["labels"] = frame.labels;
  if (!frame.brackets.empty()) {
    json b = json::array();
    for (const auto& J : frame.brackets) b.push_back(word_string(J));
    j["brackets"] = b;
  }
  if (!frame.completion.empty()) j["completion"] = fields_json(frame.completion);
  return j;
}

Frame frame_from_json(const json& j) {
  Frame f;
  f.n = j.at("n").get<int>();
  f.r = j.at("r").get<int>();
  auto read_fields = [&](const json& a) {
    std::vector<PolyVec> out;
    for (const auto& X : a) {
      PolyVec v;
      for (const auto& c : X) v.push_back(poly_from_json(c, f.n));
      out.push_back(std::move(v));
    }
    return out;
  };
  f.fields = read_fields(j.at("fields"));
  if (j.contains("weights")) f.weights = j["weights"].get<std::vector<int>>();
  if (j.contains("normal_form")) f.normal_form = j["normal_form"].get<bool>();
  if (j.contains("labels")) f.labels = j["labels"].get<std::vector<std::string>>();
  if (j.contains("brackets"))
    for (const auto& s : j["brackets"]) {
      MultiIndex J;
      for (char ch : s.get<std::string>()) {
        if (ch < '1' || ch > '9') throw InvalidArgument("bracket labels are digit strings");
        J.push_back(ch - '0');
      }
      f.brackets.push_back(J);
    }
  if (j.contains("completion")) f.completion = read_fields(j["completion"]);
  f.validate();
  return f;
}

json to_json(const LyndonBasis& basis) {
  json j;
  j["rank"] = basis.rank();
  j["step"] = basis.step();
  j["dimension"] = basis.size();
  j["words"] = basis.words();
  j["weights"] = basis.weights();
  return j;
}

json to_json(const StructureTable& table) {
  json j;
  j["rank"] = table.rank();
  j["labels"] = table.labels();
  j["weights"] = table.weights();
  json brackets = json::array();
  for (int a = 0; a < table.size(); ++a)
    for (int b = a + 1; b < table.size(); ++b) {
      const auto& c = table.at(a, b);
      if (c.is_zero()) continue;
      json value = json::object();
      for (const auto& [k, q] : c.coeffs()) value[table.labels()[static_cast<std::size_t>(k)]] = to_string(q);
      brackets.push_back({{"i", table.labels()[static_cast<std::size_t>(a)]},
                          {"j", table.labels()[static_cast<std::size_t>(b)]},
                          {"value", value}});
    }
  j["brackets"] = brackets;
  return j;
}

json to_json(const GohSystem<Rational>& sys) {
  json j;
  j["r"] = sys.r;
  json lambda = json::array();
  for (const auto& l : sys.lambda) lambda.push_back(to_string(l));
  j["lambda"] = lambda;
  json polys = json::object();
  for (const auto& [hk, p] : sys.F) {
    polys[std::to_string(hk.first) + "," + std::to_string(hk.second)] = to_json(p);
  }
  j["polys"] = polys;
  json text = json::object();
  for (const auto& [hk, p] : sys.F) text[std::to_string(hk.first) + "," + std::to_string(hk.second)] = p.str();
  j["text"] = text;
  return j;
}

json to_json(const MetabelianVerdict& v) {
  json j;
  j["metabelian"] = v.metabelian;
  j["depth"] = v.depth;
  if (v.witness) {
    j["witness"] = {{"I", v.witness->I},
                    {"J", v.witness->J},
                    {"nonzero_component", {{"index", v.witness->component}, {"value", v.witness->value}}}};
  }
  return j;
}

json to_json(const SampledCurve& c) {
  json j;
  j["t"] = c.t;
  j["values"] = columns_json(c.points);
  return j;
}

SampledCurve curve_from_json(const json& j) {
  SampledCurve c;
  c.t = j.at("t").get<std::vector<double>>();
  c.points = columns_from_json(j.at("values"));
  c.validate();
  return c;
}

json to_json(const Control& u) {
  json j;
  j["t"] = u.times();
  j["values"] = columns_json(u.values());
  return j;
}

Control control_from_json(const json& j) {
  const auto t = j.at("t").get<std::vector<double>>();
  const auto values = j.at("values").get<std::vector<std::vector<double>>>();
  return Control::from_samples(t, values);
}

json to_json(const ExtremalResiduals& res) {
  json j;
  j["rho_sup"] = res.rho_sup;
  j["sigma_sup"] = res.sigma_sup;
  j["t"] = res.t;
  j["rho"] = matrix_rows(res.rho);
  json pairs = json::array();
  for (const auto& [h, k] : res.pairs) pairs.push_back(std::to_string(h) + "," + std::to_string(k));
  j["pairs"] = pairs;
  j["sigma"] = matrix_rows(res.sigma);
  return j;
}

json to_json(const AbnormalRecovery& rec) {
  json j;
  j["threshold"] = rec.threshold;
  j["sigma_ratio_min"] = rec.sigma_ratio_min;
  j["stack_norm"] = rec.stack_norm;
  j["singular_values"] = vector_json(rec.singular_values);
  json cands = json::array();
  for (const auto& c : rec.candidates) cands.push_back(vector_json(c));
  j["candidates"] = cands;
  return j;
}

json to_json(const Containment& c) {
  json j;
  j["degree"] = c.degree;
  j["null_space_dim"] = c.null_space_dim;
  j["sigma_min_ratio"] = c.sigma_min_ratio;
  j["singular_values"] = vector_json(c.singular_values);
  return j;
}

json to_json(const VarietyTrace& trace) {
  json j;
  j["window"] = {trace.window.x1_min, trace.window.x1_max, trace.window.x2_min, trace.window.x2_max};
  j["resolution"] = trace.resolution;
  j["whole_plane"] = trace.whole_plane;
  j["max_abs"] = trace.max_abs;
  j["tolerance"] = trace.tolerance;
  j["branches"] = trace.polylines.size();
  json sing = json::array();
  for (const auto& s : trace.singular_candidates)
    sing.push_back({{"point", {s.point.x(), s.point.y()}}, {"order", s.order}, {"tangents", s.tangents}});
  j["singular_candidates"] = sing;
  return j;
}

std::string polylines_csv(const VarietyTrace& trace) {
  std::ostringstream os;
  os << "x1,x2,branch_id\n";
  char buf[96];
  for (std::size_t b = 0; b < trace.polylines.size(); ++b)
    for (const auto& p : trace.polylines[b]) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%zu\n", p.x(), p.y(), b);
      os << buf;
    }
  return os.str();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << text;
}

}  // namespace goh_atlas::io
