#include "fractal_spectra/io.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "json.hpp"

namespace fractal_spectra {

using nlohmann::json;

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json vertices_json(const std::vector<Eigen::Vector2d>& vertices) {
  json out = json::array();
  for (const auto& v : vertices) out.push_back({v.x(), v.y()});
  return out;
}

json edges_json(const std::vector<std::pair<int, int>>& edges) {
  json out = json::array();
  for (const auto& [i, j] : edges) out.push_back({i, j});
  return out;
}

std::string branch_name(Branch b) {
  switch (b) {
    case Branch::Minus: return "-";
    case Branch::Plus: return "+";
    case Branch::Initial: break;
  }
  return "initial";
}

}  // namespace

std::string graph_to_json(const SGLevelGraph& g) {
  json j;
  j["level"] = g.level;
  j["vertices"] = vertices_json(g.vertices);
  j["edges"] = edges_json(g.edges);
  j["boundary"] = g.boundary;
  return j.dump();
}

std::string lattice_to_json(const LatticeGraph& g) {
  json j;
  j["level"] = g.level;
  j["vertices"] = vertices_json(g.vertices);
  j["edges"] = edges_json(g.edges);
  j["boundary"] = g.boundary;
  j["masses"] = g.masses;
  return j.dump();
}

std::string spectrum_to_csv(const SpectrumMultiset& s) {
  std::string out = "eigenvalue,multiplicity\n";
  for (const auto& e : s.entries) out += format_double(e.value) + "," + std::to_string(e.multiplicity) + "\n";
  return out;
}

std::string tree_to_json(const DecimationTree& tree) {
  json levels = json::array();
  for (const auto& level : tree.levels) {
    json entries = json::array();
    for (const auto& e : level) {
      json item;
      item["value"] = e.value;
      item["multiplicity"] = e.multiplicity;
      item["parent"] = e.parent < 0 ? json(nullptr) : json(e.parent);
      item["branch"] = branch_name(e.branch);
      entries.push_back(item);
    }
    levels.push_back(entries);
  }
  return json{{"levels", levels}}.dump();
}

std::string generating_set_to_json(const GeneratingSet& s) {
  json j;
  j["alpha"] = s.params.alpha;
  j["depth"] = s.depth;
  j["lambda_max"] = s.lambda_max;
  j["grid_points"] = s.grid_points;
  j["roots"] = s.roots;
  return j.dump();
}

GeneratingSet generating_set_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    GeneratingSet s;
    s.params = make_params(j.at("alpha").get<double>());
    s.depth = j.at("depth").get<int>();
    s.lambda_max = j.at("lambda_max").get<double>();
    s.grid_points = j.at("grid_points").get<int>();
    s.roots = j.at("roots").get<std::vector<double>>();
    if (!std::is_sorted(s.roots.begin(), s.roots.end())) throw Error(ErrorKind::InvalidArgument, "roots not sorted");
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("malformed generating-set JSON: ") + e.what());
  }
}

std::string ladder_to_csv(const SpectrumLadder& ladder) {
  std::string out = "value,k,p\n";
  for (const auto& v : ladder.values) {
    out += format_double(v.value) + "," + std::to_string(v.k) + "," + std::to_string(v.p) + "\n";
  }
  return out;
}

std::string zeta_to_csv(const std::vector<ZetaValue>& values) {
  std::string out = "s_re,s_im,value_re,value_im,error_estimate\n";
  for (const auto& z : values) {
    out += format_double(z.s.real()) + "," + format_double(z.s.imag()) + "," + format_double(z.value.real()) + "," +
           format_double(z.value.imag()) + "," + format_double(z.error) + "\n";
  }
  return out;
}

std::string poles_to_json(const std::vector<Pole>& poles) {
  json out = json::array();
  for (const auto& p : poles) out.push_back({{"k", p.k}, {"s", complex_json(p.s)}});
  return out.dump();
}

std::string unbounded_to_json(const UnboundedReport& r) {
  json j;
  j["kind"] = r.kind == UnboundedKind::SG ? "SG" : "SL";
  j["s"] = complex_json(r.s);
  j["base"] = r.base;
  j["branch"] = r.branch == HyperBranch::Inner ? "inner" : "outer";
  j["prefactor"] = r.prefactor ? complex_json(*r.prefactor) : json(nullptr);
  j["factor_value"] = complex_json(r.factor_value);
  j["product"] = r.product ? complex_json(*r.product) : json(nullptr);
  j["opposite_branch_value"] = complex_json(r.opposite_value);
  j["branch_sum"] = r.cancellation;
  return j.dump();
}

}  // namespace fractal_spectra
