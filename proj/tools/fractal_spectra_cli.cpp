#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fractal_spectra/cache.hpp"
#include "fractal_spectra/io.hpp"
#include "fractal_spectra/lattice_trace.hpp"
#include "fractal_spectra/sg_decimation.hpp"
#include "fractal_spectra/sg_graph.hpp"
#include "fractal_spectra/sl_operator.hpp"
#include "fractal_spectra/verify.hpp"
#include "fractal_spectra/zeta.hpp"

namespace fs = fractal_spectra;
using fs::cplx;
using nlohmann::json;

namespace {

struct CliConfig {
  std::string format;  // empty: the command's natural format
  std::string output;
  std::string cache_dir;
  std::string report;
  int parallelism = 0;
  fs::Tolerances tol;
};

struct Output {
  std::string text;
  std::size_t values = 0;
};

double parse_double(const std::string& text) {
  double v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  while (first < last && *first == ' ') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) throw CLI::ValidationError("not a number: '" + text + "'");
  return v;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item));
  return out;
}

/// "RE" or "RE,IM"
cplx parse_complex(const std::string& text) {
  const auto parts = parse_list(text);
  if (parts.empty() || parts.size() > 2) throw CLI::ValidationError("expected RE or RE,IM, got '" + text + "'");
  return {parts[0], parts.size() == 2 ? parts[1] : 0.0};
}

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

std::string csv_row(const std::vector<std::string>& cells) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) row += (i ? "," : "") + cells[i];
  return row + "\n";
}

std::string num(double x) { return fs::format_double(x); }

class Runner {
 public:
  explicit Runner(const CliConfig& cfg) : cfg_(cfg), cache_(fs::resolve_cache_dir(cfg.cache_dir.empty()
                                                                                    ? std::nullopt
                                                                                    : std::optional(cfg.cache_dir))) {}

  bool json_format(const char* natural) const { return (cfg_.format.empty() ? std::string(natural) : cfg_.format) == "json"; }

  fs::GeneratingSet generating_set(const fs::SLParams& params, double lambda_max, int grid, int depth) {
    std::ostringstream key_params;
    key_params << "alpha=" << num(params.alpha) << ";depth=" << depth << ";lambda_max=" << num(lambda_max)
               << ";grid=" << grid << ";root_tol=" << num(cfg_.tol.root_tol);
    const std::string key = fs::cache_key("sl.generating-set", key_params.str());
    if (auto hit = cache_.get(key)) {
      try {
        return fs::generating_set_from_json(*hit);
      } catch (const fs::Error& e) {
        cache_.reject(key, e.what());
      }
    }
    auto s = fs::generating_set(params, lambda_max, grid, depth, cfg_.tol.root_tol);
    cache_.put(key, fs::generating_set_to_json(s));
    return s;
  }

  const std::vector<std::string>& warnings() const { return cache_.warnings(); }
  const CliConfig& config() const { return cfg_; }

 private:
  CliConfig cfg_;
  fs::Cache cache_;
};

void emit(const CliConfig& cfg, const Output& out) {
  if (cfg.output.empty() || cfg.output == "-") {
    std::cout << out.text;
    if (!out.text.empty() && out.text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream file(cfg.output, std::ios::binary | std::ios::trunc);
  if (!file) throw fs::Error(fs::ErrorKind::InvalidArgument, "cannot write output file " + cfg.output);
  file << out.text;
  if (!out.text.empty() && out.text.back() != '\n') file << '\n';
}

void write_report(const CliConfig& cfg, const std::string& command, double seconds, std::size_t values,
                  const std::vector<std::string>& warnings, int exit_code) {
  if (cfg.report.empty()) return;
  json j;
  j["command"] = command;
  j["wall_time_seconds"] = seconds;
  j["values_emitted"] = values;
  j["warnings"] = warnings;
  j["exit_code"] = exit_code;
  std::ofstream(cfg.report, std::ios::trunc) << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// sg

Output sg_graph(Runner& r, int level) {
  const auto g = fs::build_level_graph(level);
  if (r.json_format("json")) return {fs::graph_to_json(g), static_cast<std::size_t>(g.vertex_count())};
  std::string out = "vertex,x,y,boundary\n";
  for (int i = 0; i < g.vertex_count(); ++i) {
    const auto& v = g.vertices[static_cast<std::size_t>(i)];
    out += csv_row({std::to_string(i), num(v.x()), num(v.y()), i < 3 ? "1" : "0"});
  }
  out += "edge_i,edge_j\n";
  for (const auto& [a, b] : g.edges) out += csv_row({std::to_string(a), std::to_string(b)});
  return {out, static_cast<std::size_t>(g.vertex_count())};
}

Output sg_spectrum(Runner& r, int level, const std::string& method) {
  if (method == "dense") {
    const auto s = fs::dense_spectrum(fs::build_level_graph(level));
    if (r.json_format("csv")) {
      json entries = json::array();
      for (const auto& e : s.entries) entries.push_back({{"value", e.value}, {"multiplicity", e.multiplicity}});
      return {json{{"level", level}, {"entries", entries}}.dump(), s.entries.size()};
    }
    return {fs::spectrum_to_csv(s), s.entries.size()};
  }
  const auto tree = fs::generate_graph_spectrum(level, false);
  if (method == "decimation") {
    if (r.json_format("csv")) return {fs::tree_to_json(tree), tree.levels.back().size()};
    return {fs::spectrum_to_csv(tree.spectrum(level)), tree.levels.back().size()};
  }
  const auto dense = fs::dense_spectrum(fs::build_level_graph(level));
  const auto dec = tree.spectrum(level);
  const std::size_t rows = std::max(dec.entries.size(), dense.entries.size());
  json j = json::array();
  std::string csv = "eigenvalue,multiplicity,oracle_eigenvalue,oracle_multiplicity,match\n";
  for (std::size_t i = 0; i < rows; ++i) {
    const bool has_d = i < dec.entries.size();
    const bool has_o = i < dense.entries.size();
    const bool match = has_d && has_o && std::abs(dec.entries[i].value - dense.entries[i].value) <= 1e-9 &&
                       dec.entries[i].multiplicity == dense.entries[i].multiplicity;
    csv += csv_row({has_d ? num(dec.entries[i].value) : "", has_d ? std::to_string(dec.entries[i].multiplicity) : "",
                    has_o ? num(dense.entries[i].value) : "",
                    has_o ? std::to_string(dense.entries[i].multiplicity) : "", match ? "1" : "0"});
    j.push_back({{"eigenvalue", has_d ? json(dec.entries[i].value) : json(nullptr)},
                 {"multiplicity", has_d ? json(dec.entries[i].multiplicity) : json(nullptr)},
                 {"oracle_eigenvalue", has_o ? json(dense.entries[i].value) : json(nullptr)},
                 {"oracle_multiplicity", has_o ? json(dense.entries[i].multiplicity) : json(nullptr)},
                 {"match", match}});
  }
  return {r.json_format("csv") ? j.dump() : csv, rows};
}

Output sg_harmonic(Runner& r, const std::string& boundary, int level) {
  const auto b = parse_list(boundary);
  if (b.size() != 3) throw CLI::ValidationError("--boundary expects A,B,C");
  const auto u = fs::harmonic_extend({b[0], b[1], b[2]}, level);
  const auto g = fs::build_level_graph(level);
  const double energy = fs::graph_energy(g, u.values);
  if (r.json_format("csv")) {
    std::vector<double> values(u.values.data(), u.values.data() + u.values.size());
    return {json{{"level", level}, {"values", values}, {"energy", energy}}.dump(), values.size()};
  }
  std::string out = "vertex,x,y,value\n";
  for (int i = 0; i < g.vertex_count(); ++i) {
    const auto& v = g.vertices[static_cast<std::size_t>(i)];
    out += csv_row({std::to_string(i), num(v.x()), num(v.y()), num(u.values[i])});
  }
  return {out, static_cast<std::size_t>(g.vertex_count())};
}

Output sg_fractal_eigenvalue(Runner& r, double seed, int m0, const std::string& signs, std::optional<double> tol) {
  fs::EigenSequence seq;
  seq.seed = seed;
  seq.m0 = m0;
  for (char c : signs) {
    if (c == '+') {
      seq.signs.push_back(1);
    } else if (c == '-') {
      seq.signs.push_back(-1);
    } else {
      throw CLI::ValidationError("--signs takes a string of '+' and '-'");
    }
  }
  const double t = tol.value_or(r.config().tol.sum_tol);
  const double value = fs::limit_eigenvalue(seq, t);
  if (r.json_format("csv")) return {json{{"seed", seed}, {"m0", m0}, {"signs", signs}, {"value", value}}.dump(), 1};
  return {"value\n" + num(value) + "\n", 1};
}

// ---------------------------------------------------------------------------
// sl

Output sl_params(Runner& r, double alpha) {
  const auto p = fs::make_params(alpha);
  if (r.json_format("csv")) return {json{{"alpha", p.alpha}, {"b", p.b}, {"delta", p.delta}, {"gamma", p.gamma}}.dump(), 4};
  return {"alpha,b,delta,gamma\n" + csv_row({num(p.alpha), num(p.b), num(p.delta), num(p.gamma)}), 4};
}

Output sl_propagator(Runner& r, double alpha, const std::string& lambda, int depth) {
  const auto p = fs::propagator(fs::make_params(alpha), parse_complex(lambda), depth);
  const cplx det = p.determinant();
  if (r.json_format("csv")) {
    return {json{{"lambda", cjson(p.lambda)}, {"depth", depth}, {"a", cjson(p.a())}, {"b", cjson(p.b())},
                 {"c", cjson(p.c())}, {"d", cjson(p.d())}, {"det", cjson(det)}}
                .dump(),
            4};
  }
  std::string out = "entry,re,im\n";
  const std::pair<const char*, cplx> entries[] = {{"a", p.a()}, {"b", p.b()}, {"c", p.c()}, {"d", p.d()}, {"det", det}};
  for (const auto& [name, z] : entries) out += csv_row({name, num(z.real()), num(z.imag())});
  return {out, 4};
}

Output sl_generating_set(Runner& r, double alpha, double lambda_max, int depth, int grid) {
  const auto s = r.generating_set(fs::make_params(alpha), lambda_max, grid, depth);
  if (r.json_format("csv")) return {fs::generating_set_to_json(s), s.roots.size()};
  std::string out = "k,lambda\n";
  for (std::size_t k = 0; k < s.roots.size(); ++k) out += csv_row({std::to_string(k + 1), num(s.roots[k])});
  return {out, s.roots.size()};
}

Output sl_spectrum(Runner& r, double alpha, const std::string& blowup, double lambda_max, int depth, int grid,
                   int floor_powers) {
  const auto params = fs::make_params(alpha);
  int n = fs::kInfiniteBlowup;
  if (blowup != "inf") {
    n = static_cast<int>(parse_double(blowup));
    if (n < 0 || std::to_string(n) != blowup) throw CLI::ValidationError("--blowup takes a non-negative integer or inf");
  }
  const double cover = n == fs::kInfiniteBlowup ? lambda_max : std::pow(params.gamma, n) * lambda_max;
  const auto s = r.generating_set(params, cover, grid, depth);
  const auto ladder = fs::ladder_spectrum(params, n, lambda_max, s, floor_powers);
  if (r.json_format("csv")) {
    json values = json::array();
    for (const auto& v : ladder.values) values.push_back({{"value", v.value}, {"k", v.k}, {"p", v.p}});
    json j{{"alpha", alpha}, {"blowup", blowup}, {"lambda_max", lambda_max}, {"values", values}};
    if (n == fs::kInfiniteBlowup) j["floor"] = ladder.floor;
    return {j.dump(), ladder.values.size()};
  }
  return {fs::ladder_to_csv(ladder), ladder.values.size()};
}

Output sl_functional_equation(Runner& r, double alpha, const std::string& grid_spec, int depth) {
  const auto g = parse_list(grid_spec);
  if (g.size() != 3 || !(g[0] > 0 && g[1] >= g[0] && g[2] >= 1)) {
    throw CLI::ValidationError("--lambda-grid expects LO,HI,COUNT with 0 < LO <= HI");
  }
  const auto params = fs::make_params(alpha);
  const int count = static_cast<int>(g[2]);
  json rows = json::array();
  std::string out = "lambda,distance,pass\n";
  for (int i = 0; i < count; ++i) {
    const double lambda = count == 1 ? g[0] : g[0] * std::pow(g[1] / g[0], static_cast<double>(i) / (count - 1));
    const double d = fs::proj_distance(fs::rho_map(params, fs::phi(params, lambda, depth).point),
                                       fs::phi(params, params.gamma * lambda, depth).point);
    const bool pass = d <= std::max(1e-6, r.config().tol.eq_tol);
    out += csv_row({num(lambda), num(d), pass ? "1" : "0"});
    rows.push_back({{"lambda", lambda}, {"distance", d}, {"pass", pass}});
  }
  return {r.json_format("csv") ? rows.dump() : out, static_cast<std::size_t>(count)};
}

// ---------------------------------------------------------------------------
// lattice

Output lattice_trace(Runner& r, const std::string& u0s, const std::string& u1s) {
  const cplx u0 = parse_complex(u0s), u1 = parse_complex(u1s);
  const auto t = fs::schur_trace(fs::assemble_Q1({u0, u1}), {0, 1, 2});
  std::optional<std::pair<cplx, cplx>> closed;
  try {
    closed = fs::trace_map_closed_form(u0, u1);
  } catch (const fs::Error&) {
  }
  json j{{"u0", cjson(u0)}, {"u1", cjson(u1)}, {"schur_u0", cjson(t.u0)}, {"schur_u1", cjson(t.u1)},
         {"invariance_residual", t.invariance_residual}, {"interior_determinant", cjson(t.interior_determinant)}};
  j["closed_form_u0"] = closed ? cjson(closed->first) : json(nullptr);
  j["closed_form_u1"] = closed ? cjson(closed->second) : json(nullptr);
  if (r.json_format("json")) return {j.dump(), 2};
  std::string out = "quantity,re,im\n";
  out += csv_row({"schur_u0", num(t.u0.real()), num(t.u0.imag())});
  out += csv_row({"schur_u1", num(t.u1.real()), num(t.u1.imag())});
  if (closed) {
    out += csv_row({"closed_form_u0", num(closed->first.real()), num(closed->first.imag())});
    out += csv_row({"closed_form_u1", num(closed->second.real()), num(closed->second.imag())});
  }
  out += csv_row({"interior_determinant", num(t.interior_determinant.real()), num(t.interior_determinant.imag())});
  out += csv_row({"invariance_residual", num(t.invariance_residual), "0"});
  return {out, 2};
}

Output lattice_g(Runner& r, const std::string& z0s, const std::string& z1s) {
  const auto image = fs::g_map(fs::ProjPoint1::of(parse_complex(z0s), parse_complex(z1s)));
  if (r.json_format("json")) return {json{{"image", {cjson(image[0]), cjson(image[1])}}}.dump(), 1};
  return {"z0_re,z0_im,z1_re,z1_im\n" +
              csv_row({num(image[0].real()), num(image[0].imag()), num(image[1].real()), num(image[1].imag())}),
          1};
}

Output lattice_conjugacy(Runner& r, int samples, unsigned seed, const std::optional<std::string>& at) {
  if (at) {
    const cplx z = parse_complex(*at);
    const auto c = fs::conjugacy_checks(z);
    const json row{{"z", cjson(z)}, {"literal", c.literal}, {"substitution", c.substitution},
                   {"conjugacy", c.conjugacy}, {"affine", c.affine}};
    return {r.json_format("csv") ? json::array({row}).dump()
                                 : "z_re,z_im,literal,substitution,conjugacy,affine\n" +
                                       csv_row({num(z.real()), num(z.imag()), num(c.literal), num(c.substitution),
                                                num(c.conjugacy), num(c.affine)}),
            1};
  }
  if (samples < 1) throw CLI::ValidationError("--samples must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2, 2);
  std::string out = "z_re,z_im,literal,substitution,conjugacy,affine\n";
  json rows = json::array();
  int taken = 0;
  while (taken < samples) {
    const cplx z(u(rng), u(rng));
    if (std::abs(z) > 2.0) continue;
    fs::ConjugacyResiduals c;
    try {
      c = fs::conjugacy_checks(z);
    } catch (const fs::Error&) {
      continue;
    }
    out += csv_row({num(z.real()), num(z.imag()), num(c.literal), num(c.substitution), num(c.conjugacy), num(c.affine)});
    rows.push_back({{"z", cjson(z)}, {"literal", c.literal}, {"substitution", c.substitution},
                    {"conjugacy", c.conjugacy}, {"affine", c.affine}});
    ++taken;
  }
  return {r.json_format("csv") ? rows.dump() : out, static_cast<std::size_t>(samples)};
}

// ---------------------------------------------------------------------------
// zeta

Output zeta_table(Runner& r, const fs::ZetaValue& v) {
  if (r.json_format("csv")) {
    return {json{{"s", cjson(v.s)}, {"value", cjson(v.value)}, {"error_estimate", v.error}, {"count", v.count}}.dump(), 1};
  }
  return {fs::zeta_to_csv({v}), 1};
}

Output zeta_sl(Runner& r, double alpha, const std::string& s_text, std::optional<int> n, bool unbounded,
               double lambda_max, int depth) {
  const cplx s = parse_complex(s_text);
  const auto params = fs::make_params(alpha);
  if (unbounded) {
    if (alpha >= 0.5) throw fs::Error(fs::ErrorKind::UnsupportedAlpha, "the unbounded case needs alpha < 1/2");
    fs::UnboundedInput in;
    in.kind = fs::UnboundedKind::SL;
    in.params = params;
    std::optional<fs::GeneratingSet> set;
    if (s.real() > 0) {
      set = r.generating_set(params, lambda_max, 0, depth);
      in.generating_set = &*set;
    }
    const auto report = fs::zeta_unbounded(in, s);
    if (r.json_format("json")) return {fs::unbounded_to_json(report), 1};
    std::string out = "branch,prefactor_re,prefactor_im,factor_re,factor_im,product_re,product_im\n";
    const cplx pre = report.prefactor.value_or(cplx(NAN, NAN));
    const cplx prod = report.product.value_or(cplx(NAN, NAN));
    out += csv_row({report.branch == fs::HyperBranch::Inner ? "inner" : "outer", num(pre.real()), num(pre.imag()),
                    num(report.factor_value.real()), num(report.factor_value.imag()), num(prod.real()),
                    num(prod.imag())});
    return {out, 1};
  }
  const auto set = r.generating_set(params, lambda_max, 0, depth);
  return zeta_table(r, fs::zeta_H_n(params, s, n.value_or(0), set));
}

Output zeta_poles(Runner& r, const std::string& factor_text, const std::string& window_text) {
  const auto f = parse_list(factor_text);
  const auto w = parse_list(window_text);
  if (f.size() != 2) throw CLI::ValidationError("--factor expects BASE,COEFF");
  if (w.size() != 4) throw CLI::ValidationError("--window expects RE_MIN,RE_MAX,IM_MIN,IM_MAX");
  const fs::GeometricFactor factor{f[0], f[1]};
  const auto poles = fs::pole_lattice(factor, {w[0], w[1], w[2], w[3]});
  if (r.json_format("json")) {
    json out = json::array();
    for (const auto& p : poles) {
      out.push_back({{"k", p.k}, {"s", cjson(p.s)}, {"in_gasket_lattice", fs::in_sg_pole_lattice(factor, p)}});
    }
    return {out.dump(), poles.size()};
  }
  std::string out = "k,s_re,s_im,in_gasket_lattice\n";
  for (const auto& p : poles) {
    out += csv_row({std::to_string(p.k), num(p.s.real()), num(p.s.imag()), fs::in_sg_pole_lattice(factor, p) ? "1" : "0"});
  }
  return {out, poles.size()};
}

Output zeta_riemann(Runner& r, double s, int depth) {
  const auto params = fs::make_params(0.5);
  const auto set = r.generating_set(params, fs::kRiemannLambdaMax, 0, depth);
  const double rhs = std::pow(std::numbers::pi, s) * fs::zeta_rho(params, cplx(s), set).value.real();
  const double lhs = std::riemann_zeta(s);
  const double err = std::abs(lhs - rhs);
  if (r.json_format("json")) return {json{{"s", s}, {"lhs", lhs}, {"rhs", rhs}, {"abs_err", err}}.dump(), 1};
  return {"s,lhs,rhs,abs_err\n" + csv_row({num(s), num(lhs), num(rhs), num(err)}), 1};
}

Output verify_all(Runner& r, bool quick, bool& all_passed) {
  const auto checks = fs::run_verification(quick);
  all_passed = true;
  json rows = json::array();
  std::string table;
  for (const auto& c : checks) {
    all_passed = all_passed && c.passed;
    table += (c.passed ? "PASS  " : "FAIL  ") + c.module + " | " + c.name + " | " + c.detail + "\n";
    rows.push_back({{"module", c.module}, {"check", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  if (r.json_format("")) return {rows.dump(2), checks.size()};
  return {table, checks.size()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of Sierpinski-gasket Laplacians, fractal Sturm-Liouville operators and their zeta functions"};
  app.require_subcommand(1);
  app.fallthrough();
  CliConfig cfg;
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output", cfg.output, "Output file (default stdout)");
  app.add_option("--cache-dir", cfg.cache_dir, "Cache directory (default $FRACTAL_SPECTRA_CACHE, then ~/.cache)");
  app.add_option("--report", cfg.report, "Write a JSON run report to this file");
  app.add_option("--parallelism", cfg.parallelism, "Worker threads, 0 = auto")->check(CLI::NonNegativeNumber);
  app.add_option("--eq-tol", cfg.tol.eq_tol, "Projective equality tolerance")->check(CLI::PositiveNumber);
  app.add_option("--root-tol", cfg.tol.root_tol, "Bisection tolerance")->check(CLI::PositiveNumber);
  app.add_option("--sum-tol", cfg.tol.sum_tol, "Series truncation tolerance")->check(CLI::PositiveNumber);

  std::function<Output(Runner&)> action;
  bool verify_passed = true;
  bool is_verify = false;

  // sg
  auto* sg = app.add_subcommand("sg", "Sierpinski gasket graphs and decimation")->require_subcommand(1);
  int level = 0;
  std::string method = "both", boundary, signs;
  double seed = 1.5;
  int m0 = 0;
  std::optional<double> limit_tol;
  auto* sg_graph_cmd = sg->add_subcommand("graph", "Level-m graph");
  sg_graph_cmd->add_option("--level", level)->required();
  sg_graph_cmd->callback([&] { action = [&](Runner& r) { return sg_graph(r, level); }; });
  auto* sg_spec = sg->add_subcommand("spectrum", "Spectrum of -Delta_m");
  sg_spec->add_option("--level", level)->required();
  sg_spec->add_option("--method", method)->check(CLI::IsMember({"decimation", "dense", "both"}));
  sg_spec->callback([&] { action = [&](Runner& r) { return sg_spectrum(r, level, method); }; });
  auto* sg_harm = sg->add_subcommand("harmonic", "Harmonic extension of boundary values");
  sg_harm->add_option("--boundary", boundary)->required();
  sg_harm->add_option("--level", level)->required();
  sg_harm->callback([&] { action = [&](Runner& r) { return sg_harmonic(r, boundary, level); }; });
  auto* sg_fe = sg->add_subcommand("fractal-eigenvalue", "Renormalized limit 5^m lambda_m");
  sg_fe->add_option("--seed", seed)->required();
  sg_fe->add_option("--m0", m0)->required();
  sg_fe->add_option("--signs", signs, "Explicit signs, e.g. +-+ (tail is all minus)");
  sg_fe->add_option("--tol", limit_tol);
  sg_fe->callback([&] { action = [&](Runner& r) { return sg_fractal_eigenvalue(r, seed, m0, signs, limit_tol); }; });

  // sl
  auto* sl = app.add_subcommand("sl", "Fractal Sturm-Liouville operators")->require_subcommand(1);
  double alpha = 0.5, lambda_max = 100;
  std::string lambda = "1", blowup = "0", lambda_grid = "0.001,10,20";
  int depth = fs::kDefaultSLDepth, grid = 0, floor_powers = fs::kDefaultFloorPowers;
  auto* sl_par = sl->add_subcommand("params", "Derived constants");
  sl_par->add_option("--alpha", alpha)->required();
  sl_par->callback([&] { action = [&](Runner& r) { return sl_params(r, alpha); }; });
  auto* sl_prop = sl->add_subcommand("propagator", "Transfer matrix across [0, 1]");
  sl_prop->add_option("--alpha", alpha)->required();
  sl_prop->add_option("--lambda", lambda, "RE or RE,IM")->required();
  sl_prop->add_option("--depth", depth);
  sl_prop->callback([&] { action = [&](Runner& r) { return sl_propagator(r, alpha, lambda, depth); }; });
  auto* sl_gs = sl->add_subcommand("generating-set", "Roots of a(l/gamma) + d(l/gamma)/delta");
  sl_gs->add_option("--alpha", alpha)->required();
  sl_gs->add_option("--lambda-max", lambda_max)->required();
  sl_gs->add_option("--depth", depth);
  sl_gs->add_option("--grid", grid, "Minimum grid points");
  sl_gs->callback([&] { action = [&](Runner& r) { return sl_generating_set(r, alpha, lambda_max, depth, grid); }; });
  auto* sl_sp = sl->add_subcommand("spectrum", "Spectrum ladder of H_<n>");
  sl_sp->add_option("--alpha", alpha)->required();
  sl_sp->add_option("--blowup", blowup, "N or inf")->required();
  sl_sp->add_option("--lambda-max", lambda_max)->required();
  sl_sp->add_option("--depth", depth);
  sl_sp->add_option("--grid", grid);
  sl_sp->add_option("--floor-powers", floor_powers, "Infinite ladder floor gamma^-k lambda_1");
  sl_sp->callback([&] {
    action = [&](Runner& r) { return sl_spectrum(r, alpha, blowup, lambda_max, depth, grid, floor_powers); };
  });
  auto* sl_fe = sl->add_subcommand("check-functional-equation", "Distance between rho(phi(l)) and phi(gamma l)");
  sl_fe->add_option("--alpha", alpha)->required();
  sl_fe->add_option("--lambda-grid", lambda_grid, "LO,HI,COUNT (geometric)");
  sl_fe->add_option("--depth", depth);
  sl_fe->callback([&] { action = [&](Runner& r) { return sl_functional_equation(r, alpha, lambda_grid, depth); }; });

  // lattice
  auto* lat = app.add_subcommand("lattice", "Sierpinski lattice trace map")->require_subcommand(1);
  std::string u0 = "1", u1 = "1", z0 = "1", z1 = "1";
  int samples = 100;
  unsigned sample_seed = 1;
  auto* lat_tr = lat->add_subcommand("trace", "Schur-complement trace of Q_<1>");
  lat_tr->add_option("--u0", u0)->required();
  lat_tr->add_option("--u1", u1)->required();
  lat_tr->callback([&] { action = [&](Runner& r) { return lattice_trace(r, u0, u1); }; });
  auto* lat_g = lat->add_subcommand("g", "Projective map g");
  lat_g->add_option("--z0", z0)->required();
  lat_g->add_option("--z1", z1)->required();
  lat_g->callback([&] { action = [&](Runner& r) { return lattice_g(r, z0, z1); }; });
  auto* lat_c = lat->add_subcommand("conjugacy", "Conjugacy residuals on random samples");
  lat_c->add_option("--samples", samples);
  lat_c->add_option("--seed", sample_seed);
  std::optional<std::string> conj_at;
  lat_c->add_option("--z", conj_at, "Evaluate at one point RE or RE,IM instead of sampling");
  lat_c->callback([&] { action = [&](Runner& r) { return lattice_conjugacy(r, samples, sample_seed, conj_at); }; });

  // zeta
  auto* zeta = app.add_subcommand("zeta", "Spectral zeta functions")->require_subcommand(1);
  double zz0 = 0.75, s_real = 2;
  std::string s_text = "2", factor = "5,1", window = "-5,5,-20,20";
  int zdepth = fs::kDefaultPreimageDepth;
  std::optional<int> zn;
  bool unbounded = false;
  double sl_lambda_max = 1e6;
  auto* z_r = zeta->add_subcommand("r", "Preimage zeta of R");
  z_r->add_option("--z0", zz0)->required();
  z_r->add_option("--s", s_text, "RE or RE,IM")->required();
  z_r->add_option("--depth", zdepth);
  z_r->callback([&] {
    action = [&](Runner& r) { return zeta_table(r, fs::zeta_R(zz0, parse_complex(s_text), zdepth, r.config().parallelism)); };
  });
  auto* z_sg = zeta->add_subcommand("sg", "Gasket spectral zeta by factorization");
  z_sg->add_option("--s", s_text)->required();
  z_sg->add_option("--depth", zdepth);
  z_sg->callback([&] {
    action = [&](Runner& r) { return zeta_table(r, fs::zeta_SG(parse_complex(s_text), zdepth, r.config().parallelism)); };
  });
  auto* z_sl = zeta->add_subcommand("sl", "Sturm-Liouville spectral zeta");
  z_sl->add_option("--alpha", alpha)->required();
  z_sl->add_option("--s", s_text)->required();
  auto* n_opt = z_sl->add_option("--n", zn, "Blow-up level");
  z_sl->add_flag("--unbounded", unbounded, "Half-line operator via the delta hyperfunction")->excludes(n_opt);
  z_sl->add_option("--lambda-max", sl_lambda_max, "Generating-set scan range");
  z_sl->add_option("--depth", depth);
  z_sl->callback([&] {
    action = [&](Runner& r) { return zeta_sl(r, alpha, s_text, zn, unbounded, sl_lambda_max, depth); };
  });
  auto* z_p = zeta->add_subcommand("poles", "Pole lattice of 1/(1 - c base^{-s/2})");
  z_p->add_option("--factor", factor, "BASE,COEFF")->required();
  z_p->add_option("--window", window, "RE_MIN,RE_MAX,IM_MIN,IM_MAX");
  z_p->callback([&] { action = [&](Runner& r) { return zeta_poles(r, factor, window); }; });
  auto* z_rc = zeta->add_subcommand("riemann-check", "pi^s zeta_rho(s) against zeta(s) at alpha = 1/2");
  z_rc->add_option("--s", s_real)->required();
  z_rc->add_option("--depth", depth);
  z_rc->callback([&] { action = [&](Runner& r) { return zeta_riemann(r, s_real, depth); }; });

  // verify
  auto* ver = app.add_subcommand("verify", "Invariant suites")->require_subcommand(1);
  bool quick = false;
  auto* ver_all = ver->add_subcommand("all", "Run every module's invariant suite");
  ver_all->add_flag("--quick", quick, "Trim oracle levels and depths");
  ver_all->callback([&] {
    is_verify = true;
    action = [&](Runner& r) { return verify_all(r, quick, verify_passed); };
  });

  try {
    app.parse(argc, argv);
    cfg.tol.validate();
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const fs::Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }

  std::string command;
  for (int i = 1; i < argc; ++i) command += (i > 1 ? " " : "") + std::string(argv[i]);
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };

  Runner runner(cfg);
  try {
    const Output out = action(runner);
    emit(cfg, out);
    for (const auto& w : runner.warnings()) std::cerr << "warning: " << w << '\n';
    const int code = is_verify && !verify_passed ? 1 : 0;
    write_report(cfg, command, elapsed(), out.values, runner.warnings(), code);
    return code;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage: " << e.what() << '\n';
    write_report(cfg, command, elapsed(), 0, runner.warnings(), 2);
    return 2;
  } catch (const fs::Error& e) {
    std::cerr << e.what() << '\n';
    write_report(cfg, command, elapsed(), 0, runner.warnings(), 1);
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    write_report(cfg, command, elapsed(), 0, runner.warnings(), 1);
    return 1;
  }
}
