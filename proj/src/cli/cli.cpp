#include "hauteur/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hauteur/error.hpp"
#include "hauteur/heights_q.hpp"
#include "hauteur/measure_lab.hpp"
#include "hauteur/numeric/factor.hpp"
#include "hauteur/numeric/parse.hpp"
#include "hauteur/parallel.hpp"
#include "hauteur/torsion.hpp"

#ifndef HAUTEUR_FIXTURE_DIR
#define HAUTEUR_FIXTURE_DIR "fixtures"
#endif

namespace hauteur::cli {

using ojson = nlohmann::ordered_json;

namespace {

// Error::what() carries "code: message"; keep the message only.
std::string bare(const Error& e) {
  std::string w = e.what();
  auto p = w.find(": ");
  return p == std::string::npos ? w : w.substr(p + 2);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path);
}

std::string field_string(const ojson& obj, const std::string& key, const std::string& where, const char* fallback) {
  if (!obj.contains(key)) {
    if (fallback) return fallback;
    throw Error(ErrorCode::Parse, where + "." + key + " is required");
  }
  const ojson& v = obj.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return v.dump();
  throw Error(ErrorCode::Parse, where + "." + key + " must be a string");
}

RatFunc parse_field(const std::string& text, const std::string& var, const std::string& where) {
  try {
    return parse_ratfunc(text, var);
  } catch (const ParseError& e) {
    throw ParseError(e.position(), where + ": " + bare(e).substr(0, bare(e).rfind(" at position")));
  }
}

Rat parse_rat_arg(const std::string& text, const std::string& what) {
  try {
    return parse_rational_value(text);
  } catch (const ParseError& e) {
    throw ParseError(e.position(), what + ": " + bare(e).substr(0, bare(e).rfind(" at position")));
  }
}

const ojson& block(const JobConfig& c, const char* name) {
  static const ojson empty = ojson::object();
  return c.raw.contains(name) && c.raw.at(name).is_object() ? c.raw.at(name) : empty;
}

template <class T>
T knob(const JobConfig& c, const char* blk, const char* key, T fallback) {
  const ojson& b = block(c, blk);
  if (!b.contains(key)) return fallback;
  try {
    return b.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::Parse, std::string(blk) + "." + key + " has the wrong type");
  }
}

std::string rat_str(const Rat& r) { return r.to_string(); }

std::string csv_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

GridSpec grid_from(const JobConfig& c, const std::string& region_flag, int nx, int ny) {
  std::string region = region_flag;
  if (region.empty()) {
    const ojson& g = block(c, "grid");
    if (g.contains("region") && g.at("region").is_array() && g.at("region").size() == 4) {
      std::ostringstream ss;
      for (std::size_t i = 0; i < 4; ++i) ss << (i ? "," : "") << csv_num(g.at("region").at(i).get<double>());
      region = ss.str();
    } else {
      region = "-3,5,-4,4";
    }
  }
  if (nx > 0 && ny <= 0) ny = nx;
  if (nx <= 0) nx = knob<int>(c, "grid", "nx", 257);
  if (ny <= 0) ny = knob<int>(c, "grid", "ny", nx);
  GridSpec spec = parse_region(region, nx, ny);
  spec.exclusion_radius = knob<double>(c, "grid", "exclusion_radius", 1e-3);
  spec.validate();
  return spec;
}

ojson grid_json(const GridSpec& g) {
  return ojson{{"region", {g.re_min, g.re_max, g.im_min, g.im_max}}, {"nx", g.nx}, {"ny", g.ny},
               {"exclusion_radius", g.exclusion_radius}};
}

struct Report {
  ojson j;
  bool failed = false;
  void check(const std::string& name, bool ok, const std::string& detail = "") {
    ojson c{{"name", name}, {"passed", ok}};
    if (!detail.empty()) c["detail"] = detail;
    j["checks"].push_back(c);
    failed = failed || !ok;
  }
};

std::string artifact(const std::string& out, const std::string& fallback) { return out.empty() ? fallback : out; }

std::string with_ext(const std::string& path, const std::string& ext) {
  std::filesystem::path p(path);
  p.replace_extension(ext);
  return p.string();
}

}  // namespace

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string fixture_dir() { return HAUTEUR_FIXTURE_DIR; }

JobConfig parse_config_text(const std::string& text, const std::string& source) {
  JobConfig c;
  c.source = source;
  try {
    c.raw = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.byte, source + ": malformed JSON");
  }
  if (!c.raw.is_object()) throw Error(ErrorCode::Parse, source + ": top level must be an object");
  if (!c.raw.contains("curve") || !c.raw.at("curve").is_object())
    throw Error(ErrorCode::Parse, source + ": missing curve object");
  const ojson& cj = c.raw.at("curve");
  const std::string var = field_string(cj, "var", "curve", "t");
  std::array<RatFunc, 5> a;
  const char* keys[5] = {"a1", "a2", "a3", "a4", "a6"};
  for (std::size_t i = 0; i < 5; ++i)
    a[i] = parse_field(field_string(cj, keys[i], "curve", "0"), var, std::string("curve.") + keys[i]);
  c.model = make_surface(Curve<RatFunc>{a[0], a[1], a[2], a[3], a[4]}, var);

  const ojson sj = c.raw.contains("section") ? c.raw.at("section") : ojson::object();
  if (!sj.is_object()) throw Error(ErrorCode::Parse, source + ": section must be an object");
  if (sj.contains("zero") && sj.at("zero").is_boolean() && sj.at("zero").get<bool>()) {
    c.point = zero_section(c.model);
    return c;
  }
  RatFunc x = parse_field(field_string(sj, "x", "section", nullptr), var, "section.x");
  if (sj.contains("y")) {
    RatFunc y = parse_field(field_string(sj, "y", "section", nullptr), var, "section.y");
    c.point = make_section(c.model, x, y);
  } else {
    c.constant_x = true;
    c.point = make_section(c.model, x);
  }
  return c;
}

JobConfig parse_config(const std::string& path) {
  std::string p = path;
  if (!std::filesystem::exists(p)) {
    // bundled fixtures by name
    std::filesystem::path f = std::filesystem::path(fixture_dir()) / std::filesystem::path(path).filename();
    if (std::filesystem::exists(f)) p = f.string();
  }
  return parse_config_text(read_file(p), path);
}

namespace {

struct Common {
  std::string config, out, report_path;
  unsigned threads = 0;
  bool timings = false;
};

void add_common(CLI::App* sub, Common& c, bool config = true) {
  if (config) sub->add_option("config", c.config, "job config (JSON)")->required();
  sub->add_option("--out", c.out, "artifact path");
  sub->add_option("--report", c.report_path, "write the JSON report here instead of stdout");
  sub->add_option("--threads", c.threads, "worker count (0: logical cores)");
  sub->add_flag("--timings", c.timings, "include wall-clock timings in the report");
}

void cmd_height(const JobConfig& c, const std::string& t_flag, int depth, Report& r) {
  std::string ts = t_flag.empty() ? knob<std::string>(c, "height", "t", "") : t_flag;
  if (ts.empty()) throw Error(ErrorCode::Usage, "height needs --t or height.t in the config");
  if (depth <= 0) depth = knob<int>(c, "height", "depth", 7);
  Rat t = parse_rat_arg(ts, "--t");
  const SurfacePoint& P = c.point;
  FfHeight hf = ff_canonical_height(P);
  ojson res{{"t", rat_str(t)}, {"surface_height", rat_str(hf.value)}, {"surface_height_exact", hf.exact}};
  Curve<Rat> E = specialize_cleared(P.model, t);
  if (invariants(E).delta.is_zero()) throw Error(ErrorCode::SingularCurve, "fiber at t = " + rat_str(t) + " is singular");
  Rat B = P.zero ? Rat(0) : eval(P.lift.B, t);
  if (B.is_zero()) {
    res["fiber_point"] = "O";
    res["canonical_height"] = 0.0;
    res["exact_zero"] = true;
  } else {
    Rat x = eval(P.lift.A, t) / B;
    CanonicalHeight h = canonical_height(E, x, depth);
    res["x"] = rat_str(x);
    res["canonical_height"] = h.value;
    res["limit_estimate"] = h.limit_estimate;
    res["gap"] = h.gap;
    res["depth"] = h.depth;
    res["exact_zero"] = h.exact_zero;
    ojson loc = ojson::array();
    loc.push_back(ojson{{"place", "inf"}, {"half_escape_rate", h.arch_term}});
    for (const auto& [p, m] : h.finite_terms)
      loc.push_back(ojson{{"place", p.get_str()}, {"half_escape_rate_over_log_p", rat_str(m)}});
    res["local_terms"] = loc;
    r.check("height_nonnegative", h.value >= -1e-9, csv_num(h.value));
  }
  r.j["result"] = res;
}

void cmd_divisor(const JobConfig& c, int N, const std::string& out, Report& r) {
  if (N <= 0) N = knob<int>(c, "divisor", "N", 8);
  BaseDivisor D = divisor_DEP(c.point, N);
  FfHeight h = ff_canonical_height(c.point, N);
  const std::string& var = c.model.var;
  std::string csv = "place,degree,coeff,escape,ord_b,ord_delta,snapped,gap,irreducible_certified\r\n";
  for (const auto& e : D.entries)
    csv += "\"" + e.place.to_string(var) + "\"," + std::to_string(e.place.degree()) + "," + rat_str(e.coeff) + "," +
           rat_str(e.escape) + "," + std::to_string(e.ord_b) + "," + std::to_string(e.ord_delta) + "," +
           (e.snapped ? "1" : "0") + "," + rat_str(e.gap) + "," + (e.irreducible_certified ? "1" : "0") + "\r\n";
  std::string path = artifact(out, "divisor.csv");
  write_file(path, csv);
  r.j["artifacts"].push_back(ojson{{"path", path}, {"fnv1a", hex64(fnv1a(csv))}});
  r.j["result"] = ojson{{"degree", rat_str(D.degree)}, {"height", rat_str(h.value)}, {"entries", D.entries.size()},
                        {"exact", D.exact}};
  r.check("degree_equals_height", D.degree == h.value, rat_str(D.degree) + " vs " + rat_str(h.value));
  r.check("divisor_exact", D.exact);
}

void cmd_reference(const JobConfig& c, const std::string& t_flag, const std::string& primes_flag, Report& r) {
  std::string ts = t_flag.empty() ? knob<std::string>(c, "reference", "t", "2") : t_flag;
  Rat t = parse_rat_arg(ts, "--t");
  BaseDivisor D = divisor_DEP(c.point);
  std::vector<Int> cand = quasi_triviality_candidates(c.point, D);
  std::vector<Int> primes;
  if (!primes_flag.empty()) {
    std::istringstream is(primes_flag);
    std::string tok;
    while (std::getline(is, tok, ',')) {
      try {
        primes.emplace_back(tok);
      } catch (const std::exception&) {
        throw Error(ErrorCode::Parse, "--primes: bad integer '" + tok + "'");
      }
    }
  } else if (block(c, "reference").contains("primes")) {
    for (const auto& p : block(c, "reference").at("primes")) primes.emplace_back(p.is_string() ? p.get<std::string>() : p.dump());
  } else {
    // every candidate plus twenty primes outside the list
    primes = cand;
    int good = 0;
    for (unsigned long p : primes_up_to(1000)) {
      if (good == 20) break;
      if (std::find(cand.begin(), cand.end(), Int(p)) == cand.end()) {
        primes.emplace_back(p);
        ++good;
      }
    }
  }
  QuasiTrivialReport q = quasi_triviality_check(c.point, D, t, primes);
  ojson entries = ojson::array();
  for (const auto& e : q.entries)
    entries.push_back(ojson{{"p", e.p.get_str()}, {"local", rat_str(e.local)}, {"reference", rat_str(e.reference)},
                            {"equal", e.equal}, {"exact", e.exact}, {"candidate", e.candidate}});
  ojson exc = ojson::array(), cj = ojson::array();
  for (const Int& p : q.exceptional) exc.push_back(p.get_str());
  for (const Int& p : cand) cj.push_back(p.get_str());
  r.j["result"] = ojson{{"t", rat_str(t)}, {"entries", entries}, {"exceptional", exc}, {"candidates", cj}};
  r.check("exceptional_within_candidates", q.contained);
}

void cmd_torsion(const JobConfig& c, int n, double tol, const std::string& out, Report& r) {
  if (n <= 0) n = knob<int>(c, "torsion", "n", 6);
  if (tol <= 0) tol = knob<double>(c, "torsion", "tol", 1e-10);
  TorsionSet ts = torsion_parameters(c.point, n, tol, knob<int>(c, "torsion", "cap", 10));
  std::string csv = torsion_csv(ts);
  std::string path = artifact(out, "torsion.csv");
  write_file(path, csv);
  ojson levels = ojson::array(), rats = ojson::array();
  for (int k = 0; k <= n; ++k) {
    std::size_t cnt = 0;
    for (const auto& rt : ts.roots)
      if (rt.level == k) cnt += static_cast<std::size_t>(rt.multiplicity);
    levels.push_back(ojson{{"n", k}, {"count", cnt}});
  }
  for (const auto& rt : ts.roots)
    if (rt.rational) rats.push_back(ojson{{"t", rat_str(*rt.rational)}, {"order", 1L << rt.level}});
  r.j["artifacts"].push_back(ojson{{"path", path}, {"fnv1a", hex64(fnv1a(csv))}});
  r.j["result"] = ojson{{"n", n}, {"degree", ts.poly.degree()}, {"levels", levels}, {"rational", rats},
                        {"diagnostic", ts.diagnostic}};
  r.check("roots_certified", ts.diagnostic.empty(), ts.diagnostic);
  r.check("count_matches_degree", ts.count(true) == static_cast<std::size_t>(ts.poly.degree()));
}

void cmd_render(const JobConfig& c, const GridSpec& g, double threshold, int max_iter, const std::string& out, Report& r) {
  if (threshold <= 0) threshold = knob<double>(c, "render", "threshold", 10000);
  if (max_iter < 0) max_iter = knob<int>(c, "render", "max_iter", 8);
  EscapeImage img = escape_time_image(c.point, g, threshold, max_iter);
  std::string ppm = image_ppm(img);
  std::string path = artifact(out, "render.ppm");
  write_file(path, ppm);
  std::size_t marked = 0;
  for (auto m : img.marks) marked += m;
  r.j["artifacts"].push_back(ojson{{"path", path}, {"fnv1a", hex64(fnv1a(ppm))}});
  r.j["result"] = ojson{{"grid", grid_json(g)}, {"threshold", threshold}, {"max_iter", max_iter}, {"marked", marked}};
}

void cmd_density(const JobConfig& c, const GridSpec& g, const std::string& out, Report& r) {
  BaseDivisor D = divisor_DEP(c.point);
  if (D.degree.is_zero()) throw Error(ErrorCode::DegenerateInput, "deg D is zero (torsion section)");
  PotentialGrid G = grid_potential(c.point, g);
  DensityGrid d = laplacian_density(G, D.degree);
  SubharmonicStats sh = subharmonic_check(G);
  std::string base = artifact(out, "density.csv");
  std::string csv = grid_csv(g, d.values), ppm = density_ppm(d);
  write_file(with_ext(base, ".csv"), csv);
  write_file(with_ext(base, ".ppm"), ppm);
  r.j["artifacts"].push_back(ojson{{"path", with_ext(base, ".csv")}, {"fnv1a", hex64(fnv1a(csv))}});
  r.j["artifacts"].push_back(ojson{{"path", with_ext(base, ".ppm")}, {"fnv1a", hex64(fnv1a(ppm))}});
  r.j["result"] = ojson{{"grid", grid_json(g)},       {"normalization", rat_str(D.degree)},
                        {"mass", d.mass},             {"raw_mass", d.raw_mass},
                        {"negative_nodes", d.negative_nodes}, {"stencil_nodes", d.stencil_nodes},
                        {"subharmonic_fraction", sh.fraction()}};
  r.check("subharmonic", sh.fraction() >= 0.99, csv_num(sh.fraction()));
  r.check("nonnegative", static_cast<double>(d.negative_nodes) < 0.01 * static_cast<double>(d.stencil_nodes));
}

void cmd_equidist(const JobConfig& c, const GridSpec& g, int nmin, int nmax, const std::string& out, Report& r) {
  if (nmin <= 0) nmin = knob<int>(c, "equidist", "nmin", 4);
  if (nmax <= 0) nmax = knob<int>(c, "equidist", "nmax", 7);
  if (nmin > nmax) throw Error(ErrorCode::Usage, "nmin > nmax");
  BaseDivisor D = divisor_DEP(c.point);
  if (D.degree.is_zero()) throw Error(ErrorCode::DegenerateInput, "deg D is zero (torsion section)");
  DensityGrid d = laplacian_density(grid_potential(c.point, g), D.degree);
  TorsionSet ts = torsion_parameters(c.point, nmax);
  std::string csv = "n,discrepancy,smoothed,escaped\r\n";
  ojson rows = ojson::array();
  std::vector<double> sm;
  for (int n = nmin; n <= nmax; ++n) {
    DensityGrid e = empirical_measure(ts, g, n);
    double raw = discrepancy(e, d), s = discrepancy(e, d, true);
    sm.push_back(s);
    csv += std::to_string(n) + "," + csv_num(raw) + "," + csv_num(s) + "," + csv_num(e.escaped) + "\r\n";
    rows.push_back(ojson{{"n", n}, {"discrepancy", raw}, {"smoothed", s}, {"escaped", e.escaped}});
  }
  bool strict = true;
  for (std::size_t i = 1; i < sm.size(); ++i) strict = strict && sm[i] < sm[i - 1];
  std::string path = artifact(out, "equidist.csv");
  write_file(path, csv);
  r.j["artifacts"].push_back(ojson{{"path", path}, {"fnv1a", hex64(fnv1a(csv))}});
  r.j["result"] = ojson{{"grid", grid_json(g)}, {"rows", rows}, {"strictly_decreasing", strict},
                        {"torsion_diagnostic", ts.diagnostic}};
  r.check("decreasing_overall", sm.size() < 2 || sm.back() < sm.front());
}

void cmd_pair(const JobConfig& a, const JobConfig& b, int nmax, Report& r) {
  if (nmax <= 0) nmax = knob<int>(a, "pair", "nmax", 6);
  auto common = common_torsion(a.point, b.point, nmax);
  ojson list = ojson::array();
  for (const auto& ct : common) {
    ojson roots = ojson::array();
    for (const Cx& z : ct.roots) roots.push_back({z.real(), z.imag()});
    list.push_back(ojson{{"n", ct.n}, {"gcd", ct.gcd.to_string(a.model.var)}, {"roots", roots}});
  }
  r.j["result"] = ojson{{"nmax", nmax}, {"common", list}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heights and torsion parameters on elliptic surfaces", "hauteur"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  Common common;
  std::string t_flag, region, primes, config2;
  int depth = 0, N = 0, n = 0, nx = 0, ny = 0, max_iter = -1, nmin = 0, nmax = 0;
  double tol = 0, threshold = 0;

  auto* height = app.add_subcommand("height", "canonical and local heights at a rational parameter");
  add_common(height, common);
  height->add_option("--t", t_flag, "rational parameter");
  height->add_option("--depth", depth, "doubling depth");
  auto* divisor = app.add_subcommand("divisor", "the divisor D_E(P) as CSV");
  add_common(divisor, common);
  divisor->add_option("--N", N, "escape-rate steps");
  auto* reference = app.add_subcommand("reference-check", "local versus reference heights at primes");
  add_common(reference, common);
  reference->add_option("--t", t_flag, "rational parameter");
  reference->add_option("--primes", primes, "comma-separated primes");
  auto* torsion = app.add_subcommand("torsion", "torsion parameters of order dividing 2^n as CSV");
  add_common(torsion, common);
  torsion->add_option("--n", n, "level");
  torsion->add_option("--tol", tol, "root tolerance");
  auto add_grid = [&](CLI::App* s) {
    s->add_option("--region", region, "re_min,re_max,im_min,im_max");
    s->add_option("--nx", nx, "columns");
    s->add_option("--ny", ny, "rows");
  };
  auto* render = app.add_subcommand("render", "escape-time image (PPM)");
  add_common(render, common);
  add_grid(render);
  render->add_option("--threshold", threshold, "escape threshold");
  render->add_option("--max-iter", max_iter, "iterations");
  auto* density = app.add_subcommand("density", "Laplacian density (CSV and PPM)");
  add_common(density, common);
  add_grid(density);
  auto* equidist = app.add_subcommand("equidist", "discrepancy of torsion parameters against the density");
  add_common(equidist, common);
  add_grid(equidist);
  equidist->add_option("--nmin", nmin, "first level");
  equidist->add_option("--nmax", nmax, "last level");
  auto* pair = app.add_subcommand("pair", "common torsion parameters of two sections");
  add_common(pair, common);
  pair->add_option("config2", config2, "second job config")->required();
  pair->add_option("--nmax", nmax, "last level");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    ojson rep{{"tool_version", kToolVersion}, {"status", "error"},
              {"error", ojson{{"code", error_code_name(ErrorCode::Usage)}, {"message", e.what()}}}};
    err << rep.dump(2) << "\n";
    return 1;
  }
  CLI::App* sub = app.get_subcommands().front();
  Report r;
  r.j["command"] = sub->get_name();
  r.j["tool_version"] = kToolVersion;
  auto t0 = std::chrono::steady_clock::now();
  try {
    unsigned threads = common.threads;
    if (const char* env = std::getenv("HAUTEUR_THREADS")) threads = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
    set_thread_count(threads);

    JobConfig c = parse_config(common.config);
    std::uint64_t digest = fnv1a(sub->get_name());
    digest = fnv1a(c.raw.dump(), digest);
    for (const std::string& a : args) digest = fnv1a(a + '\0', digest);
    std::optional<JobConfig> c2;
    if (sub == pair) {
      c2 = parse_config(config2);
      digest = fnv1a(c2->raw.dump(), digest);
    }
    r.j["inputs_digest"] = hex64(digest);
    r.j["constant_x"] = c.constant_x;
    r.j["checks"] = ojson::array();
    r.j["artifacts"] = ojson::array();

    if (sub == height) cmd_height(c, t_flag, depth, r);
    else if (sub == divisor) cmd_divisor(c, N, common.out, r);
    else if (sub == reference) cmd_reference(c, t_flag, primes, r);
    else if (sub == torsion) cmd_torsion(c, n, tol, common.out, r);
    else if (sub == render) cmd_render(c, grid_from(c, region, nx, ny), threshold, max_iter, common.out, r);
    else if (sub == density) cmd_density(c, grid_from(c, region, nx, ny), common.out, r);
    else if (sub == equidist) cmd_equidist(c, grid_from(c, region, nx, ny), nmin, nmax, common.out, r);
    else if (sub == pair) cmd_pair(c, *c2, nmax, r);
    r.j["status"] = r.failed ? "check_failed" : "ok";
  } catch (const Error& e) {
    r.j["status"] = "error";
    ojson ej{{"code", error_code_name(e.code())}, {"message", bare(e)}};
    if (auto* pe = dynamic_cast<const ParseError*>(&e)) ej["position"] = pe->position();
    r.j["error"] = ej;
  } catch (const std::exception& e) {
    r.j["status"] = "error";
    r.j["error"] = ojson{{"code", "internal"}, {"message", e.what()}};
  }
  if (common.timings)
    r.j["timings"] = ojson{{"total_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
  const std::string text = r.j.dump(2) + "\n";
  if (!common.report_path.empty()) {
    try {
      write_file(common.report_path, text);
    } catch (const Error& e) {
      err << e.what() << "\n";
      return 1;
    }
  } else {
    out << text;
  }
  if (r.j["status"] == "error") {
    if (!common.report_path.empty()) err << r.j["error"].dump() << "\n";
    return 1;
  }
  return r.failed ? 2 : 0;
}

}  // namespace hauteur::cli
