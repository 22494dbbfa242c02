// One PASS/FAIL line per criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hauteur/cli.hpp"
#include "hauteur/heights_q.hpp"
#include "hauteur/measure_lab.hpp"
#include "hauteur/numeric/factor.hpp"
#include "hauteur/torsion.hpp"
#include "oracles.hpp"

using namespace hauteur;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

SurfacePoint fixture_point(const char* name) { return cli::parse_config(cli::fixture_dir() + "/" + name).point; }

std::vector<SurfacePoint> fixtures() {
  return {fixture_point("silverman.json"), fixture_point("legendre_x2.json"), fixture_point("legendre_x5.json")};
}

Rat random_rat(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-60, 60), den(1, 40);
  return Rat(Int(num(rng)), Int(den(rng)));
}

Outcome local_axioms() {
  std::mt19937_64 rng(2024);
  double worst = 0;
  long finite_checked = 0, finite_bad = 0;
  int done = 0;
  while (done < 20) {
    long x0 = static_cast<long>(rng() % 21) - 10, y0 = static_cast<long>(rng() % 21) - 10;
    long a1 = static_cast<long>(rng() % 3) - 1, a2 = static_cast<long>(rng() % 5) - 2, a3 = static_cast<long>(rng() % 3) - 1,
         a4 = static_cast<long>(rng() % 21) - 10;
    long a6 = y0 * y0 + a1 * x0 * y0 + a3 * y0 - x0 * x0 * x0 - a2 * x0 * x0 - a4 * x0;
    Curve<Rat> E{a1, a2, a3, a4, a6};
    auto inv = invariants(E);
    if (inv.delta.is_zero()) continue;
    auto P2 = oracle::double_point(E, {x0, y0});
    if (!P2) continue;
    const Rat tangent(2 * y0 + a1 * x0 + a3);
    // one place per triple, cycling through infinity, a bad prime and a good prime
    PlaceQ v = PlaceQ::arch();
    auto bad = bad_primes(E);
    if (done % 3 == 1 && !bad.empty()) v = PlaceQ::finite(bad[rng() % bad.size()]);
    if (done % 3 == 2) {
      for (unsigned long p : primes_up_to(100))
        if (!std::binary_search(bad.begin(), bad.end(), Int(p)) && rng() % 4 == 0) {
          v = PlaceQ::finite(Int(p));
          break;
        }
    }
    auto l1 = local_height(E, Rat(x0), v);
    auto l2 = local_height(E, Rat(P2->x), v);
    if (v.archimedean) {
      worst = std::max(worst, std::fabs(l2.value - 4 * l1.value + log_abs(tangent) - 0.25 * log_abs(inv.delta)));
    } else {
      ++finite_checked;
      Rat res = l2.multiplier - Rat(4) * l1.multiplier - Rat(vp(tangent, v.p)) + Rat(vp(inv.delta, v.p), 4);
      if (!l1.exact || !l2.exact || !res.is_zero()) ++finite_bad;
    }
    ++done;
  }
  return {worst < 1e-8 && finite_bad == 0,
          "max archimedean residual " + fmt("%.3g", worst) + ", finite exact " + std::to_string(finite_checked - finite_bad) +
              "/" + std::to_string(finite_checked)};
}

Outcome tate_cross() {
  std::vector<std::pair<Cx, Cx>> cases{{Cx(0.5, 0), Cx(0.3, 0.1)},  {Cx(-0.4, 0.2), Cx(1.5, -0.5)}, {Cx(0.1, 0.3), Cx(0.8, 0.6)},
                                        {Cx(-0.25, 0), Cx(-0.7, 0.2)}, {Cx(0.05, -0.05), Cx(0.4, -0.9)}};
  double worst = 0;
  for (auto [q, w] : cases) {
    auto T = oracle::tate_curve(HpComplex(q.real(), q.imag()), HpComplex(w.real(), w.imag()), 400);
    double lam = archimedean_local_height(T.E, T.x);
    worst = std::max(worst, std::fabs(tate_series_local_height(q, w, 60).value - lam));
  }
  return {worst < 1e-8, "max difference " + fmt("%.3g", worst)};
}

Outcome local_global() {
  struct Job {
    std::string name;
    Curve<Rat> E;
    Rat x;
  };
  std::vector<Job> jobs{{"37a (0,0)", Curve<Rat>{0, 0, 1, Rat(-1), 0}, Rat(0)}};
  const std::pair<const char*, long> fibers[] = {{"silverman.json", 1}, {"silverman.json", 3}, {"legendre_x2.json", 3}, {"legendre_x5.json", 7}};
  for (auto [name, t] : fibers) {
    SurfacePoint P = fixture_point(name);
    jobs.push_back({std::string(name) + " t=" + std::to_string(t), specialize_cleared(P.model, Rat(t)),
                    eval(P.lift.A, Rat(t)) / eval(P.lift.B, Rat(t))});
  }
  double worst = 0;
  std::string detail;
  for (const auto& j : jobs) {
    CanonicalHeight h = canonical_height(j.E, j.x, 7);
    double d = std::fabs(h.limit_estimate - h.value);
    worst = std::max(worst, d);
    detail += (detail.empty() ? "" : ", ") + j.name + " " + fmt("%.2g", d);
  }
  return {worst < 1e-6, "|limit - local sum|: " + detail};
}

bool in_exceptional_set(const SurfacePoint& P, const FfPlace& g) {
  for (const auto& sp : singular_parameters(P.model))
    if (sp.place == g) return true;
  return ord_at(P.x, g) < 0;
}

Outcome degree_identity() {
  Outcome o;
  for (const SurfacePoint& P : fixtures()) {
    BaseDivisor D = divisor_DEP(P, 8);
    FfHeight h = ff_canonical_height(P, 8);
    bool support = std::all_of(D.entries.begin(), D.entries.end(), [&](const DivisorEntry& e) { return in_exceptional_set(P, e.place); });
    o.pass = o.pass && D.exact && h.exact && D.degree == h.value && support;
    o.detail += (o.detail.empty() ? "" : ", ") + std::string("deg ") + D.degree.to_string() + " vs " + h.value.to_string() +
                (support ? "" : " (support outside)");
  }
  return o;
}

Outcome quasi_triviality() {
  std::mt19937_64 rng(99);
  std::vector<unsigned long> pool = primes_up_to(1000);
  long checked = 0, unequal = 0;
  bool contained = true;
  for (const SurfacePoint& P : fixtures()) {
    BaseDivisor D = divisor_DEP(P);
    auto cand = quasi_triviality_candidates(P, D);
    std::vector<Int> good;
    for (unsigned long p : pool)
      if (!std::binary_search(cand.begin(), cand.end(), Int(p))) good.push_back(Int(p));
    std::shuffle(good.begin(), good.end(), rng);
    good.resize(20);
    std::vector<Int> all = good;
    all.insert(all.end(), cand.begin(), cand.end());
    int done = 0;
    while (done < 5) {
      Rat t = random_rat(rng);
      QuasiTrivialReport R;
      try {
        R = quasi_triviality_check(P, D, t, all);
      } catch (const Error&) {
        continue;  // singular fiber or a support point of the section
      }
      for (const auto& e : R.entries) {
        if (e.candidate) continue;
        ++checked;
        if (!e.equal || !e.exact) ++unequal;
      }
      contained = contained && R.contained;
      ++done;
    }
  }
  return {unequal == 0 && contained, std::to_string(checked - unequal) + "/" + std::to_string(checked) +
                                         " good-prime checks equal, exceptional primes within candidates: " + (contained ? "yes" : "no")};
}

Outcome torsion_truth() {
  SurfacePoint P = fixture_point("legendre_x2.json");
  TorsionSet ts = torsion_parameters(P, 6);
  bool t2 = false, t4 = false, zero = true;
  int rational = 0;
  for (const auto& r : ts.roots) {
    if (!r.rational) continue;
    ++rational;
    t2 = t2 || (*r.rational == Rat(2) && r.level == 1);
    t4 = t4 || (*r.rational == Rat(4) && r.level == 2);
    Rat B = eval(P.lift.B, *r.rational);
    if (B.is_zero()) continue;
    Curve<Rat> E = specialize_cleared(P.model, *r.rational);
    zero = zero && canonical_height(E, eval(P.lift.A, *r.rational) / B, 6).exact_zero;
  }
  return {t2 && t4 && zero && ts.diagnostic.empty(),
          std::to_string(rational) + " rational parameters, t=2 order 2: " + (t2 ? "yes" : "no") + ", t=4 order 4: " + (t4 ? "yes" : "no") +
              ", all exact zero: " + (zero ? "yes" : "no")};
}

Outcome masser_zannier() {
  SurfacePoint P2 = fixture_point("legendre_x2.json"), P5 = fixture_point("legendre_x5.json");
  auto common = common_torsion(P2, P5, 6);
  auto self = common_torsion(P2, P2, 6);
  bool total = self.size() == 6;
  for (const auto& c : self) total = total && c.gcd.degree() == torsion_polynomial(P2, c.n).degree();
  return {common.empty() && total, std::to_string(common.size()) + " common levels for x=2/x=5, self pairing total: " + (total ? "yes" : "no")};
}

Outcome equidistribution() {
  SurfacePoint P = fixture_point("legendre_x2.json");
  GridSpec g = parse_region("-3,5,-4,4", 513, 513);
  DensityGrid d = laplacian_density(grid_potential(P, g), divisor_DEP(P).degree);
  TorsionSet ts = torsion_parameters(P, 7);
  std::vector<double> s;
  std::string detail;
  for (int n = 4; n <= 7; ++n) {
    s.push_back(discrepancy(empirical_measure(ts, g, n), d, true));
    detail += (detail.empty() ? "" : " ") + fmt("%.4f", s.back());
  }
  bool dec = true;
  for (std::size_t i = 1; i < s.size(); ++i) dec = dec && s[i] < s[i - 1];
  return {dec && s.back() < 0.25, "smoothed discrepancy n=4..7: " + detail};
}

Outcome subharmonic_nonneg() {
  std::string detail;
  bool pass = true;
  const char* names[] = {"silverman.json", "legendre_x2.json", "legendre_x5.json"};
  std::mt19937_64 rng(5);
  double lowest = 1e300;
  for (const char* name : names) {
    cli::JobConfig c = cli::parse_config(cli::fixture_dir() + "/" + name);
    const auto& gj = c.raw.at("grid");
    std::vector<double> reg = gj.at("region").get<std::vector<double>>();
    GridSpec g;
    g.re_min = reg[0], g.re_max = reg[1], g.im_min = reg[2], g.im_max = reg[3];
    g.nx = gj.at("nx").get<int>(), g.ny = gj.at("ny").get<int>();
    double f = subharmonic_check(grid_potential(c.point, g)).fraction();
    pass = pass && f >= 0.99;
    detail += (detail.empty() ? "" : ", ") + fmt("%.4f", f);
    int done = 0;
    while (done < 50) {
      Rat t = random_rat(rng);
      if (eval(c.point.model.delta, t).is_zero() || eval(c.point.lift.B, t).is_zero()) continue;
      Curve<Rat> E = specialize_cleared(c.point.model, t);
      lowest = std::min(lowest, canonical_height(E, eval(c.point.lift.A, t) / eval(c.point.lift.B, t), 4).value);
      ++done;
    }
  }
  pass = pass && lowest >= -1e-9;
  return {pass, "subharmonic fractions " + detail + "; min specialized height " + fmt("%.4g", lowest)};
}

Outcome renderer() {
  auto dir = std::filesystem::temp_directory_path() / "hauteur_acceptance";
  std::filesystem::create_directories(dir);
  const std::string fx = cli::fixture_dir() + "/legendre_x2.json";
  std::string bytes[2];
  for (int k = 0; k < 2; ++k) {
    auto path = dir / ("render" + std::to_string(k) + ".ppm");
    std::ostringstream out, err;
    if (cli::run({"render", fx, "--threshold", "10000", "--max-iter", "8", "--out", path.string()}, out, err) != 0)
      return {false, "render failed: " + err.str()};
    std::ifstream f(path, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    bytes[k] = s.str();
  }
  GridSpec g = parse_region("-3,5,-4,4", 513, 513);
  EscapeImage img = escape_time_image(fixture_point("legendre_x2.json"), g, 10000, 8);
  const Cx at = g.node(320, 256);
  bool marked = img.marks[g.index(320, 256)] != 0 && at == Cx(2, 0);
  return {bytes[0] == bytes[1] && !bytes[0].empty() && marked,
          "fnv1a " + cli::hex64(cli::fnv1a(bytes[0])) + (bytes[0] == bytes[1] ? " twice" : " differs") + ", t=2 marked: " + (marked ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> fn;
  };
  const Criterion list[] = {
      {"local-height duplication identity", local_axioms},
      {"escape rate vs Tate series", tate_cross},
      {"limit height vs local sum at depth 7", local_global},
      {"deg D equals the surface height", degree_identity},
      {"quasi-triviality at good primes", quasi_triviality},
      {"torsion ground truth for x = 2", torsion_truth},
      {"no common torsion for x = 2 and x = 5", masser_zannier},
      {"equidistribution trend", equidistribution},
      {"subharmonicity and nonnegativity", subharmonic_nonneg},
      {"renderer determinism", renderer},
  };
  int failed = 0, k = 0;
  for (const auto& c : list) {
    ++k;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("%s %2d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", k, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", k - failed, k);
  return failed ? 1 : 0;
}
