#include "hauteur/numeric/roots.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cfloat>
#include <climits>
#include <cmath>
#include <memory>

#include "hauteur/error.hpp"

namespace hauteur {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

AberthResult aberth(std::vector<Cx> z, const NewtonFn& f, const RootOptions& opt) {
  const std::size_t n = z.size();
  AberthResult res;
  res.backward_error.assign(n, INFINITY);
  std::vector<char> done(n, 0);
  for (std::size_t i = 0; i < n && i < opt.fixed.size(); ++i) done[i] = opt.fixed[i];
  std::vector<double> last_step(n, INFINITY);
  const double be_tol = std::max(4.0 * static_cast<double>(n + 1) * DBL_EPSILON, 1e-15);
  int sweep = 0;
  for (; sweep < opt.max_sweeps; ++sweep) {
    bool all = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      NewtonStep st = f(z[i]);
      res.backward_error[i] = st.backward_error;
      if (st.backward_error <= be_tol || st.ratio == Cx(0, 0)) { done[i] = 1; continue; }
      Cx S = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        Cx d = z[i] - z[j];
        if (d == Cx(0, 0)) d = Cx(1e-300, 0);
        S += 1.0 / d;
      }
      Cx w = st.ratio / (1.0 - st.ratio * S);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) w = st.ratio;
      z[i] -= w;
      double aw = std::abs(w);
      // a step below tol that no longer shrinks has reached the evaluation noise
      const double scale = opt.relative ? std::abs(z[i]) : std::max(1.0, std::abs(z[i]));
      bool stalled = aw <= opt.tol * scale && aw >= 0.5 * last_step[i];
      last_step[i] = aw;
      if (aw <= 2.0 * DBL_EPSILON * std::abs(z[i]) || stalled) done[i] = 1;
      else all = false;
    }
    if (all) { ++sweep; break; }
  }
  res.sweeps = sweep;
  res.converged = std::all_of(done.begin(), done.end(), [](char c) { return c != 0; });
  // one refinement pass, then final backward errors
  for (std::size_t i = 0; i < n; ++i) {
    if (i < opt.fixed.size() && opt.fixed[i]) {
      res.backward_error[i] = 0;
      continue;
    }
    NewtonStep st = f(z[i]);
    if (st.backward_error > be_tol && st.ratio != Cx(0, 0)) {
      Cx S = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i && z[i] != z[j]) S += 1.0 / (z[i] - z[j]);
      Cx w = st.ratio / (1.0 - st.ratio * S);
      if (std::isfinite(w.real()) && std::isfinite(w.imag())) {
        Cx cand = z[i] - w;
        NewtonStep st2 = f(cand);
        if (st2.backward_error <= st.backward_error) { z[i] = cand; st = st2; }
      }
    }
    res.backward_error[i] = st.backward_error;
  }
  res.roots = std::move(z);
  return res;
}

std::vector<Cx> newton_polygon_start(const std::vector<double>& la) {
  const std::size_t n = la.size() - 1;
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i <= n; ++i) {
    if (!std::isfinite(la[i])) continue;
    while (hull.size() >= 2) {
      std::size_t a = hull[hull.size() - 2], b = hull.back();
      // remove b when it lies on or below segment a -> i
      double cross = (static_cast<double>(b - a)) * (la[i] - la[a]) - (static_cast<double>(i - a)) * (la[b] - la[a]);
      if (cross >= 0) hull.pop_back();
      else break;
    }
    hull.push_back(i);
  }
  std::vector<Cx> z;
  z.reserve(n);
  const double sigma = 0.7;
  for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
    std::size_t i = hull[e], j = hull[e + 1];
    std::size_t m = j - i;
    double r = std::exp((la[i] - la[j]) / static_cast<double>(m));
    for (std::size_t k = 0; k < m; ++k) {
      double ang = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(m) +
                   2.0 * kPi * static_cast<double>(i) / static_cast<double>(n) + sigma;
      z.emplace_back(r * std::cos(ang), r * std::sin(ang));
    }
  }
  return z;
}

std::vector<double> log_abs_coeffs(const ZPoly& f) {
  std::vector<double> la(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) la[i] = sgn(f[i]) == 0 ? -INFINITY : log_abs(f[i]);
  return la;
}

namespace {
// long double keeps the x87 exponent range, so coefficients thousands of bits apart stay nonzero
using LD = long double;
struct CxL {
  LD re, im;
};
inline CxL mul(CxL a, CxL b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
inline LD absl(CxL a) { return std::hypot(a.re, a.im); }
inline CxL divl(CxL a, CxL b) {
  // Smith's method
  if (std::fabs(b.re) >= std::fabs(b.im)) {
    LD r = b.im / b.re, d = b.re + b.im * r;
    return {(a.re + a.im * r) / d, (a.im - a.re * r) / d};
  }
  LD r = b.re / b.im, d = b.re * r + b.im;
  return {(a.re * r + a.im) / d, (a.im * r - a.re) / d};
}
}  // namespace

NewtonFn poly_newton(const ZPoly& f) {
  // scale so the largest coefficient is about 1
  long emax = LONG_MIN;
  for (const auto& c : f.coeffs()) {
    if (sgn(c) == 0) continue;
    emax = std::max<long>(emax, static_cast<long>(mpz_sizeinbase(c.get_mpz_t(), 2)));
  }
  auto coeffs = std::make_shared<std::vector<LD>>(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (sgn(f[i]) == 0) { (*coeffs)[i] = 0; continue; }
    long e = 0;
    double m = mpz_get_d_2exp(&e, f[i].get_mpz_t());
    (*coeffs)[i] = std::ldexp(static_cast<LD>(m), static_cast<int>(e - emax));
  }
  return [coeffs](const Cx& zd) -> NewtonStep {
    const auto& c = *coeffs;
    const std::size_t n = c.size() - 1;
    CxL z{zd.real(), zd.imag()};
    LD az = absl(z);
    if (az <= 1) {
      CxL p{c[n], 0}, dp{0, 0};
      LD s = std::fabs(c[n]);
      for (std::size_t k = n; k-- > 0;) {
        dp = mul(dp, z);
        dp.re += p.re;
        dp.im += p.im;
        p = mul(p, z);
        p.re += c[k];
        s = s * az + std::fabs(c[k]);
      }
      if (p.re == 0 && p.im == 0) return {Cx(0, 0), 0.0};
      CxL r = divl(p, dp);
      return {Cx(static_cast<double>(r.re), static_cast<double>(r.im)), static_cast<double>(absl(p) / s)};
    }
    CxL y = divl({1, 0}, z);
    LD ay = absl(y);
    CxL q{c[0], 0}, dq{0, 0};
    LD s = std::fabs(c[0]);
    for (std::size_t k = 1; k <= n; ++k) {
      dq = mul(dq, y);
      dq.re += q.re;
      dq.im += q.im;
      q = mul(q, y);
      q.re += c[k];
      s = s * ay + std::fabs(c[k]);
    }
    if (q.re == 0 && q.im == 0) return {Cx(0, 0), 0.0};
    CxL yd = mul(y, dq);
    CxL denom{static_cast<LD>(n) * q.re - yd.re, static_cast<LD>(n) * q.im - yd.im};
    CxL r = divl(mul(z, q), denom);
    return {Cx(static_cast<double>(r.re), static_cast<double>(r.im)), static_cast<double>(absl(q) / s)};
  };
}

void sort_roots(std::vector<Cx>& roots, double tol) {
  auto key = [tol](const Cx& z) { return std::pair<double, double>(std::round(z.real() / tol), std::round(z.imag() / tol)); };
  std::stable_sort(roots.begin(), roots.end(), [&](const Cx& a, const Cx& b) { return key(a) < key(b); });
}

std::vector<Cx> companion_roots(const ZPoly& f) {
  const int n = f.degree();
  if (n < 1) return {};
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  double lead = Rat(f.lead()).to_double();
  for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) C(i, n - 1) = -Rat(f[static_cast<std::size_t>(i)]).to_double() / lead;
  Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
  std::vector<Cx> out;
  for (int i = 0; i < n; ++i) out.push_back(es.eigenvalues()[i]);
  return out;
}

std::vector<Cx> complex_roots(const ZPoly& f_in, double tol) {
  if (f_in.is_zero()) throw Error(ErrorCode::DegenerateInput, "roots of the zero polynomial");
  std::size_t zeros = f_in.low_order();
  ZPoly f = shift_down(f_in, zeros);
  std::vector<Cx> out(zeros, Cx(0, 0));
  const int n = f.degree();
  if (n >= 1) {
    NewtonFn fn = poly_newton(f);
    RootOptions opt;
    opt.tol = tol;
    AberthResult r = aberth(newton_polygon_start(log_abs_coeffs(f)), fn, opt);
    bool ok = r.converged && std::all_of(r.backward_error.begin(), r.backward_error.end(), [&](double b) { return b <= tol; });
    if (!ok && n > 400) throw Error(ErrorCode::Nonconvergence, "root finding failed for degree " + std::to_string(n));
    if (!ok) {
      // companion-matrix fallback, polished by the same iteration
      RootOptions opt2 = opt;
      opt2.max_sweeps = 200;
      AberthResult r2 = aberth(companion_roots(f), fn, opt2);
      bool ok2 = std::all_of(r2.backward_error.begin(), r2.backward_error.end(), [&](double b) { return b <= tol; });
      if (!ok2) throw Error(ErrorCode::Nonconvergence, "root finding failed for degree " + std::to_string(n));
      r = std::move(r2);
    }
    out.insert(out.end(), r.roots.begin(), r.roots.end());
  }
  sort_roots(out, tol);
  return out;
}

std::vector<Cx> complex_roots(const Poly& f, double tol) {
  if (f.is_zero()) throw Error(ErrorCode::DegenerateInput, "roots of the zero polynomial");
  return complex_roots(to_primitive(f).z, tol);
}

}  // namespace hauteur
