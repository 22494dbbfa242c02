#include "hauteur/numeric/rat.hpp"

#include <cmath>
#include <string>

#include "hauteur/error.hpp"

namespace hauteur {

Rat::Rat(const Int& n, const Int& d) {
  if (d == 0) throw Error(ErrorCode::Domain, "zero denominator");
  q_ = mpq_class(n, d);
  q_.canonicalize();
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.is_zero()) throw Error(ErrorCode::Domain, "division by zero");
  q_ /= o.q_;
  return *this;
}

static Int parse_int(std::string_view s, bool allow_sign) {
  std::string t(s);
  if (t.empty()) throw Error(ErrorCode::Parse, "empty number");
  size_t i = 0;
  if (allow_sign && (t[0] == '-' || t[0] == '+')) i = 1;
  if (i >= t.size()) throw Error(ErrorCode::Parse, "bad number '" + t + "'");
  for (size_t k = i; k < t.size(); ++k)
    if (t[k] < '0' || t[k] > '9') throw Error(ErrorCode::Parse, "bad number '" + t + "'");
  if (t[0] == '+') t.erase(0, 1);
  return Int(t, 10);
}

Rat Rat::parse(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) throw Error(ErrorCode::Parse, "empty rational");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Int n = parse_int(s.substr(0, slash), true);
    Int d = parse_int(s.substr(slash + 1), true);
    if (d == 0) throw Error(ErrorCode::Parse, "zero denominator in '" + std::string(s) + "'");
    return Rat(n, d);
  }
  // decimal with optional exponent
  std::string t(s);
  bool neg = false;
  size_t i = 0;
  if (t[0] == '-' || t[0] == '+') { neg = t[0] == '-'; i = 1; }
  std::string digits;
  long scale = 0;
  bool seen_dot = false, any = false;
  for (; i < t.size(); ++i) {
    char c = t[i];
    if (c >= '0' && c <= '9') { digits += c; any = true; if (seen_dot) ++scale; }
    else if (c == '.' && !seen_dot) seen_dot = true;
    else break;
  }
  if (!any) throw Error(ErrorCode::Parse, "bad number '" + t + "'");
  long expo = 0;
  if (i < t.size()) {
    if (t[i] != 'e' && t[i] != 'E') throw Error(ErrorCode::Parse, "bad number '" + t + "'");
    Int e = parse_int(std::string_view(t).substr(i + 1), true);
    if (!e.fits_slong_p() || abs(e) > 100000) throw Error(ErrorCode::Parse, "exponent too large");
    expo = e.get_si();
  }
  Int n(digits, 10);
  if (neg) n = -n;
  long net = expo - scale;
  Int p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(net < 0 ? -net : net));
  return net >= 0 ? Rat(Int(n * p10)) : Rat(n, p10);
}

double Rat::to_double() const {
  if (is_zero()) return 0.0;
  long en = 0, ed = 0;
  double mn = mpz_get_d_2exp(&en, q_.get_num_mpz_t());
  double md = mpz_get_d_2exp(&ed, q_.get_den_mpz_t());
  return std::ldexp(mn / md, static_cast<int>(en - ed));
}

Rat abs(const Rat& a) { return a.sign() < 0 ? -a : a; }

Rat pow(const Rat& a, long e) {
  Rat base = e < 0 ? Rat(1) / a : a;
  unsigned long n = static_cast<unsigned long>(e < 0 ? -e : e);
  Int num, den;
  mpz_pow_ui(num.get_mpz_t(), base.num_ref().get_mpz_t(), n);
  mpz_pow_ui(den.get_mpz_t(), base.den_ref().get_mpz_t(), n);
  return Rat(num, den);
}

double log_abs(const Int& x) {
  if (x == 0) return -INFINITY;
  long e = 0;
  double m = mpz_get_d_2exp(&e, x.get_mpz_t());
  return std::log(std::fabs(m)) + static_cast<double>(e) * std::log(2.0);
}

double log_abs(const Rat& x) { return log_abs(x.num_ref()) - log_abs(x.den_ref()); }

// Continued-fraction descent: the simplest rational in a closed interval.
Rat simplest_in_interval(const Rat& lo_in, const Rat& hi_in) {
  Rat lo = lo_in, hi = hi_in;
  if (hi < lo) std::swap(lo, hi);
  if (lo.sign() <= 0 && hi.sign() >= 0) return Rat(0);
  if (hi.sign() < 0) return -simplest_in_interval(-hi, -lo);
  // 0 < lo <= hi
  Int fl;
  mpz_fdiv_q(fl.get_mpz_t(), lo.num_ref().get_mpz_t(), lo.den_ref().get_mpz_t());
  if (Rat(fl) == lo) return lo;
  if (Rat(Int(fl + 1)) <= hi) return Rat(Int(fl + 1));
  // both in (fl, fl+1): recurse on reciprocals of fractional parts
  Rat r = simplest_in_interval(Rat(1) / (hi - Rat(fl)), Rat(1) / (lo - Rat(fl)));
  return Rat(fl) + Rat(1) / r;
}

}  // namespace hauteur
