#include "cutfn/rational.hpp"

#include <cctype>

#include "cutfn/error.hpp"

namespace cutfn {

namespace {

bool valid_magnitude(std::string_view s) {
  if (s.empty()) return false;
  if (s[0] == '0') return s.size() == 1;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational::Rational(long num, long den) {
  if (den == 0) throw Error("rational denominator must be nonzero");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational::Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
  std::string_view s = text;
  bool neg = false;
  if (!s.empty() && s[0] == '-') {
    neg = true;
    s.remove_prefix(1);
  }
  std::string_view num = s, den = "1";
  if (auto pos = s.find('/'); pos != std::string_view::npos) {
    num = s.substr(0, pos);
    den = s.substr(pos + 1);
  }
  auto fail = [&](const char* why) -> Rational {
    throw Error("invalid rational '" + std::string(text) + "': " + why);
  };
  if (!valid_magnitude(num) || !valid_magnitude(den))
    return fail("expected p or p/q with plain decimal digits");
  if (den == "0") return fail("zero denominator");
  if (neg && num == "0") return fail("negative zero");

  mpz_class n(std::string(num), 10), d(std::string(den), 10);
  if (neg) n = -n;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  if (g != 1 && n != 0) return fail("not in lowest terms");

  Rational r;
  r.q_ = mpq_class(n, d);
  r.q_.canonicalize();
  return r;
}

Rational Rational::pow2(long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
  Rational r;
  r.q_ = e < 0 ? mpq_class(1, p) : mpq_class(p);
  r.q_.canonicalize();
  return r;
}

Rational Rational::abs() const {
  Rational r;
  r.q_ = ::abs(q_);
  return r;
}

mpz_class Rational::floor() const {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return f;
}

Rational Rational::mod1() const {
  Rational r;
  r.q_ = q_ - mpq_class(floor());
  return r;
}

Rational Rational::pow(unsigned long e) const {
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), q_.get_num_mpz_t(), e);
  mpz_pow_ui(d.get_mpz_t(), q_.get_den_mpz_t(), e);
  Rational r;
  r.q_ = mpq_class(n, d);  // already canonical when the base is
  return r;
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw Error("rational division by zero");
  return Rational(mpq_class(a.q_ / b.q_));
}

Rational& Rational::operator/=(const Rational& b) {
  if (b.is_zero()) throw Error("rational division by zero");
  q_ /= b.q_;
  return *this;
}

std::string Rational::str() const {
  if (q_.get_den() == 1) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::string Rational::decimal(unsigned digits) const {
  mpz_class n = ::abs(q_.get_num());
  const mpz_class& d = q_.get_den();
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  n *= scale;
  mpz_class qu, re;
  mpz_fdiv_qr(qu.get_mpz_t(), re.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  if (2 * re >= d) qu += 1;

  std::string s = qu.get_str();
  if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
  if (digits > 0) s.insert(s.size() - digits, ".");
  if (sign() < 0 && qu != 0) s.insert(0, "-");
  return s;
}

}  // namespace cutfn
