#pragma once

/**
 * @file exactnum.hpp
 * @brief Exact scalars: GMP-backed rationals and the quadratic field Q(sqrt d).
 *
 * Every geometric predicate in the library is decided over one of these two
 * types, so no decision ever depends on rounding. Values are kept canonical
 * after every operation: equality is structural.
 *
 * Text encoding:
 *   Rational  "p/q"            (q omitted when 1)
 *   QuadExt   "p/q+r/s*sqrt(d)" (irrational part omitted when zero)
 */

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pvg {

/// Raised for division by an exact zero.
class DivisionByZero : public std::domain_error {
 public:
  DivisionByZero() : std::domain_error("division by zero") {}
};

/// Raised when two quadratic numbers from different fields meet.
class MixedFieldError : public std::domain_error {
 public:
  explicit MixedFieldError(const std::string& what) : std::domain_error(what) {}
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Rational
// ---------------------------------------------------------------------------

class Rational {
 public:
  Rational() = default;
  Rational(long n) : v_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(int n) : v_(n) {}   // NOLINT(google-explicit-constructor)
  Rational(long num, long den) {
    if (den == 0) throw DivisionByZero();
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }
  explicit Rational(const mpz_class& n) : v_(n) {}
  Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw DivisionByZero();
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }
  explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  const mpq_class& raw() const { return v_; }
  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  /// Largest integer <= this.
  Rational floor() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
    return Rational(q);
  }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw DivisionByZero();
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  Rational abs() const { return Rational(mpq_class(::abs(v_))); }
  Rational reciprocal() const {
    if (is_zero()) throw DivisionByZero();
    return Rational(mpq_class(1) / v_);
  }

  std::string to_string() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  /// Parses "p", "p/q", or a plain decimal such as "-1.25".
  static Rational parse(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw ParseError("empty rational");
    if (s.front() == '+') s.erase(0, 1);
    const auto dot = s.find('.');
    try {
      if (dot != std::string::npos) {
        if (s.find('/') != std::string::npos) throw ParseError("mixed decimal/fraction");
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        const std::size_t scale = s.size() - dot - 1;
        if (digits == "-" || digits.empty()) throw ParseError("bad decimal '" + s + "'");
        mpz_class num(digits, 10);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, scale);
        return Rational(num, den);
      }
      const auto slash = s.find('/');
      if (slash == std::string::npos) return Rational(mpz_class(s, 10));
      mpz_class num(s.substr(0, slash), 10);
      mpz_class den(s.substr(slash + 1), 10);
      return Rational(num, den);
    } catch (const std::invalid_argument&) {
      throw ParseError("bad rational '" + std::string(text) + "'");
    }
  }

  /// Decimal approximation with `digits` significant digits (display only).
  std::string to_decimal(int digits = 30) const;

  double to_double() const { return v_.get_d(); }

 private:
  mpq_class v_{0};
};

inline int sign(const Rational& x) { return x.sign(); }
inline std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

/// Division that reports a zero divisor as an empty value instead of throwing.
template <class T>
std::optional<T> checked_div(const T& x, const T& y) {
  if (sign(y) == 0) return std::nullopt;
  return x / y;
}

namespace detail {

inline constexpr mp_bitcnt_t kDisplayBits = 256;

// Renders a GMP float with `digits` significant digits in plain positional form.
inline std::string format_mpf(const mpf_class& f, int digits) {
  if (sgn(f) == 0) return "0";
  mp_exp_t exp = 0;
  std::string mant = f.get_str(exp, 10, static_cast<std::size_t>(digits));
  bool neg = false;
  if (!mant.empty() && mant[0] == '-') {
    neg = true;
    mant.erase(0, 1);
  }
  std::string out;
  if (exp <= 0) {
    out = "0." + std::string(static_cast<std::size_t>(-exp), '0') + mant;
  } else if (static_cast<std::size_t>(exp) >= mant.size()) {
    out = mant + std::string(static_cast<std::size_t>(exp) - mant.size(), '0');
  } else {
    out = mant.substr(0, static_cast<std::size_t>(exp)) + "." +
          mant.substr(static_cast<std::size_t>(exp));
  }
  return neg ? "-" + out : out;
}

}  // namespace detail

inline std::string Rational::to_decimal(int digits) const {
  mpf_class f(v_, detail::kDisplayBits);
  return detail::format_mpf(f, digits);
}

// ---------------------------------------------------------------------------
// QuadExt: a + b*sqrt(d), d square-free and > 1
// ---------------------------------------------------------------------------

/// True iff d > 1 and no square of a prime divides d.
inline bool is_squarefree_discriminant(long d) {
  if (d <= 1) return false;
  for (long k = 2; k * k <= d; ++k) {
    if (d % (k * k) == 0) return false;
  }
  return true;
}

/**
 * Element of Q(sqrt d). A value built from a Rational carries d = 0 until it
 * meets a value with a fixed discriminant; combining two different nonzero
 * discriminants is rejected.
 */
class QuadExt {
 public:
  static constexpr long kDefaultDiscriminant = 5;

  QuadExt() = default;
  QuadExt(long n) : a_(n) {}                  // NOLINT(google-explicit-constructor)
  QuadExt(int n) : a_(n) {}                   // NOLINT(google-explicit-constructor)
  QuadExt(Rational a) : a_(std::move(a)) {}   // NOLINT(google-explicit-constructor)
  QuadExt(Rational a, Rational b, long d = kDefaultDiscriminant)
      : a_(std::move(a)), b_(std::move(b)), d_(d) {
    if (!is_squarefree_discriminant(d)) {
      throw MixedFieldError("discriminant must be square-free and > 1, got " + std::to_string(d));
    }
  }

  /// sqrt(d) itself.
  static QuadExt sqrt_of(long d) { return QuadExt(Rational(0), Rational(1), d); }

  const Rational& rational_part() const { return a_; }
  const Rational& irrational_part() const { return b_; }
  /// 0 when the value is rational and not yet bound to a field.
  long discriminant() const { return d_; }
  bool is_rational() const { return b_.is_zero(); }

  int sign() const {
    const int sa = a_.sign();
    const int sb = b_.sign();
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    // Opposite signs: compare a^2 against b^2 d; equality is impossible.
    const Rational lhs = a_ * a_;
    const Rational rhs = b_ * b_ * Rational(d_);
    return lhs > rhs ? sa : sb;
  }
  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }

  QuadExt operator-() const { return QuadExt(-a_, -b_, d_, Raw{}); }
  QuadExt& operator+=(const QuadExt& o) {
    const long d = join_field(o);
    a_ += o.a_;
    b_ += o.b_;
    d_ = d;
    return *this;
  }
  QuadExt& operator-=(const QuadExt& o) { return *this += -o; }
  QuadExt& operator*=(const QuadExt& o) {
    const long d = join_field(o);
    Rational a = a_ * o.a_;
    if (d != 0) a += b_ * o.b_ * Rational(d);
    Rational b = a_ * o.b_ + b_ * o.a_;
    a_ = std::move(a);
    b_ = std::move(b);
    d_ = d;
    return *this;
  }
  QuadExt& operator/=(const QuadExt& o) { return *this *= o.inverse(); }

  QuadExt inverse() const {
    if (is_zero()) throw DivisionByZero();
    if (b_.is_zero()) return QuadExt(a_.reciprocal(), Rational(0), d_, Raw{});
    const Rational norm = a_ * a_ - b_ * b_ * Rational(d_);
    return QuadExt(a_ / norm, -b_ / norm, d_, Raw{});
  }

  friend QuadExt operator+(QuadExt x, const QuadExt& y) { return x += y; }
  friend QuadExt operator-(QuadExt x, const QuadExt& y) { return x -= y; }
  friend QuadExt operator*(QuadExt x, const QuadExt& y) { return x *= y; }
  friend QuadExt operator/(QuadExt x, const QuadExt& y) { return x /= y; }

  friend bool operator==(const QuadExt& x, const QuadExt& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && (x.b_.is_zero() || x.d_ == y.d_);
  }
  friend std::strong_ordering operator<=>(const QuadExt& x, const QuadExt& y) {
    const int s = (x - y).sign();
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  std::string to_string() const {
    if (b_.is_zero()) return a_.to_string();
    std::string out = a_.to_string();
    out += b_.sign() < 0 ? "-" : "+";
    out += b_.abs().to_string() + "*sqrt(" + std::to_string(d_) + ")";
    return out;
  }

  /// Parses "p/q", "p/q+r/s*sqrt(d)", "p/q-r/s*sqrt(d)" or "r/s*sqrt(d)".
  static QuadExt parse(std::string_view text) {
    std::string s(text);
    const auto sq = s.find("*sqrt(");
    if (sq == std::string::npos) return QuadExt(Rational::parse(s));
    const auto close = s.find(')', sq);
    if (close == std::string::npos || close + 1 != s.size()) {
      throw ParseError("bad quadratic number '" + s + "'");
    }
    long d = 0;
    try {
      d = std::stol(s.substr(sq + 6, close - sq - 6));
    } catch (const std::exception&) {
      throw ParseError("bad discriminant in '" + s + "'");
    }
    // The irrational coefficient starts after the last sign that is not the
    // leading one and not part of a fraction.
    std::size_t split = std::string::npos;
    for (std::size_t i = sq; i-- > 1;) {
      if (s[i] == '+' || s[i] == '-') {
        split = i;
        break;
      }
    }
    Rational a(0);
    std::string bstr;
    if (split == std::string::npos) {
      bstr = s.substr(0, sq);
    } else {
      a = Rational::parse(s.substr(0, split));
      bstr = s.substr(split, sq - split);
    }
    return QuadExt(a, Rational::parse(bstr), d);
  }

  std::string to_decimal(int digits = 30) const {
    if (b_.is_zero()) return a_.to_decimal(digits);
    mpf_class root(0, detail::kDisplayBits);
    mpf_class dd(d_, detail::kDisplayBits);
    mpf_sqrt(root.get_mpf_t(), dd.get_mpf_t());
    mpf_class val(a_.raw(), detail::kDisplayBits);
    mpf_class bb(b_.raw(), detail::kDisplayBits);
    val += bb * root;
    return detail::format_mpf(val, digits);
  }

  double to_double() const { return std::stod(to_decimal(20)); }

 private:
  struct Raw {};
  QuadExt(Rational a, Rational b, long d, Raw) : a_(std::move(a)), b_(std::move(b)), d_(d) {}

  long join_field(const QuadExt& o) const {
    if (d_ == 0) return o.d_;
    if (o.d_ == 0 || o.d_ == d_) return d_;
    throw MixedFieldError("mixed discriminants " + std::to_string(d_) + " and " +
                          std::to_string(o.d_));
  }

  Rational a_{0};
  Rational b_{0};
  long d_{0};
};

inline int sign(const QuadExt& x) { return x.sign(); }
inline std::ostream& operator<<(std::ostream& os, const QuadExt& q) { return os << q.to_string(); }

// ---------------------------------------------------------------------------
// Generic helpers
// ---------------------------------------------------------------------------

/// Exact scalar field usable by the geometry templates.
template <class T>
concept ExactField = requires(const T& a, const T& b) {
  { a + b } -> std::convertible_to<T>;
  { a - b } -> std::convertible_to<T>;
  { a * b } -> std::convertible_to<T>;
  { a / b } -> std::convertible_to<T>;
  { -a } -> std::convertible_to<T>;
  { sign(a) } -> std::convertible_to<int>;
  { a == b } -> std::convertible_to<bool>;
  { a.to_string() } -> std::convertible_to<std::string>;
  { a.to_decimal(30) } -> std::convertible_to<std::string>;
};

template <class T>
T parse_scalar(std::string_view text);

template <>
inline Rational parse_scalar<Rational>(std::string_view text) { return Rational::parse(text); }

template <>
inline QuadExt parse_scalar<QuadExt>(std::string_view text) { return QuadExt::parse(text); }

template <class T>
std::string to_string(const T& x) { return x.to_string(); }

}  // namespace pvg
