#include "qcdim/hpreal.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "qcdim/errors.hpp"

namespace qcdim {

namespace {

constexpr mpfr_rnd_t kRound = MPFR_RNDN;
constexpr double kBitsPerDigit = 3.32192809488736234787;  // log2(10)

mpfr_prec_t digits_to_bits(int digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * kBitsPerDigit));
}

}  // namespace

Precision::Precision(int digits) : digits_(digits) {
  if (digits < kMinimumDigits || digits > kMaximumDigits) {
    throw DomainError("precision must be between " +
                      std::to_string(kMinimumDigits) + " and " +
                      std::to_string(kMaximumDigits) + " digits, got " +
                      std::to_string(digits));
  }
}

Precision Precision::forced(int digits) {
  if (digits < kForcedMinimumDigits || digits > kMaximumDigits) {
    throw DomainError("forced precision must be at least " +
                      std::to_string(kForcedMinimumDigits) + " digits");
  }
  return Precision(digits, Unchecked{});
}

mpfr_prec_t Precision::bits() const noexcept { return digits_to_bits(digits_); }

Precision Precision::plus(int extra_digits) const {
  return Precision(std::clamp(digits_ + extra_digits, kForcedMinimumDigits,
                              kMaximumDigits),
                   Unchecked{});
}

Precision guarded_precision(Precision base, const HPReal& scale) {
  if (scale.is_zero() || !scale.is_finite()) return base.plus(20);
  // |scale| = m * 2^e with m in [0.5, 1): -log10|scale| <= -e*log10(2) + 1.
  const long e = mpfr_get_exp(scale.raw());
  const int extra = e < 0 ? static_cast<int>(std::ceil(-e * 0.30102999566398120)) + 1 : 0;
  return base.plus(extra + 20);
}

HPReal::HPReal() : HPReal(Precision()) {}

HPReal::HPReal(Precision p) : precision_(p) {
  mpfr_init2(value_, p.bits());
  mpfr_set_zero(value_, 1);
}

HPReal::HPReal(long value, Precision p) : precision_(p) {
  mpfr_init2(value_, p.bits());
  mpfr_set_si(value_, value, kRound);
}

HPReal::HPReal(double value, Precision p) : precision_(p) {
  mpfr_init2(value_, p.bits());
  mpfr_set_d(value_, value, kRound);
}

HPReal HPReal::parse(std::string_view text, Precision p) {
  HPReal out(p);
  const std::string s(text);
  char* end = nullptr;
  if (!s.empty()) mpfr_strtofr(out.value_, s.c_str(), &end, 10, kRound);
  if (s.empty() || end == s.c_str() || *end != '\0') {
    throw DomainError("cannot parse '" + s + "' as a real number");
  }
  if (!out.is_finite()) {
    throw DomainError("non-finite value '" + s + "'");
  }
  return out;
}

HPReal::HPReal(const HPReal& other) : precision_(other.precision_) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, kRound);
}

HPReal::HPReal(HPReal&& other) noexcept : precision_(other.precision_) {
  // Steal the limbs and leave `other` as a valid 2-bit zero.
  value_[0] = other.value_[0];
  mpfr_init2(other.value_, MPFR_PREC_MIN);
  mpfr_set_zero(other.value_, 1);
}

HPReal& HPReal::operator=(const HPReal& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, kRound);
    precision_ = other.precision_;
  }
  return *this;
}

HPReal& HPReal::operator=(HPReal&& other) noexcept {
  if (this != &other) {
    mpfr_swap(value_, other.value_);
    std::swap(precision_, other.precision_);
  }
  return *this;
}

HPReal::~HPReal() { mpfr_clear(value_); }

HPReal HPReal::with_precision(Precision p) const {
  HPReal out(p);
  mpfr_set(out.value_, value_, kRound);
  return out;
}

double HPReal::to_double() const { return mpfr_get_d(value_, kRound); }

std::string HPReal::to_string(int significant) const {
  significant = std::max(significant, 1);
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Re", significant - 1, value_);
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

std::string HPReal::to_string() const { return to_string(precision_.digits()); }

int HPReal::sign() const noexcept { return mpfr_sgn(value_); }
bool HPReal::is_zero() const noexcept { return mpfr_zero_p(value_) != 0; }
bool HPReal::is_finite() const noexcept { return mpfr_number_p(value_) != 0; }

namespace {

using BinaryOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

HPReal binary(const HPReal& a, const HPReal& b, BinaryOp op) {
  HPReal out(std::max(a.precision(), b.precision()));
  op(const_cast<mpfr_ptr>(out.raw()), a.raw(), b.raw(), kRound);
  return out;
}

using UnaryOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);

HPReal unary(const HPReal& x, UnaryOp op) {
  HPReal out(x.precision());
  op(const_cast<mpfr_ptr>(out.raw()), x.raw(), kRound);
  return out;
}

}  // namespace

HPReal operator+(const HPReal& a, const HPReal& b) { return binary(a, b, mpfr_add); }
HPReal operator-(const HPReal& a, const HPReal& b) { return binary(a, b, mpfr_sub); }
HPReal operator*(const HPReal& a, const HPReal& b) { return binary(a, b, mpfr_mul); }
HPReal operator/(const HPReal& a, const HPReal& b) { return binary(a, b, mpfr_div); }

HPReal& HPReal::operator+=(const HPReal& rhs) { return *this = *this + rhs; }
HPReal& HPReal::operator-=(const HPReal& rhs) { return *this = *this - rhs; }
HPReal& HPReal::operator*=(const HPReal& rhs) { return *this = *this * rhs; }
HPReal& HPReal::operator/=(const HPReal& rhs) { return *this = *this / rhs; }

HPReal HPReal::operator-() const { return unary(*this, mpfr_neg); }

bool operator==(const HPReal& a, const HPReal& b) {
  return mpfr_equal_p(a.raw(), b.raw()) != 0;
}

std::partial_ordering operator<=>(const HPReal& a, const HPReal& b) {
  if (mpfr_unordered_p(a.raw(), b.raw())) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.raw(), b.raw());
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

HPReal sqrt(const HPReal& x) { return unary(x, mpfr_sqrt); }
HPReal exp(const HPReal& x) { return unary(x, mpfr_exp); }
HPReal log(const HPReal& x) { return unary(x, mpfr_log); }
HPReal log10(const HPReal& x) { return unary(x, mpfr_log10); }
HPReal abs(const HPReal& x) { return unary(x, mpfr_abs); }

HPReal floor(const HPReal& x) {
  HPReal out(x.precision());
  mpfr_floor(const_cast<mpfr_ptr>(out.raw()), x.raw());
  return out;
}

HPReal pow(const HPReal& base, const HPReal& exponent) {
  return binary(base, exponent, mpfr_pow);
}

HPReal pow(const HPReal& base, long exponent) {
  HPReal out(base.precision());
  mpfr_pow_si(const_cast<mpfr_ptr>(out.raw()), base.raw(), exponent, kRound);
  return out;
}

HPReal min(const HPReal& a, const HPReal& b) { return binary(a, b, mpfr_min); }
HPReal max(const HPReal& a, const HPReal& b) { return binary(a, b, mpfr_max); }

HPReal HPReal::pi(Precision p) {
  HPReal out(p);
  mpfr_const_pi(out.value_, kRound);
  return out;
}

std::ostream& operator<<(std::ostream& os, const HPReal& x) {
  return os << x.to_string(std::min(x.precision().digits(), 40));
}

}  // namespace qcdim
