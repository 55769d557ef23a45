#ifndef QCDIM_HPREAL_HPP
#define QCDIM_HPREAL_HPP

// Arbitrary-precision real scalar backed by MPFR.
//
// Every value carries its own precision (in significant decimal digits).
// Binary operations run at the larger of the two operand precisions, so a
// computation seeded from inputs at P digits stays at P digits unless a
// caller explicitly promotes something. There is no global precision state.

#include <mpfr.h>

#include <compare>
#include <concepts>
#include <iosfwd>
#include <string>
#include <string_view>

namespace qcdim {

/// Working precision in significant decimal digits.
class Precision {
 public:
  static constexpr int kMinimumDigits = 30;
  static constexpr int kDefaultDigits = 80;
  /// Lower limit for `forced()`; below this MPFR itself becomes meaningless.
  static constexpr int kForcedMinimumDigits = 2;
  static constexpr int kMaximumDigits = 100000;

  /// Default 80 digits.
  Precision() noexcept : digits_(kDefaultDigits) {}

  /// Throws DomainError if `digits` is below 30.
  explicit Precision(int digits);

  /// Bypasses the 30-digit floor. Used to demonstrate that claims which
  /// depend on tiny differences break down at double-like precision.
  static Precision forced(int digits);

  int digits() const noexcept { return digits_; }
  mpfr_prec_t bits() const noexcept;

  /// Extra digits on top of this precision.
  Precision plus(int extra_digits) const;

  friend auto operator<=>(Precision, Precision) = default;

 private:
  struct Unchecked {};
  Precision(int digits, Unchecked) noexcept : digits_(digits) {}
  int digits_;
};

/// Digits needed to resolve a difference of relative size `scale` against
/// O(1) quantities at `base` precision: base + ceil(-log10 |scale|) + 20.
class HPReal;
Precision guarded_precision(Precision base, const HPReal& scale);

class HPReal {
 public:
  HPReal();
  explicit HPReal(Precision p);
  HPReal(long value, Precision p);
  HPReal(double value, Precision p);

  /// Decimal or scientific notation, e.g. "2.67e-21". Throws DomainError on
  /// malformed input.
  static HPReal parse(std::string_view text, Precision p = Precision());

  HPReal(const HPReal& other);
  HPReal(HPReal&& other) noexcept;
  HPReal& operator=(const HPReal& other);
  HPReal& operator=(HPReal&& other) noexcept;
  ~HPReal();

  Precision precision() const noexcept { return precision_; }
  /// Same value re-rounded to `p` (exact when `p` is not smaller).
  HPReal with_precision(Precision p) const;

  double to_double() const;
  /// Scientific notation with `significant` digits, e.g. "6.352116315e-1".
  std::string to_string(int significant) const;
  /// All digits the precision supports.
  std::string to_string() const;

  int sign() const noexcept;
  bool is_zero() const noexcept;
  bool is_finite() const noexcept;

  HPReal& operator+=(const HPReal& rhs);
  HPReal& operator-=(const HPReal& rhs);
  HPReal& operator*=(const HPReal& rhs);
  HPReal& operator/=(const HPReal& rhs);

  HPReal operator-() const;

  friend HPReal operator+(const HPReal& a, const HPReal& b);
  friend HPReal operator-(const HPReal& a, const HPReal& b);
  friend HPReal operator*(const HPReal& a, const HPReal& b);
  friend HPReal operator/(const HPReal& a, const HPReal& b);

  // Mixed arithmetic with integers runs at the HPReal operand's precision.
  template <std::integral I>
  friend HPReal operator+(const HPReal& a, I b) { return a + a.lift(b); }
  template <std::integral I>
  friend HPReal operator+(I a, const HPReal& b) { return b.lift(a) + b; }
  template <std::integral I>
  friend HPReal operator-(const HPReal& a, I b) { return a - a.lift(b); }
  template <std::integral I>
  friend HPReal operator-(I a, const HPReal& b) { return b.lift(a) - b; }
  template <std::integral I>
  friend HPReal operator*(const HPReal& a, I b) { return a * a.lift(b); }
  template <std::integral I>
  friend HPReal operator*(I a, const HPReal& b) { return b.lift(a) * b; }
  template <std::integral I>
  friend HPReal operator/(const HPReal& a, I b) { return a / a.lift(b); }
  template <std::integral I>
  friend HPReal operator/(I a, const HPReal& b) { return b.lift(a) / b; }

  friend bool operator==(const HPReal& a, const HPReal& b);
  friend std::partial_ordering operator<=>(const HPReal& a, const HPReal& b);
  template <std::integral I>
  friend bool operator==(const HPReal& a, I b) { return a == a.lift(b); }
  template <std::integral I>
  friend std::partial_ordering operator<=>(const HPReal& a, I b) {
    return a <=> a.lift(b);
  }

  friend HPReal sqrt(const HPReal& x);
  friend HPReal exp(const HPReal& x);
  friend HPReal log(const HPReal& x);
  friend HPReal log10(const HPReal& x);
  friend HPReal abs(const HPReal& x);
  friend HPReal pow(const HPReal& base, const HPReal& exponent);
  friend HPReal pow(const HPReal& base, long exponent);
  friend HPReal floor(const HPReal& x);
  friend HPReal min(const HPReal& a, const HPReal& b);
  friend HPReal max(const HPReal& a, const HPReal& b);

  static HPReal pi(Precision p);

  mpfr_srcptr raw() const noexcept { return value_; }

 private:
  template <std::integral I>
  HPReal lift(I v) const { return HPReal(static_cast<long>(v), precision_); }

  mpfr_t value_;
  Precision precision_;
};

std::ostream& operator<<(std::ostream& os, const HPReal& x);

}  // namespace qcdim

#endif  // QCDIM_HPREAL_HPP
