#ifndef NLB_VALUATION_HPP
#define NLB_VALUATION_HPP

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace nlb {

using Integer = mpz_class;
using Rational = mpq_class;

/// Decimal "num/den" form, den omitted when 1.
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

/// Parses "num", "num/den" or "-num/den". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// A prime number, checked at construction.
class Prime {
public:
    explicit Prime(std::uint64_t p);

    std::uint64_t value() const noexcept { return p_; }

    friend bool operator==(const Prime&, const Prime&) = default;

private:
    std::uint64_t p_;
};

/// A valuation value: an exact rational or +infinity.
class ExtVal {
public:
    ExtVal() = default; // infinity
    ExtVal(Rational v) : finite_(true), v_(std::move(v)) { v_.canonicalize(); }
    ExtVal(long v) : finite_(true), v_(v) {}

    static ExtVal infinity() { return ExtVal(); }

    bool is_finite() const noexcept { return finite_; }
    bool is_infinite() const noexcept { return !finite_; }

    /// Throws std::logic_error on infinity.
    const Rational& value() const;

    ExtVal operator-() const;

    friend ExtVal operator+(const ExtVal& a, const ExtVal& b);
    friend ExtVal operator-(const ExtVal& a, const ExtVal& b);
    /// Scaling by a nonnegative integer; 0 * inf is rejected.
    friend ExtVal operator*(const Integer& k, const ExtVal& a);

    friend bool operator==(const ExtVal& a, const ExtVal& b);
    friend std::strong_ordering operator<=>(const ExtVal& a, const ExtVal& b);

private:
    bool finite_ = false;
    Rational v_;
};

/// "inf" for infinity, otherwise the rational form.
std::string to_string(const ExtVal& v);
ExtVal parse_extval(std::string_view text);

/// Exponent of p in x; infinity for x = 0.
ExtVal val_p(const Rational& x, const Prime& p);
/// Exponent of p in a nonzero integer; throws std::domain_error for zero.
unsigned long val_p(const Integer& x, const Prime& p);

/// min of the inputs, which lower-bounds the valuation of the sum of the
/// underlying values. Equality holds when the minimum is attained once.
ExtVal ultrametric_sum_bound(std::span<const ExtVal> vals);

} // namespace nlb

#endif
