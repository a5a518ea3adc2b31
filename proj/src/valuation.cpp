#include "nlb/valuation.hpp"

#include <algorithm>
#include <cctype>

namespace nlb {

std::string to_string(const Integer& z) { return z.get_str(10); }

std::string to_string(const Rational& q)
{
    if (q.get_den() == 1)
        return q.get_num().get_str(10);
    return q.get_num().get_str(10) + "/" + q.get_den().get_str(10);
}

namespace {

Integer parse_integer(std::string_view text)
{
    std::size_t i = 0;
    if (!text.empty() && (text[0] == '-' || text[0] == '+'))
        i = 1;
    if (i == text.size())
        throw std::invalid_argument("malformed integer: '" + std::string(text) + "'");
    for (std::size_t k = i; k < text.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(text[k])))
            throw std::invalid_argument("malformed integer: '" + std::string(text) + "'");
    std::string s(text[0] == '+' ? text.substr(1) : text);
    return Integer(s, 10);
}

} // namespace

Rational parse_rational(std::string_view text)
{
    const auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return Rational(parse_integer(text));
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0)
        throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Prime::Prime(std::uint64_t p) : p_(p)
{
    if (p < 2)
        throw std::invalid_argument("prime must be >= 2, got " + std::to_string(p));
    for (std::uint64_t d = 2; d <= p / d; ++d)
        if (p % d == 0)
            throw std::invalid_argument(std::to_string(p) + " is not prime");
}

const Rational& ExtVal::value() const
{
    if (!finite_)
        throw std::logic_error("value() of infinite valuation");
    return v_;
}

ExtVal ExtVal::operator-() const
{
    if (!finite_)
        throw std::logic_error("negation of infinite valuation");
    return ExtVal(Rational(-v_));
}

ExtVal operator+(const ExtVal& a, const ExtVal& b)
{
    if (!a.finite_ || !b.finite_)
        return ExtVal::infinity();
    return ExtVal(Rational(a.v_ + b.v_));
}

ExtVal operator-(const ExtVal& a, const ExtVal& b) { return a + (-b); }

ExtVal operator*(const Integer& k, const ExtVal& a)
{
    if (k < 0)
        throw std::domain_error("negative scale of a valuation");
    if (!a.finite_) {
        if (k == 0)
            throw std::domain_error("0 * infinity");
        return a;
    }
    return ExtVal(Rational(Rational(k) * a.v_));
}

bool operator==(const ExtVal& a, const ExtVal& b)
{
    if (a.finite_ != b.finite_)
        return false;
    return !a.finite_ || a.v_ == b.v_;
}

std::strong_ordering operator<=>(const ExtVal& a, const ExtVal& b)
{
    if (!a.finite_ || !b.finite_) {
        if (a.finite_ == b.finite_)
            return std::strong_ordering::equal;
        return a.finite_ ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    const int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::string to_string(const ExtVal& v) { return v.is_finite() ? to_string(v.value()) : "inf"; }

ExtVal parse_extval(std::string_view text)
{
    if (text == "inf")
        return ExtVal::infinity();
    return ExtVal(parse_rational(text));
}

unsigned long val_p(const Integer& x, const Prime& p)
{
    if (x == 0)
        throw std::domain_error("valuation of zero integer");
    if (p.value() == 2)
        return mpz_scan1(x.get_mpz_t(), 0);
    Integer rest = abs(x);
    const Integer pz(std::to_string(p.value()), 10);
    unsigned long e = 0;
    while (mpz_divisible_p(rest.get_mpz_t(), pz.get_mpz_t())) {
        mpz_divexact(rest.get_mpz_t(), rest.get_mpz_t(), pz.get_mpz_t());
        ++e;
    }
    return e;
}

ExtVal val_p(const Rational& x, const Prime& p)
{
    if (x == 0)
        return ExtVal::infinity();
    // x is canonical, so at most one of num/den is divisible by p.
    const long num = static_cast<long>(val_p(x.get_num(), p));
    const long den = static_cast<long>(val_p(x.get_den(), p));
    return ExtVal(num - den);
}

ExtVal ultrametric_sum_bound(std::span<const ExtVal> vals)
{
    if (vals.empty())
        throw std::invalid_argument("ultrametric_sum_bound of an empty list");
    return *std::min_element(vals.begin(), vals.end());
}

} // namespace nlb
