#ifndef NLB_POLY_HPP
#define NLB_POLY_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "nlb/valuation.hpp"

namespace nlb {

/// Univariate polynomial with exact rational coefficients.
/// coeffs()[i] is the coefficient of t^i; the zero polynomial has no
/// coefficients and a nonzero polynomial never has a zero leading term.
class DensePoly {
public:
    DensePoly() = default;
    explicit DensePoly(std::vector<Rational> coeffs);

    static DensePoly constant(const Rational& c);
    /// The polynomial t.
    static DensePoly variable();
    static DensePoly monomial(const Rational& c, std::size_t degree);

    bool is_zero() const noexcept { return coeffs_.empty(); }
    bool is_constant() const noexcept { return coeffs_.size() <= 1; }
    /// -1 for the zero polynomial.
    long degree() const noexcept { return static_cast<long>(coeffs_.size()) - 1; }

    const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }
    /// Zero beyond the degree.
    Rational coeff(std::size_t i) const;
    const Rational& leading() const;

    Rational operator()(const Rational& x) const;

    DensePoly operator-() const;
    friend DensePoly operator+(const DensePoly& a, const DensePoly& b);
    friend DensePoly operator-(const DensePoly& a, const DensePoly& b);
    friend DensePoly operator*(const DensePoly& a, const DensePoly& b);
    friend DensePoly operator*(const Rational& c, const DensePoly& a);

    friend bool operator==(const DensePoly&, const DensePoly&) = default;

private:
    void trim();

    std::vector<Rational> coeffs_;
};

/// Quotient and remainder of exact division over Q. Throws on zero divisor.
std::pair<DensePoly, DensePoly> divmod(const DensePoly& a, const DensePoly& b);
DensePoly derivative(const DensePoly& f);
/// Scales to leading coefficient 1; the zero polynomial stays zero.
DensePoly monic(const DensePoly& f);
/// Monic gcd; gcd(0, 0) = 0.
DensePoly gcd(const DensePoly& a, const DensePoly& b);
/// Exact quotient, throws std::domain_error when b does not divide a.
DensePoly exact_div(const DensePoly& a, const DensePoly& b);
/// Total order used for canonical keys: by degree, then coefficients from the top.
int compare(const DensePoly& a, const DensePoly& b);

/// Human-readable form, e.g. "t^3 - 17/4*t^2 + 5*t - 1".
std::string to_string(const DensePoly& f, const std::string& var = "t");

/// Coefficient-index to valuation map of a polynomial at a fixed prime.
/// Omitted indices stand for infinite valuation (zero coefficients).
class ValuedPoly {
public:
    struct Entry {
        std::size_t index;
        ExtVal val;
        friend bool operator==(const Entry&, const Entry&) = default;
    };

    /// Entries must have strictly increasing indices not exceeding degree,
    /// with a finite entry at the degree itself. Infinite entries are dropped.
    ValuedPoly(Prime prime, std::size_t degree, std::vector<Entry> entries);

    const Prime& prime() const noexcept { return prime_; }
    std::size_t degree() const noexcept { return degree_; }
    const std::vector<Entry>& entries() const noexcept { return entries_; }
    /// Valuation at index i, infinity when absent.
    ExtVal at(std::size_t i) const;

    friend bool operator==(const ValuedPoly&, const ValuedPoly&) = default;

private:
    Prime prime_;
    std::size_t degree_;
    std::vector<Entry> entries_;
};

struct RootSpec {
    struct Root {
        Rational value;
        std::size_t multiplicity;
    };
    std::vector<Root> roots;
};

/// leading * prod (t - root)^multiplicity.
DensePoly from_roots(const RootSpec& spec, const Rational& leading);
ValuedPoly coefficient_valuations(const DensePoly& poly, const Prime& p);
/// True iff f divides g over Q. f must be nonzero.
bool divides(const DensePoly& f, const DensePoly& g);
/// f / gcd(f, f'), made monic.
DensePoly squarefree_part(const DensePoly& f);

} // namespace nlb

#endif
