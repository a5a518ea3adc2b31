#include "nlb/poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace nlb {

DensePoly::DensePoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs))
{
    for (auto& c : coeffs_)
        c.canonicalize();
    trim();
}

DensePoly DensePoly::constant(const Rational& c) { return DensePoly(std::vector<Rational>{c}); }

DensePoly DensePoly::variable() { return monomial(Rational(1), 1); }

DensePoly DensePoly::monomial(const Rational& c, std::size_t degree)
{
    std::vector<Rational> v(degree + 1);
    v[degree] = c;
    return DensePoly(std::move(v));
}

void DensePoly::trim()
{
    while (!coeffs_.empty() && coeffs_.back() == 0)
        coeffs_.pop_back();
}

Rational DensePoly::coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Rational(0); }

const Rational& DensePoly::leading() const
{
    if (coeffs_.empty())
        throw std::logic_error("leading coefficient of the zero polynomial");
    return coeffs_.back();
}

Rational DensePoly::operator()(const Rational& x) const
{
    Rational acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = acc * x + *it;
    return acc;
}

DensePoly DensePoly::operator-() const
{
    DensePoly r = *this;
    for (auto& c : r.coeffs_)
        c = -c;
    return r;
}

DensePoly operator+(const DensePoly& a, const DensePoly& b)
{
    std::vector<Rational> v(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        v[i] += a.coeffs_[i];
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i)
        v[i] += b.coeffs_[i];
    return DensePoly(std::move(v));
}

DensePoly operator-(const DensePoly& a, const DensePoly& b) { return a + (-b); }

DensePoly operator*(const DensePoly& a, const DensePoly& b)
{
    if (a.is_zero() || b.is_zero())
        return {};
    std::vector<Rational> v(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        if (a.coeffs_[i] == 0)
            continue;
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
            v[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return DensePoly(std::move(v));
}

DensePoly operator*(const Rational& c, const DensePoly& a)
{
    if (c == 0)
        return {};
    DensePoly r = a;
    for (auto& x : r.coeffs_)
        x *= c;
    return r;
}

std::pair<DensePoly, DensePoly> divmod(const DensePoly& a, const DensePoly& b)
{
    if (b.is_zero())
        throw std::domain_error("polynomial division by zero");
    if (a.degree() < b.degree())
        return {DensePoly(), a};
    std::vector<Rational> rem = a.coeffs();
    const auto& bc = b.coeffs();
    const std::size_t db = bc.size() - 1;
    std::vector<Rational> quo(rem.size() - db);
    const Rational inv_lead = 1 / bc.back();
    for (std::size_t k = quo.size(); k-- > 0;) {
        Rational q = rem[k + db] * inv_lead;
        if (q == 0)
            continue;
        for (std::size_t j = 0; j <= db; ++j)
            rem[k + j] -= q * bc[j];
        quo[k] = q;
    }
    rem.resize(db);
    return {DensePoly(std::move(quo)), DensePoly(std::move(rem))};
}

DensePoly derivative(const DensePoly& f)
{
    if (f.degree() < 1)
        return {};
    std::vector<Rational> v(f.coeffs().size() - 1);
    for (std::size_t i = 1; i < f.coeffs().size(); ++i)
        v[i - 1] = f.coeffs()[i] * static_cast<unsigned long>(i);
    return DensePoly(std::move(v));
}

DensePoly monic(const DensePoly& f)
{
    if (f.is_zero())
        return f;
    return Rational(1 / f.leading()) * f;
}

DensePoly gcd(const DensePoly& a, const DensePoly& b)
{
    DensePoly x = a, y = b;
    while (!y.is_zero()) {
        DensePoly r = divmod(x, y).second;
        x = std::move(y);
        // Keep the remainder sequence monic so coefficient growth stays tame.
        y = monic(r);
    }
    return monic(x);
}

DensePoly exact_div(const DensePoly& a, const DensePoly& b)
{
    auto [q, r] = divmod(a, b);
    if (!r.is_zero())
        throw std::domain_error("inexact polynomial division");
    return q;
}

int compare(const DensePoly& a, const DensePoly& b)
{
    if (a.degree() != b.degree())
        return a.degree() < b.degree() ? -1 : 1;
    for (std::size_t i = a.coeffs().size(); i-- > 0;) {
        const int c = cmp(a.coeffs()[i], b.coeffs()[i]);
        if (c != 0)
            return c < 0 ? -1 : 1;
    }
    return 0;
}

std::string to_string(const DensePoly& f, const std::string& var)
{
    if (f.is_zero())
        return "0";
    std::string out;
    for (std::size_t i = f.coeffs().size(); i-- > 0;) {
        const Rational& c = f.coeffs()[i];
        if (c == 0)
            continue;
        const bool neg = c < 0;
        const Rational mag = abs(c);
        if (out.empty())
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        const bool show_coeff = i == 0 || mag != 1;
        if (show_coeff)
            out += to_string(mag);
        if (i > 0) {
            if (show_coeff)
                out += "*";
            out += var;
            if (i > 1)
                out += "^" + std::to_string(i);
        }
    }
    return out;
}

ValuedPoly::ValuedPoly(Prime prime, std::size_t degree, std::vector<Entry> entries)
    : prime_(prime), degree_(degree)
{
    for (auto& e : entries) {
        if (!entries_.empty() && e.index <= entries_.back().index)
            throw std::invalid_argument("valued polynomial indices must strictly increase");
        if (e.index > degree)
            throw std::invalid_argument("valued polynomial index exceeds degree");
        // Omitted only after the ordering check so duplicates are still caught.
        if (e.val.is_finite())
            entries_.push_back(std::move(e));
    }
    if (entries_.empty() || entries_.back().index != degree)
        throw std::invalid_argument("valued polynomial needs a finite entry at its degree");
}

ExtVal ValuedPoly::at(std::size_t i) const
{
    auto it = std::lower_bound(entries_.begin(), entries_.end(), i,
                               [](const Entry& e, std::size_t k) { return e.index < k; });
    if (it != entries_.end() && it->index == i)
        return it->val;
    return ExtVal::infinity();
}

DensePoly from_roots(const RootSpec& spec, const Rational& leading)
{
    if (leading == 0)
        throw std::invalid_argument("from_roots: zero leading coefficient");
    // Multiplying out the linear factors one at a time builds the
    // elementary symmetric functions of the roots in place.
    std::vector<Rational> c{leading};
    for (const auto& r : spec.roots) {
        if (r.multiplicity == 0)
            throw std::invalid_argument("from_roots: multiplicity must be positive");
        for (std::size_t m = 0; m < r.multiplicity; ++m) {
            c.emplace_back(0);
            for (std::size_t i = c.size() - 1; i > 0; --i)
                c[i] = c[i - 1] - r.value * c[i];
            c[0] = -r.value * c[0];
        }
    }
    return DensePoly(std::move(c));
}

ValuedPoly coefficient_valuations(const DensePoly& poly, const Prime& p)
{
    if (poly.is_zero())
        throw std::invalid_argument("coefficient_valuations of the zero polynomial");
    std::vector<ValuedPoly::Entry> entries;
    for (std::size_t i = 0; i < poly.coeffs().size(); ++i)
        if (poly.coeffs()[i] != 0)
            entries.push_back({i, val_p(poly.coeffs()[i], p)});
    return ValuedPoly(p, static_cast<std::size_t>(poly.degree()), std::move(entries));
}

bool divides(const DensePoly& f, const DensePoly& g)
{
    if (f.is_zero())
        throw std::invalid_argument("divides: zero divisor");
    return divmod(g, f).second.is_zero();
}

DensePoly squarefree_part(const DensePoly& f)
{
    if (f.is_zero())
        throw std::invalid_argument("squarefree_part of the zero polynomial");
    return monic(exact_div(f, gcd(f, derivative(f))));
}

} // namespace nlb
