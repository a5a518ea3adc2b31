#include "nlb/families.hpp"

#include <charconv>

namespace nlb {

namespace {

Integer pow2(unsigned long e)
{
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
    return r;
}

Integer pow2(const Integer& e)
{
    if (!e.fits_ulong_p())
        throw std::overflow_error("exponent too large to materialize");
    return pow2(e.get_ui());
}

void check_budget(const FamilyId& id, std::uint64_t budget)
{
    const Integer need = required_bits(id);
    if (need > Integer(std::to_string(budget), 10))
        throw InfeasibleRepresentation(need, Integer(std::to_string(budget), 10));
}

} // namespace

FamilyId::FamilyId(Kind k, unsigned d_) : kind(k), d(d_)
{
    if (d == 0)
        throw std::invalid_argument("family parameter d must be >= 1");
}

FamilyId FamilyId::parse(std::string_view text)
{
    if (text.size() < 3 || text[1] != ':')
        throw std::invalid_argument("family spec must look like 'q:5', got '" + std::string(text) + "'");
    Kind k;
    switch (text[0]) {
    case 'x': case 'X': k = Kind::X; break;
    case 'p': case 'P': k = Kind::P; break;
    case 'q': case 'Q': k = Kind::Q; break;
    default:
        throw std::invalid_argument("unknown family '" + std::string(text.substr(0, 1)) + "'");
    }
    unsigned d = 0;
    const auto digits = text.substr(2);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), d);
    if (ec != std::errc() || ptr != digits.data() + digits.size())
        throw std::invalid_argument("bad family parameter in '" + std::string(text) + "'");
    return FamilyId(k, d);
}

std::string FamilyId::to_string() const
{
    const char c = kind == Kind::X ? 'x' : (kind == Kind::P ? 'p' : 'q');
    return std::string(1, c) + ":" + std::to_string(d);
}

InfeasibleRepresentation::InfeasibleRepresentation(Integer required_bits, Integer budget)
    : std::runtime_error("representation infeasible: needs " + nlb::to_string(required_bits) +
                         " bits, budget is " + nlb::to_string(budget) + " bits"),
      required_(std::move(required_bits))
{
}

Integer required_bits(const FamilyId& id)
{
    switch (id.kind) {
    case FamilyId::Kind::Q:
        return pow2(static_cast<unsigned long>(id.d));
    case FamilyId::Kind::P:
    case FamilyId::Kind::X:
        return pow2(static_cast<unsigned long>(id.d) * id.d);
    }
    throw std::logic_error("unreachable");
}

ValuedPoly gen_valued(const FamilyId& id)
{
    const unsigned long d = id.d;
    std::vector<ValuedPoly::Entry> entries;
    switch (id.kind) {
    case FamilyId::Kind::Q:
        for (unsigned long i = 0; i <= d; ++i)
            entries.push_back({i, ExtVal(Rational(pow2(i)))});
        return ValuedPoly(Prime(2), d, std::move(entries));
    case FamilyId::Kind::P:
        for (unsigned long i = 0; i <= d; ++i)
            entries.push_back({i, ExtVal(Rational(pow2(d * (d - i))))});
        return ValuedPoly(Prime(2), d, std::move(entries));
    case FamilyId::Kind::X: {
        // Roots 2^(2^(d i)) have pairwise distinct valuations 2^(d i), so every
        // elementary symmetric function has a unique minimal-valuation term:
        // v(g_k) is the sum of the (D - k) smallest root valuations.
        const unsigned long degree = d + 1;
        std::vector<Integer> root_vals; // ascending
        for (unsigned long i = 0; i <= d; ++i)
            root_vals.push_back(pow2(d * i));
        entries.resize(degree + 1);
        Integer acc = 0;
        for (unsigned long k = degree + 1; k-- > 0;) {
            entries[k] = {k, ExtVal(Rational(acc))};
            if (k > 0)
                acc += root_vals[degree - k];
        }
        return ValuedPoly(Prime(2), degree, std::move(entries));
    }
    }
    throw std::logic_error("unreachable");
}

std::vector<Rational> x_points(unsigned d, std::uint64_t bit_budget)
{
    const FamilyId id(FamilyId::Kind::X, d);
    check_budget(id, bit_budget);
    std::vector<Rational> pts;
    for (unsigned long i = 0; i <= d; ++i)
        pts.emplace_back(pow2(pow2(static_cast<unsigned long>(d) * i)));
    return pts;
}

DensePoly gen_exact(const FamilyId& id, std::uint64_t bit_budget)
{
    check_budget(id, bit_budget);
    const unsigned long d = id.d;
    std::vector<Rational> coeffs;
    switch (id.kind) {
    case FamilyId::Kind::Q:
        for (unsigned long i = 0; i <= d; ++i)
            coeffs.emplace_back(pow2(pow2(i)));
        return DensePoly(std::move(coeffs));
    case FamilyId::Kind::P:
        for (unsigned long i = 0; i <= d; ++i)
            coeffs.emplace_back(pow2(pow2(d * (d - i))));
        return DensePoly(std::move(coeffs));
    case FamilyId::Kind::X: {
        RootSpec spec;
        for (auto& x : x_points(id.d, bit_budget))
            spec.roots.push_back({std::move(x), 1});
        return from_roots(spec, Rational(1));
    }
    }
    throw std::logic_error("unreachable");
}

} // namespace nlb
