#include "nlb/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

namespace nlb {

namespace {

Integer to_integer(std::uint64_t v) { return Integer(std::to_string(v), 10); }

template <typename T>
std::vector<T> partition_sums(const std::vector<T>& vals, std::size_t low_bits, std::uint64_t high)
{
    // Subsets whose top bits equal `high`, enumerated over the low bits.
    T base = 0;
    for (std::size_t k = low_bits; k < vals.size(); ++k)
        if ((high >> (k - low_bits)) & 1U)
            base += vals[k];
    std::vector<T> sums{base};
    sums.reserve(std::size_t{1} << low_bits);
    for (std::size_t k = 0; k < low_bits; ++k) {
        const std::size_t n = sums.size();
        for (std::size_t i = 0; i < n; ++i)
            sums.push_back(sums[i] + vals[k]);
    }
    std::sort(sums.begin(), sums.end());
    sums.erase(std::unique(sums.begin(), sums.end()), sums.end());
    return sums;
}

template <typename T>
std::uint64_t count_distinct(const std::vector<T>& vals, unsigned workers)
{
    std::size_t high_bits = 0;
    while ((1U << high_bits) < workers && high_bits < vals.size())
        ++high_bits;
    const std::size_t low_bits = vals.size() - high_bits;
    const std::size_t parts = std::size_t{1} << high_bits;

    std::vector<std::vector<T>> results(parts);
    if (parts == 1) {
        results[0] = partition_sums(vals, low_bits, 0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t part = w; part < parts; part += workers)
                    results[part] = partition_sums(vals, low_bits, part);
            });
    }

    std::vector<T> all;
    for (auto& r : results) {
        const auto mid = static_cast<std::ptrdiff_t>(all.size());
        all.insert(all.end(), r.begin(), r.end());
        std::inplace_merge(all.begin(), all.begin() + mid, all.end());
        all.erase(std::unique(all.begin(), all.end()), all.end());
        r.clear();
        r.shrink_to_fit();
    }
    return all.size();
}

std::uint64_t count_distinct_subset_sums(std::span<const Rational> vals, unsigned workers, std::size_t budget)
{
    if (vals.size() > budget || budget > 62)
        throw std::length_error("subset enumeration over " + std::to_string(vals.size()) +
                                " values exceeds budget " + std::to_string(budget));
    if (workers == 0)
        workers = 1;

    // Clear denominators so sums are integer sums.
    Integer den = 1;
    for (const auto& v : vals)
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den().get_mpz_t());
    std::vector<Integer> ints;
    Integer abs_total = 0;
    for (const auto& v : vals) {
        ints.push_back(v.get_num() * (den / v.get_den()));
        abs_total += abs(ints.back());
    }

    if (abs_total < Integer("4611686018427387904", 10)) { // 2^62
        std::vector<std::int64_t> small;
        for (const auto& z : ints)
            small.push_back(z.get_si());
        return count_distinct(small, workers);
    }
    return count_distinct(ints, workers);
}

// floor(sqrt(q) * 2^bits), exactly.
Integer scaled_isqrt(const Rational& q, unsigned bits)
{
    Integer num = q.get_num();
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), 2 * bits);
    Integer x = num / q.get_den();
    Integer r;
    mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
    return r;
}

} // namespace

LemmaConstant parse_lemma_constant(unsigned c)
{
    if (c == 28)
        return LemmaConstant::c28;
    if (c == 21)
        return LemmaConstant::c21;
    throw std::invalid_argument("lemma constant must be 28 or 21, got " + std::to_string(c));
}

LemmaConditions check_lemma_conditions(const RootProfile& profile, std::span<const std::size_t> subsequence)
{
    const std::vector<ExtVal> roots = profile.ordered_roots();
    for (std::size_t k = 0; k < subsequence.size(); ++k) {
        if (subsequence[k] >= roots.size())
            throw std::out_of_range("subsequence index " + std::to_string(subsequence[k]) + " out of range (" +
                                    std::to_string(roots.size()) + " roots)");
        if (k > 0 && subsequence[k] <= subsequence[k - 1])
            throw std::invalid_argument("subsequence indices must strictly increase");
    }
    LemmaConditions out;
    if (subsequence.empty())
        return out;
    out.condition1 = roots[subsequence.back()] >= ExtVal(1);
    out.condition2 = true;
    for (std::size_t k = 0; k + 1 < subsequence.size(); ++k) {
        const Integer step = to_integer(2 * (subsequence[k + 1] - subsequence[k]));
        if (roots[subsequence[k]] < step * roots[subsequence[k + 1]]) {
            out.condition2 = false;
            break;
        }
    }
    return out;
}

LemmaBound::LemmaBound(std::uint64_t d, Integer D, LemmaConstant constant) : d_(d), D_(std::move(D)), c_(constant)
{
    if (D_ < 1)
        throw std::invalid_argument("lemma bound needs D >= 1");
}

std::optional<unsigned long> LemmaBound::exact_log2() const
{
    if (mpz_popcount(D_.get_mpz_t()) != 1)
        return std::nullopt;
    return mpz_scan1(D_.get_mpz_t(), 0);
}

bool LemmaBound::satisfied_by(const Integer& L) const
{
    if (L < 0)
        return false;
    const Integer c = static_cast<unsigned long>(c_);
    const Integer L2 = L * L;
    const Integer d = to_integer(d_);
    if (auto k = exact_log2())
        return L2 * (c * Integer(*k) + 1) >= d;

    // L^2 (c log2 D + 1) >= d  <=>  c L^2 log2 D >= d - L^2  <=>  D^(c L^2) >= 2^(d - L^2)
    const Integer rhs_exp = d - L2;
    if (rhs_exp <= 0)
        return true;
    const Integer lhs_exp = c * L2;
    // log2 D > 1 here (D >= 3), so lhs_exp >= rhs_exp already settles it.
    if (lhs_exp >= rhs_exp)
        return true;
    Integer lhs;
    mpz_pow_ui(lhs.get_mpz_t(), D_.get_mpz_t(), lhs_exp.get_ui());
    Integer rhs;
    mpz_ui_pow_ui(rhs.get_mpz_t(), 2, rhs_exp.get_ui());
    return lhs >= rhs;
}

Integer LemmaBound::ceiling() const
{
    Integer lo = 0, hi = 1;
    while (!satisfied_by(hi))
        hi *= 2;
    while (hi - lo > 1) {
        Integer mid = (lo + hi) / 2;
        if (satisfied_by(mid))
            hi = mid;
        else
            lo = mid;
    }
    return satisfied_by(lo) ? lo : hi;
}

Rational LemmaBound::approximation() const
{
    const unsigned long c = static_cast<unsigned long>(c_);
    if (auto k = exact_log2()) {
        const Rational q(to_integer(d_), Integer(c * *k + 1));
        constexpr unsigned bits = 32;
        Integer den;
        mpz_ui_pow_ui(den.get_mpz_t(), 2, bits);
        Rational r(scaled_isqrt(q, bits), den);
        r.canonicalize();
        return r;
    }
    long exp2 = 0;
    const double mant = mpz_get_d_2exp(&exp2, D_.get_mpz_t());
    const double log2D = std::log2(mant) + static_cast<double>(exp2);
    const double value = std::sqrt(static_cast<double>(d_) / (static_cast<double>(c) * log2D + 1.0));
    const auto scaled = static_cast<long>(std::floor(value * 1e9));
    Rational r(scaled, 1000000000L);
    r.canonicalize();
    return r;
}

LemmaBound lemma_bound(std::uint64_t d, const Integer& D, LemmaConstant constant)
{
    return LemmaBound(d, D, constant);
}

GapSequence::GapSequence(std::vector<Rational> values) : values_(std::move(values))
{
    for (std::size_t j = 1; j < values_.size(); ++j)
        if (!(values_[j] < values_[j - 1]))
            throw std::invalid_argument("gap sequence must be strictly decreasing");
}

SubsetSumResult subset_sums_distinct(const GapSequence& g, unsigned workers, std::size_t budget)
{
    SubsetSumResult r;
    r.count = count_distinct_subset_sums(g.values(), workers, budget);
    r.distinct = r.count == (std::uint64_t{1} << g.size());
    return r;
}

bool gap_condition(const GapSequence& g)
{
    const auto& v = g.values();
    for (std::size_t j = 1; j + 1 < v.size(); ++j)
        if (!(2 * abs(v[j + 1] - v[j]) < abs(v[j] - v[j - 1])))
            return false;
    return true;
}

std::uint64_t mu_lower_count(const ValuedPoly& vp, std::size_t subset_budget, unsigned workers)
{
    std::vector<Rational> vals;
    for (const auto& e : vp.entries())
        vals.push_back(e.val.value());
    return count_distinct_subset_sums(vals, workers, subset_budget);
}

std::uint64_t uniform_threshold(std::uint64_t T) { return T * T + 3; }

bool uniform_threshold_holds(std::uint64_t T, std::uint64_t d) { return d > 2 + T * T; }

std::uint64_t nonuniform_threshold(std::uint64_t T, LemmaConstant constant)
{
    return static_cast<std::uint64_t>(constant) * T * T * (T + 1) + 1;
}

bool nonuniform_threshold_holds(std::uint64_t T, std::uint64_t d, LemmaConstant constant)
{
    return d > static_cast<std::uint64_t>(constant) * T * T * (T + 1);
}

Rational root_valuation_magnitude_bound(const ValuedPoly& vp, std::size_t i, std::size_t j)
{
    return abs(vp.at(i).value()) + abs(vp.at(j).value());
}

LemmaCertificate make_certificate(const RootProfile& profile, std::vector<std::size_t> subsequence,
                                  const Integer& D, LemmaConstant constant)
{
    LemmaCertificate cert;
    cert.d = subsequence.size();
    cert.D = D;
    cert.constant = constant;
    cert.conditions = check_lemma_conditions(profile, subsequence);
    cert.subsequence_indices = std::move(subsequence);
    if (cert.conditions.both()) {
        const LemmaBound b(cert.d, D, constant);
        cert.bound_approx = b.approximation();
        cert.bound_ceiling = b.ceiling();
    }
    return cert;
}

FamilyCertificate certify_family(const FamilyId& family, std::uint64_t T, LemmaConstant constant, unsigned workers)
{
    const ValuedPoly vp = gen_valued(family);
    RootProfile profile = root_valuation_profile(vp);

    std::vector<std::size_t> subsequence;
    for (std::size_t i = profile.zero_root_multiplicity; i < profile.degree(); ++i)
        subsequence.push_back(i);

    if (T >= 64)
        throw std::out_of_range("T too large for D = 2^T");
    Integer D;
    mpz_ui_pow_ui(D.get_mpz_t(), 2, T);

    FamilyCertificate out{family, T, make_certificate(profile, subsequence, D, constant), std::move(profile)};

    std::vector<Rational> G;
    bool finite = true;
    for (std::size_t i : subsequence) {
        const ExtVal v = vp.at(i);
        if (v.is_infinite()) {
            finite = false;
            break;
        }
        G.push_back(v.value());
    }
    bool decreasing = finite;
    for (std::size_t j = 1; decreasing && j < G.size(); ++j)
        decreasing = G[j] < G[j - 1];
    if (decreasing) {
        out.gaps.emplace(std::move(G));
        out.gap_condition_holds = gap_condition(*out.gaps);
        if (out.gaps->size() <= default_subset_budget)
            out.subset_sums = subset_sums_distinct(*out.gaps, workers);
        out.gap_without_distinct = *out.gap_condition_holds && out.subset_sums && !out.subset_sums->distinct;
    }
    if (vp.entries().size() <= default_subset_budget)
        out.mu_count = mu_lower_count(vp, default_subset_budget, workers);

    if (family.kind == FamilyId::Kind::Q)
        out.uniform_threshold = uniform_threshold(T);
    else
        out.nonuniform_threshold = nonuniform_threshold(T, constant);
    return out;
}

} // namespace nlb
