// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "nlb/certificates.hpp"
#include "nlb/families.hpp"
#include "nlb/json_io.hpp"
#include "nlb/newton.hpp"
#include "nlb/trees.hpp"
#include "oracles.hpp"

using namespace nlb;

namespace {

struct Check {
    std::ostringstream why;
    bool ok = true;

    template <typename... A>
    bool expect(bool cond, const A&... msg)
    {
        if (!cond && ok) {
            ok = false;
            (why << ... << msg);
        }
        return cond;
    }
};

Integer pow2(unsigned long e)
{
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
    return r;
}

// ---------------------------------------------------------------- 1

void random_root_profiles(Check& c)
{
    std::mt19937_64 rng(1000);
    std::uniform_int_distribution<int> degree(1, 10), mult(1, 3);
    std::bernoulli_distribution zero(0.08);
    const Prime two(2);
    for (int iter = 0; iter < 1000 && c.ok; ++iter) {
        const int n = degree(rng);
        RootSpec spec;
        std::map<Rational, std::size_t, std::greater<>> want;
        std::size_t zeros = 0;
        for (int deg = 0; deg < n;) {
            const auto m = std::min(mult(rng), n - deg);
            const Rational r = zero(rng) ? Rational(0) : oracle::random_two_adic(rng, -20, 20, 99);
            spec.roots.push_back({r, static_cast<std::size_t>(m)});
            if (r == 0)
                zeros += static_cast<std::size_t>(m);
            else
                want[Rational(oracle::valuation(r, 2))] += static_cast<std::size_t>(m);
            deg += m;
        }
        const RootProfile got = root_valuation_profile(coefficient_valuations(from_roots(spec, Rational(1)), two));
        std::map<Rational, std::size_t, std::greater<>> have;
        for (const auto& e : got.entries)
            have[e.valuation] += e.multiplicity;
        c.expect(have == want && got.zero_root_multiplicity == zeros, "polynomial ", iter, ": profile mismatch");
    }
}

// ---------------------------------------------------------------- 2

void q_min_valuation(Check& c)
{
    const Prime two(2);
    for (unsigned d = 1; d <= 16; ++d) {
        const FamilyId q(FamilyId::Kind::Q, d);
        const Rational want = -Rational(pow2(d - 1));
        const RootProfile prof = root_valuation_profile(gen_valued(q));
        c.expect(prof.entries.back().valuation == want, "q:", d, " min root valuation ", to_string(prof.entries.back().valuation));
        // Through the literal coefficients as well, where they fit.
        if (d <= 12) {
            const RootProfile exact = root_valuation_profile(coefficient_valuations(gen_exact(q), two));
            c.expect(exact.entries.back().valuation == want, "q:", d, " exact form disagrees");
        }
    }
}

// ---------------------------------------------------------------- 3

void p_profile(Check& c)
{
    for (unsigned d = 1; d <= 12; ++d) {
        const RootProfile prof = root_valuation_profile(gen_valued(FamilyId(FamilyId::Kind::P, d)));
        if (!c.expect(prof.entries.size() == d && prof.zero_root_multiplicity == 0, "p:", d, " has ",
                      prof.entries.size(), " distinct root valuations"))
            return;
        for (unsigned i = 1; i <= d; ++i) {
            const Rational want(pow2(d * (d - i)) * (pow2(d) - 1));
            c.expect(prof.entries[i - 1].valuation == want && prof.entries[i - 1].multiplicity == 1, "p:", d,
                     " root ", i, " valuation ", to_string(prof.entries[i - 1].valuation));
            if (i < d)
                c.expect(prof.entries[i - 1].valuation / prof.entries[i].valuation == Rational(pow2(d)), "p:", d,
                         " ratio at ", i);
        }
    }
}

// ---------------------------------------------------------------- 4

void lemma_on_p(Check& c)
{
    for (unsigned d = 2; d <= 12; ++d) {
        const RootProfile prof = root_valuation_profile(gen_valued(FamilyId(FamilyId::Kind::P, d)));
        std::vector<std::size_t> idx(d);
        for (std::size_t k = 0; k < d; ++k)
            idx[k] = k;
        const auto cond = check_lemma_conditions(prof, idx);
        c.expect(cond.condition1 && cond.condition2, "p:", d, " conditions ", cond.condition1, ",", cond.condition2);
        // Direct evaluation: smallest root valuation >= 1 and each ratio >= 2.
        c.expect(prof.entries.back().valuation >= 1, "p:", d, " smallest root valuation below 1");
        for (std::size_t k = 1; k < d; ++k)
            c.expect(prof.entries[k - 1].valuation >= 2 * prof.entries[k].valuation, "p:", d, " doubling at ", k);
    }

    c.expect(lemma_bound(116, Integer(2), LemmaConstant::c28).ceiling() == 2, "d=116 D=2 c=28");
    c.expect(lemma_bound(88, Integer(2), LemmaConstant::c21).ceiling() == 2, "d=88 D=2 c=21");
    // Floating-point cross-check of the ceiling away from exact squares.
    const std::vector<std::uint64_t> Ds{2, 3, 4, 5, 16, 1000, 65536};
    for (std::uint64_t d = 1; d <= 2000; d += 37) {
        for (std::size_t k = 0; k < Ds.size(); ++k) {
            const Integer D(static_cast<unsigned long>(Ds[k]));
            for (auto cst : {LemmaConstant::c28, LemmaConstant::c21}) {
                const auto b = lemma_bound(d, D, cst);
                const double x = std::sqrt(static_cast<double>(d) /
                                           (static_cast<double>(cst) * std::log2(static_cast<double>(Ds[k])) + 1));
                if (std::abs(x - std::round(x)) > 1e-6)
                    c.expect(b.ceiling() == Integer(static_cast<unsigned long>(std::max(1.0, std::ceil(x)))),
                             "ceiling for d=", d, " D=", Ds[k]);
            }
            const auto b28 = lemma_bound(d, D, LemmaConstant::c28);
            c.expect(lemma_bound(d, D, LemmaConstant::c21).ceiling() >= b28.ceiling(), "21 weaker than 28 at d=", d);
            c.expect(lemma_bound(d + 37, D, LemmaConstant::c28).ceiling() >= b28.ceiling(), "not monotone in d at ", d);
            if (k + 1 < Ds.size())
                c.expect(lemma_bound(d, Integer(static_cast<unsigned long>(Ds[k + 1])), LemmaConstant::c28).ceiling() <=
                             b28.ceiling(),
                         "not antitone in D at d=", d);
        }
    }
}

// ---------------------------------------------------------------- 5

void threshold_formulas(Check& c)
{
    for (std::uint64_t T = 1; T <= 10; ++T) {
        std::uint64_t u = 1;
        while (!(u > 2 + T * T))
            ++u;
        std::uint64_t n = 1;
        while (!(n > 28 * (T + 1) * T * T))
            ++n;
        c.expect(uniform_threshold(T) == T * T + 3 && uniform_threshold(T) == u, "uniform T=", T);
        c.expect(nonuniform_threshold(T) == 28 * T * T * (T + 1) + 1 && nonuniform_threshold(T) == n, "nonuniform T=", T);
        c.expect(uniform_threshold_holds(T, u) && !uniform_threshold_holds(T, u - 1), "uniform predicate T=", T);
        c.expect(nonuniform_threshold_holds(T, n) && !nonuniform_threshold_holds(T, n - 1), "nonuniform predicate T=", T);
    }
}

// ---------------------------------------------------------------- 6

void subset_sum_suite(Check& c)
{
    const GapSequence corner({Rational(16), Rational(4), Rational(1)});
    const auto a = subset_sums_distinct(corner);
    c.expect(a.count == 8 && a.distinct, "(16,4,1) gave ", a.count);

    const GapSequence g({Rational(22), Rational(13), Rational(9), Rational(8)});
    const auto b = subset_sums_distinct(g);
    c.expect(gap_condition(g), "gap condition fails for (22,13,9,8)");
    c.expect(b.count == 15, "(22,13,9,8) gave ", b.count, " distinct sums (brute force: ",
             oracle::distinct_subset_sums(g.values()), "), expected 15");
}

// ---------------------------------------------------------------- 7

// Random tree over registers x, 0, 1 with ring operations only.
ComputationTree::NodeId random_subtree(ComputationTree& t, std::mt19937_64& rng, unsigned depth, unsigned regs)
{
    const int k = depth == 0 ? 0 : std::uniform_int_distribution<int>(0, 4)(rng);
    if (k == 0)
        return t.add_leaf(std::bernoulli_distribution(0.5)(rng));
    std::uniform_int_distribution<unsigned> pick(0, regs - 1);
    if (k <= 2) {
        const auto z = random_subtree(t, rng, depth - 1, regs);
        const auto nz = random_subtree(t, rng, depth - 1, regs);
        return t.add_branch(pick(rng), z, nz);
    }
    static const Op ops[] = {Op::add, Op::sub, Op::mul};
    const Op op = ops[std::uniform_int_distribution<int>(0, 2)(rng)];
    const auto a = pick(rng), b = pick(rng);
    const auto next = random_subtree(t, rng, depth - 1, regs + 1);
    return t.add_assign(regs, ComputationTree::ValueDef::make_compute(op, a, b), next);
}

bool generic_bounds_hold(const DensePoly& g, unsigned T)
{
    const Integer bound = pow2(T * T);
    if (Integer(g.degree()) > bound)
        return false;
    for (const auto& coef : g.coeffs()) {
        if (coef.get_den() != 1)
            return false;
        if (coef != 0 && Integer(oracle::valuation(coef, 2)) > bound)
            return false;
    }
    return true;
}

void generic_path_invariants(Check& c)
{
    // Unpruned random trees, checked directly.
    std::mt19937_64 rng(77);
    for (int iter = 0; iter < 100000 && c.ok; ++iter) {
        ComputationTree t;
        auto body = random_subtree(t, rng, 1 + static_cast<unsigned>(iter % 4), 3);
        body = t.add_assign(2, ComputationTree::ValueDef::make_constant(Rational(1)), body);
        body = t.add_assign(1, ComputationTree::ValueDef::make_constant(Rational(0)), body);
        body = t.add_assign(0, ComputationTree::ValueDef::make_input(), body);
        t.set_root(body);
        const PathPolynomial pp = trace_generic_path(t);
        c.expect(pp.depth_total <= t.depth() && generic_bounds_hold(pp.g, t.depth()), "random tree breaks the bounds:\n",
                 t.to_text());
    }

    for (unsigned depth = 1; depth <= 4; ++depth) {
        EnumerationConfig cfg;
        cfg.max_depth = depth;
        cfg.workers = 4;
        const auto r = enumerate_and_refute(DensePoly::variable(), cfg);
        c.expect(r.conclusive, "depth ", depth, " enumeration inconclusive");
        c.expect(r.bound_violations == 0, "depth ", depth, ": ", r.bound_violations, " trees break the bounds");
        c.expect(Integer(r.max_generic_degree) <= pow2(depth * depth), "depth ", depth, " max degree ",
                 r.max_generic_degree);
        std::printf("      depth %u: %llu trees in %llu classes, max deg g = %u\n", depth,
                    static_cast<unsigned long long>(r.trees_examined), static_cast<unsigned long long>(r.classes_examined),
                    r.max_generic_degree);
    }
}

// ---------------------------------------------------------------- 8

DensePoly P(std::initializer_list<long> coeffs)
{
    std::vector<Rational> v;
    for (long x : coeffs)
        v.emplace_back(x);
    return DensePoly(std::move(v));
}

void refutation_controls(Check& c)
{
    EnumerationConfig cfg;
    cfg.max_depth = 4;
    for (const DensePoly& t : {P({0, -1, 1}), P({-2, 0, 1})}) {
        const auto r = enumerate_and_refute(t, cfg);
        c.expect(r.conclusive && r.deciders > 0 && r.witness, "no decider for ", to_string(t));
        if (r.witness)
            c.expect(decides(*r.witness, t), "witness for ", to_string(t), " does not decide it");
        c.expect(r.deciders_failing_divisibility == 0, "decider whose g misses ", to_string(t));
    }

    const DensePoly q2 = gen_exact(FamilyId::parse("q:2"));
    // 8x^2 + 2x + 1 has no rational root, so it is irreducible over Q and a
    // generic path can only vanish on its zeros through a multiple of it.
    c.expect(oracle::rational_roots(q2).empty(), "q:2 has a rational root");
    cfg.max_depth = 3;
    std::string first;
    for (unsigned workers : {1U, 2U, 4U, 8U}) {
        cfg.workers = workers;
        const auto r = enumerate_and_refute(q2, cfg);
        c.expect(r.refuted(), "q:2 not refuted with ", workers, " workers");
        c.expect(r.divisibility_holds == 0 && r.divisibility_fails == r.trees_examined,
                 "some g divisible by q:2's squarefree part");
        const std::string dump = to_json(r).dump();
        if (first.empty()) {
            first = dump;
            std::printf("      q:2 depth 3: %llu trees, all failing divisibility\n",
                        static_cast<unsigned long long>(r.trees_examined));
        }
        c.expect(dump == first, "report differs with ", workers, " workers");
    }
}

} // namespace

int main()
{
    struct Criterion {
        const char* name;
        std::function<void(Check&)> run;
    };
    const std::vector<Criterion> criteria{
        {"root profile equals prescribed valuations (1000 random polynomials)", random_root_profiles},
        {"q^d minimum root valuation is -2^(d-1), d = 1..16", q_min_valuation},
        {"p^d root valuations 2^(d(d-i))(2^d-1), ratio 2^d, d = 1..12", p_profile},
        {"lemma conditions on p^d and lemma bound values", lemma_on_p},
        {"threshold formulas, T = 1..10", threshold_formulas},
        {"subset sums of (16,4,1) and (22,13,9,8)", subset_sum_suite},
        {"generic-path bounds over all trees of depth <= 4", generic_path_invariants},
        {"deciders for x^2-x and x^2-2, none for q^2 at depth 3", refutation_controls},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Check c;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            criteria[k].run(c);
        } catch (const std::exception& e) {
            c.expect(false, "exception: ", e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %zu  %s  (%.2f s)%s%s\n", c.ok ? "PASS" : "FAIL", k + 1, criteria[k].name, secs,
                    c.ok ? "" : "\n      ", c.why.str().c_str());
        std::fflush(stdout);
        if (!c.ok)
            ++failed;
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}
