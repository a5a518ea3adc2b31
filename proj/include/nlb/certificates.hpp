#ifndef NLB_CERTIFICATES_HPP
#define NLB_CERTIFICATES_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "nlb/families.hpp"
#include "nlb/newton.hpp"

namespace nlb {

/// The constant in the evaluation lower bound L >= sqrt(d / (c log2 D + 1)).
/// 28 is the general form; 21 is the sharper variant.
enum class LemmaConstant : unsigned { c28 = 28, c21 = 21 };

LemmaConstant parse_lemma_constant(unsigned c);

struct LemmaConditions {
    /// Last selected root has valuation >= 1.
    bool condition1 = false;
    /// v(z_j) >= 2 (i_{j+1} - i_j) v(z_{j+1}) for every consecutive pair.
    bool condition2 = false;

    bool both() const noexcept { return condition1 && condition2; }
};

/// subsequence holds strictly increasing positions into profile.ordered_roots().
LemmaConditions check_lemma_conditions(const RootProfile& profile, std::span<const std::size_t> subsequence);

/// Exact decision object for the bound sqrt(d / (c log2 D + 1)).
class LemmaBound {
public:
    LemmaBound(std::uint64_t d, Integer D, LemmaConstant constant);

    std::uint64_t d() const noexcept { return d_; }
    const Integer& D() const noexcept { return D_; }
    LemmaConstant constant() const noexcept { return c_; }

    /// True iff L >= sqrt(d / (c log2 D + 1)), decided with integer arithmetic only.
    bool satisfied_by(const Integer& L) const;
    /// Least integer L with satisfied_by(L).
    Integer ceiling() const;
    /// Lower rational approximation of the real bound. Exact to 2^-32 when D
    /// is a power of two; otherwise a floating estimate rounded to 1e-9.
    Rational approximation() const;
    /// log2 D when D is a power of two.
    std::optional<unsigned long> exact_log2() const;

private:
    std::uint64_t d_;
    Integer D_;
    LemmaConstant c_;
};

LemmaBound lemma_bound(std::uint64_t d, const Integer& D, LemmaConstant constant = LemmaConstant::c28);

/// Strictly decreasing exact rationals G_0 > G_1 > ...
class GapSequence {
public:
    explicit GapSequence(std::vector<Rational> values);

    const std::vector<Rational>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

private:
    std::vector<Rational> values_;
};

inline constexpr std::size_t default_subset_budget = 24;

struct SubsetSumResult {
    std::uint64_t count = 0;
    bool distinct = false;
};

/// Brute force over all 2^n subsets. workers > 1 partitions the subsets;
/// the result does not depend on the worker count.
SubsetSumResult subset_sums_distinct(const GapSequence& g, unsigned workers = 1,
                                     std::size_t budget = default_subset_budget);

/// |G_{j+1} - G_j| < 1/2 |G_j - G_{j-1}| for all interior j.
bool gap_condition(const GapSequence& g);

/// Number of distinct valuations of products of subsets of the nonzero coefficients.
std::uint64_t mu_lower_count(const ValuedPoly& vp, std::size_t subset_budget = default_subset_budget,
                             unsigned workers = 1);

/// Least d with d > 2 + T^2, i.e. 2^(1+T^2) < 2^(d-1).
std::uint64_t uniform_threshold(std::uint64_t T);
bool uniform_threshold_holds(std::uint64_t T, std::uint64_t d);
/// Least d with d > c T^2 (T + 1).
std::uint64_t nonuniform_threshold(std::uint64_t T, LemmaConstant constant = LemmaConstant::c28);
bool nonuniform_threshold_holds(std::uint64_t T, std::uint64_t d, LemmaConstant constant = LemmaConstant::c28);

/// Upper bound |v(g_i)| + |v(g_j)| on |v(zeta)| for a root valuation read
/// off the segment (i, j).
Rational root_valuation_magnitude_bound(const ValuedPoly& vp, std::size_t i, std::size_t j);

struct LemmaCertificate {
    std::uint64_t d = 0;
    Integer D;
    LemmaConstant constant = LemmaConstant::c28;
    std::vector<std::size_t> subsequence_indices;
    LemmaConditions conditions;
    /// Present only when both conditions hold.
    std::optional<Rational> bound_approx;
    std::optional<Integer> bound_ceiling;
};

LemmaCertificate make_certificate(const RootProfile& profile, std::vector<std::size_t> subsequence,
                                  const Integer& D, LemmaConstant constant);

/// Full check of a family against the machinery for a time bound T.
struct FamilyCertificate {
    FamilyId family;
    std::uint64_t T;
    LemmaCertificate lemma;
    RootProfile profile;
    /// G_j = v(g_{i_j}) over the subsequence, when all are finite.
    std::optional<GapSequence> gaps;
    std::optional<bool> gap_condition_holds;
    std::optional<SubsetSumResult> subset_sums;
    std::optional<std::uint64_t> mu_count;
    /// The gap condition holds yet the subset sums collide.
    bool gap_without_distinct = false;
    std::optional<std::uint64_t> uniform_threshold;
    std::optional<std::uint64_t> nonuniform_threshold;
};

/// Uses every nonzero root as the subsequence and D = 2^T.
FamilyCertificate certify_family(const FamilyId& family, std::uint64_t T, LemmaConstant constant,
                                 unsigned workers = 1);

} // namespace nlb

#endif
