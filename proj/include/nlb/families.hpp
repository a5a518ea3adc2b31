#ifndef NLB_FAMILIES_HPP
#define NLB_FAMILIES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nlb/poly.hpp"

namespace nlb {

/// The hard instances:
///   Q: q^d(t) = sum_{i=0}^d 2^(2^i) t^i
///   P: p^d(t) = sum_{i=0}^d 2^(2^(d(d-i))) t^i
///   X: the point set {2^(2^(d i)) : 0 <= i <= d} and its monic vanishing polynomial
struct FamilyId {
    enum class Kind { X, P, Q };

    Kind kind;
    unsigned d;

    FamilyId(Kind k, unsigned d_);

    /// Parses "q:5", "p:3", "x:2".
    static FamilyId parse(std::string_view text);
    std::string to_string() const;

    friend bool operator==(const FamilyId&, const FamilyId&) = default;
};

/// Raised when a literal coefficient or point would exceed the bit budget.
class InfeasibleRepresentation : public std::runtime_error {
public:
    InfeasibleRepresentation(Integer required_bits, Integer budget);

    const Integer& required_bits() const noexcept { return required_; }

private:
    Integer required_;
};

inline constexpr std::uint64_t default_bit_budget = std::uint64_t{1} << 20;

/// Valuation-only form at p = 2; never materializes the coefficients.
ValuedPoly gen_valued(const FamilyId& id);
/// Literal polynomial; throws InfeasibleRepresentation past the budget.
DensePoly gen_exact(const FamilyId& id, std::uint64_t bit_budget = default_bit_budget);
/// The d+1 points of X_d in ascending order.
std::vector<Rational> x_points(unsigned d, std::uint64_t bit_budget = default_bit_budget);

/// Largest exponent e such that 2^e appears literally in gen_exact(id).
Integer required_bits(const FamilyId& id);

} // namespace nlb

#endif
