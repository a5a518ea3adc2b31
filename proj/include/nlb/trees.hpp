#ifndef NLB_TREES_HPP
#define NLB_TREES_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nlb/poly.hpp"

namespace nlb {

enum class Op { add, sub, mul, div };

std::string_view op_name(Op op);
Op parse_op(std::string_view name);

/// Ordered, duplicate-free set of arithmetic operations.
class OpSet {
public:
    OpSet() = default;
    explicit OpSet(std::vector<Op> ops);
    /// "add,sub,mul[,div]"
    static OpSet parse(std::string_view list);
    static OpSet ring() { return OpSet({Op::add, Op::sub, Op::mul}); }

    const std::vector<Op>& ops() const noexcept { return ops_; }
    bool contains(Op op) const;
    std::string to_string() const;

private:
    std::vector<Op> ops_;
};

/// Thrown for trees that violate the IR rules or divide by the zero function.
class MalformedTree : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exact value of a tree register as a function of the input: num / den,
/// reduced, with monic denominator. Division-free values have den = 1.
struct RationalFunction {
    DensePoly num;
    DensePoly den = DensePoly::constant(Rational(1));

    static RationalFunction constant(const Rational& c);
    static RationalFunction input();

    bool is_zero() const noexcept { return num.is_zero(); }
    bool is_constant() const noexcept { return num.is_constant() && den.is_constant(); }

    friend bool operator==(const RationalFunction&, const RationalFunction&) = default;
};

/// Throws MalformedTree for division by the zero function.
RationalFunction apply(Op op, const RationalFunction& a, const RationalFunction& b);
int compare(const RationalFunction& a, const RationalFunction& b);

/// Subset of C that is either finite or cofinite and defined over Q.
/// Described by a monic squarefree polynomial: its roots are the members of a
/// finite set, or the non-members of a cofinite one.
class PointSet {
public:
    static PointSet empty();
    static PointSet all();
    /// Roots of f (f nonzero; reduced to its squarefree part).
    static PointSet zeros(const DensePoly& f);
    /// Complement of the roots of f.
    static PointSet nonzeros(const DensePoly& f);

    bool is_cofinite() const noexcept { return cofinite_; }
    bool is_empty() const { return !cofinite_ && poly_.is_constant(); }
    const DensePoly& poly() const noexcept { return poly_; }

    bool contains(const Rational& x) const;

    PointSet complement() const;
    friend PointSet operator|(const PointSet& a, const PointSet& b);
    friend PointSet operator&(const PointSet& a, const PointSet& b);
    friend PointSet operator-(const PointSet& a, const PointSet& b);

    friend bool operator==(const PointSet&, const PointSet&) = default;

private:
    PointSet(bool cofinite, DensePoly poly) : cofinite_(cofinite), poly_(std::move(poly)) {}

    bool cofinite_ = false;
    DensePoly poly_;
};

std::string to_string(const PointSet& s);

/// Decision tree over one input x. Registers are assigned once per path
/// and referenced only by descendants; branch nodes test a register
/// against zero.
class ComputationTree {
public:
    using NodeId = std::size_t;
    using ValueId = std::size_t;

    struct ValueDef {
        enum class Kind { input, constant, compute };
        Kind kind = Kind::input;
        Rational constant;
        Op op = Op::add;
        ValueId lhs = 0;
        ValueId rhs = 0;

        static ValueDef make_input() { return {}; }
        static ValueDef make_constant(const Rational& c) { return {Kind::constant, c, Op::add, 0, 0}; }
        static ValueDef make_compute(Op op, ValueId lhs, ValueId rhs) { return {Kind::compute, {}, op, lhs, rhs}; }
    };

    struct Node {
        enum class Kind { assign, branch, leaf };
        Kind kind = Kind::leaf;
        // assign
        ValueId target = 0;
        ValueDef def;
        NodeId next = 0;
        // branch: tests register `test`
        ValueId test = 0;
        NodeId zero_child = 0;
        NodeId nonzero_child = 0;
        // leaf
        bool accept = false;
    };

    /// Children must be added before their parents.
    NodeId add_leaf(bool accept);
    NodeId add_assign(ValueId target, ValueDef def, NodeId next);
    NodeId add_branch(ValueId test, NodeId zero_child, NodeId nonzero_child);
    /// Checks the tree shape and register scoping; throws MalformedTree.
    void set_root(NodeId root);

    NodeId root() const noexcept { return root_; }
    const Node& node(NodeId id) const { return nodes_.at(id); }
    std::size_t node_count() const noexcept { return nodes_.size(); }

    /// Max number of compute and branch nodes on a root-to-leaf path.
    unsigned depth() const;
    /// Max number of mul/div nodes on a root-to-leaf path.
    unsigned mult_depth() const;
    bool uses_division() const;

    /// Runs the tree on a concrete rational input. Division by zero rejects.
    bool run(const Rational& x) const;

    /// Line format, one node per line:
    ///   n0 = input
    ///   n1 = const 1
    ///   n2 = mul n0 n0
    ///   branch n2 ? L:accept R:*
    ///   R| n3 = sub n2 n1
    ///   R| branch n3 ? L:accept R:reject
    /// L is the zero child, R the nonzero child; "*" continues on the lines
    /// prefixed with that path. Paths without a branch end in "accept" or "reject".
    std::string to_text() const;
    static ComputationTree parse(std::string_view text);

private:
    void check(NodeId id, std::vector<ValueId>& scope, std::vector<bool>& seen) const;

    std::vector<Node> nodes_;
    NodeId root_ = 0;
    bool rooted_ = false;
};

/// Generic path: the route taken by an input avoiding every nonzero test's roots.
struct PathPolynomial {
    /// Product of the numerators of the nonzero tests met on the generic path.
    DensePoly g;
    std::vector<DensePoly> tests;
    unsigned depth_total = 0;
    unsigned depth_mult = 0;
};

/// Identically-zero tests route to the zero child and contribute nothing.
PathPolynomial trace_generic_path(const ComputationTree& tree);

struct AcceptSet {
    struct Path {
        /// gcd of the zero-routed test numerators (squarefree, monic);
        /// nullopt when the path imposes no equation.
        std::optional<DensePoly> equations;
        /// Squarefree product of nonzero-routed tests and divisors.
        DensePoly exclusions;
        PointSet set;
    };
    std::vector<Path> accepting_paths;
    PointSet set;

    bool accepts_generic() const noexcept { return set.is_cofinite(); }
};

/// Union over root-to-accept paths of the conjoined path conditions.
AcceptSet accept_set(const ComputationTree& tree);

/// True iff the tree accepts exactly the zeros of target.
bool decides(const ComputationTree& tree, const DensePoly& target);

struct EnumerationConfig {
    unsigned max_depth = 3;
    OpSet ops = OpSet::ring();
    std::vector<Rational> constants{Rational(0), Rational(1)};
    unsigned workers = 1;
    /// Cap on generated subtree classes; exceeding it makes the report inconclusive.
    std::uint64_t node_budget = 50'000'000;
};

struct RefutationReport {
    DensePoly target;
    DensePoly target_squarefree;
    EnumerationConfig config;

    bool conclusive = true;
    /// Canonical trees, and the classes of identical (accept set, g, depth) they fall into.
    std::uint64_t trees_examined = 0;
    std::uint64_t classes_examined = 0;
    std::uint64_t deciders = 0;
    std::optional<ComputationTree> witness;
    /// Trees whose generic-path polynomial is / is not a multiple of the target's squarefree part.
    std::uint64_t divisibility_holds = 0;
    std::uint64_t divisibility_fails = 0;
    /// Deciders whose generic-path polynomial is not a multiple of the target. Always 0.
    std::uint64_t deciders_failing_divisibility = 0;
    /// Division-free trees breaking deg g <= 2^(T^2) or 0 <= v2(g_k) <= 2^(T^2)
    /// with integer coefficients, T the tree depth.
    std::uint64_t bound_violations = 0;
    unsigned max_generic_degree = 0;

    bool refuted() const noexcept { return conclusive && deciders == 0; }
};

/// Exhaustive search over canonical trees of depth <= max_depth. Pruned trees
/// always have a retained equivalent of no greater depth: duplicate or dead
/// registers, commuted operands, reordered independent computations, tests on
/// constants or on already-tested registers, and branches with two equal leaves.
RefutationReport enumerate_and_refute(const DensePoly& target, const EnumerationConfig& config);

} // namespace nlb

#endif
