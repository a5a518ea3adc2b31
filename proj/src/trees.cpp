#include "nlb/trees.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace nlb {

// ---------------------------------------------------------------- ops

std::string_view op_name(Op op)
{
    switch (op) {
    case Op::add: return "add";
    case Op::sub: return "sub";
    case Op::mul: return "mul";
    case Op::div: return "div";
    }
    return "?";
}

Op parse_op(std::string_view name)
{
    if (name == "add") return Op::add;
    if (name == "sub") return Op::sub;
    if (name == "mul") return Op::mul;
    if (name == "div") return Op::div;
    throw std::invalid_argument("unknown operation '" + std::string(name) + "'");
}

OpSet::OpSet(std::vector<Op> ops)
{
    for (Op op : ops)
        if (!contains(op))
            ops_.push_back(op);
    std::sort(ops_.begin(), ops_.end());
}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

} // namespace

OpSet OpSet::parse(std::string_view list)
{
    std::vector<Op> ops;
    while (!list.empty()) {
        const auto comma = list.find(',');
        ops.push_back(parse_op(trim(list.substr(0, comma))));
        if (comma == std::string_view::npos)
            break;
        list.remove_prefix(comma + 1);
    }
    if (ops.empty())
        throw std::invalid_argument("empty operation set");
    return OpSet(std::move(ops));
}

bool OpSet::contains(Op op) const { return std::find(ops_.begin(), ops_.end(), op) != ops_.end(); }

std::string OpSet::to_string() const
{
    std::string out;
    for (Op op : ops_) {
        if (!out.empty())
            out += ",";
        out += op_name(op);
    }
    return out;
}

// ---------------------------------------------------------------- values

namespace {

const DensePoly& one_poly()
{
    static const DensePoly one = DensePoly::constant(Rational(1));
    return one;
}

bool is_one(const DensePoly& p) { return p.degree() == 0 && p.coeffs()[0] == 1; }

RationalFunction reduced(DensePoly num, DensePoly den)
{
    if (den.is_zero())
        throw MalformedTree("division by the zero function");
    if (num.is_zero())
        return {DensePoly(), one_poly()};
    if (!den.is_constant()) {
        const DensePoly g = gcd(num, den);
        if (!g.is_constant()) {
            num = exact_div(num, g);
            den = exact_div(den, g);
        }
    }
    const Rational lead = den.leading();
    if (lead != 1) {
        const Rational inv = 1 / lead;
        num = inv * num;
        den = inv * den;
    }
    return {std::move(num), std::move(den)};
}

} // namespace

RationalFunction RationalFunction::constant(const Rational& c) { return {DensePoly::constant(c), one_poly()}; }

RationalFunction RationalFunction::input() { return {DensePoly::variable(), one_poly()}; }

RationalFunction apply(Op op, const RationalFunction& a, const RationalFunction& b)
{
    const bool polys = is_one(a.den) && is_one(b.den);
    switch (op) {
    case Op::add:
        if (polys)
            return {a.num + b.num, one_poly()};
        return reduced(a.num * b.den + b.num * a.den, a.den * b.den);
    case Op::sub:
        if (polys)
            return {a.num - b.num, one_poly()};
        return reduced(a.num * b.den - b.num * a.den, a.den * b.den);
    case Op::mul:
        if (polys)
            return {a.num * b.num, one_poly()};
        return reduced(a.num * b.num, a.den * b.den);
    case Op::div:
        if (b.num.is_zero())
            throw MalformedTree("division by the zero function");
        return reduced(a.num * b.den, a.den * b.num);
    }
    throw std::logic_error("unreachable");
}

int compare(const RationalFunction& a, const RationalFunction& b)
{
    const int c = compare(a.num, b.num);
    return c != 0 ? c : compare(a.den, b.den);
}

// ---------------------------------------------------------------- point sets

namespace {

DensePoly lcm(const DensePoly& a, const DensePoly& b)
{
    return monic(a * exact_div(b, gcd(a, b)));
}

DensePoly strip(const DensePoly& a, const DensePoly& b)
{
    const DensePoly g = gcd(a, b);
    return g.is_constant() ? a : monic(exact_div(a, g));
}

} // namespace

PointSet PointSet::empty() { return PointSet(false, one_poly()); }
PointSet PointSet::all() { return PointSet(true, one_poly()); }

PointSet PointSet::zeros(const DensePoly& f)
{
    if (f.is_zero())
        throw std::invalid_argument("zero set of the zero polynomial is all of C");
    return PointSet(false, squarefree_part(f));
}

PointSet PointSet::nonzeros(const DensePoly& f) { return zeros(f).complement(); }

bool PointSet::contains(const Rational& x) const { return (poly_(x) == 0) != cofinite_; }

PointSet PointSet::complement() const { return PointSet(!cofinite_, poly_); }

PointSet operator|(const PointSet& a, const PointSet& b)
{
    if (!a.cofinite_ && !b.cofinite_)
        return PointSet(false, lcm(a.poly_, b.poly_));
    if (a.cofinite_ && b.cofinite_)
        return PointSet(true, gcd(a.poly_, b.poly_));
    const PointSet& fin = a.cofinite_ ? b : a;
    const PointSet& cof = a.cofinite_ ? a : b;
    return PointSet(true, strip(cof.poly_, fin.poly_));
}

PointSet operator&(const PointSet& a, const PointSet& b)
{
    return (a.complement() | b.complement()).complement();
}

PointSet operator-(const PointSet& a, const PointSet& b) { return a & b.complement(); }

std::string to_string(const PointSet& s)
{
    return (s.is_cofinite() ? "C minus zeros of " : "zeros of ") + to_string(s.poly(), "x");
}

// ---------------------------------------------------------------- tree IR

ComputationTree::NodeId ComputationTree::add_leaf(bool accept)
{
    Node n;
    n.kind = Node::Kind::leaf;
    n.accept = accept;
    nodes_.push_back(std::move(n));
    return nodes_.size() - 1;
}

ComputationTree::NodeId ComputationTree::add_assign(ValueId target, ValueDef def, NodeId next)
{
    if (next >= nodes_.size())
        throw MalformedTree("assign refers to a node that does not exist yet");
    Node n;
    n.kind = Node::Kind::assign;
    n.target = target;
    n.def = std::move(def);
    n.next = next;
    nodes_.push_back(std::move(n));
    return nodes_.size() - 1;
}

ComputationTree::NodeId ComputationTree::add_branch(ValueId test, NodeId zero_child, NodeId nonzero_child)
{
    if (zero_child >= nodes_.size() || nonzero_child >= nodes_.size())
        throw MalformedTree("branch refers to a node that does not exist yet");
    Node n;
    n.kind = Node::Kind::branch;
    n.test = test;
    n.zero_child = zero_child;
    n.nonzero_child = nonzero_child;
    nodes_.push_back(std::move(n));
    return nodes_.size() - 1;
}

void ComputationTree::check(NodeId id, std::vector<ValueId>& scope, std::vector<bool>& seen) const
{
    if (seen.at(id))
        throw MalformedTree("node " + std::to_string(id) + " has two parents");
    seen[id] = true;
    const Node& n = nodes_[id];
    auto in_scope = [&](ValueId v) { return std::find(scope.begin(), scope.end(), v) != scope.end(); };
    switch (n.kind) {
    case Node::Kind::leaf:
        return;
    case Node::Kind::branch:
        if (!in_scope(n.test))
            throw MalformedTree("branch tests n" + std::to_string(n.test) + " before it is assigned");
        check(n.zero_child, scope, seen);
        check(n.nonzero_child, scope, seen);
        return;
    case Node::Kind::assign:
        if (in_scope(n.target))
            throw MalformedTree("n" + std::to_string(n.target) + " assigned twice on one path");
        if (n.def.kind == ValueDef::Kind::compute && (!in_scope(n.def.lhs) || !in_scope(n.def.rhs)))
            throw MalformedTree("n" + std::to_string(n.target) + " uses a register that is not assigned above it");
        scope.push_back(n.target);
        check(n.next, scope, seen);
        scope.pop_back();
        return;
    }
}

void ComputationTree::set_root(NodeId root)
{
    if (root >= nodes_.size())
        throw MalformedTree("root does not exist");
    std::vector<ValueId> scope;
    std::vector<bool> seen(nodes_.size(), false);
    check(root, scope, seen);
    root_ = root;
    rooted_ = true;
}

namespace {

template <typename F>
unsigned max_path_weight(const ComputationTree& t, ComputationTree::NodeId id, F&& weight)
{
    using Kind = ComputationTree::Node::Kind;
    const auto& n = t.node(id);
    switch (n.kind) {
    case Kind::leaf:
        return 0;
    case Kind::branch:
        return weight(n) + std::max(max_path_weight(t, n.zero_child, weight), max_path_weight(t, n.nonzero_child, weight));
    case Kind::assign:
        return weight(n) + max_path_weight(t, n.next, weight);
    }
    return 0;
}

bool is_compute(const ComputationTree::Node& n)
{
    return n.kind == ComputationTree::Node::Kind::assign &&
           n.def.kind == ComputationTree::ValueDef::Kind::compute;
}

bool is_mult(const ComputationTree::Node& n)
{
    return is_compute(n) && (n.def.op == Op::mul || n.def.op == Op::div);
}

} // namespace

unsigned ComputationTree::depth() const
{
    return max_path_weight(*this, root_, [](const Node& n) {
        return (n.kind == Node::Kind::branch || is_compute(n)) ? 1U : 0U;
    });
}

unsigned ComputationTree::mult_depth() const
{
    return max_path_weight(*this, root_, [](const Node& n) { return is_mult(n) ? 1U : 0U; });
}

bool ComputationTree::uses_division() const
{
    return std::any_of(nodes_.begin(), nodes_.end(),
                       [](const Node& n) { return is_compute(n) && n.def.op == Op::div; });
}

bool ComputationTree::run(const Rational& x) const
{
    std::unordered_map<ValueId, Rational> env;
    NodeId id = root_;
    for (;;) {
        const Node& n = nodes_[id];
        switch (n.kind) {
        case Node::Kind::leaf:
            return n.accept;
        case Node::Kind::branch:
            id = env.at(n.test) == 0 ? n.zero_child : n.nonzero_child;
            break;
        case Node::Kind::assign: {
            Rational v;
            switch (n.def.kind) {
            case ValueDef::Kind::input: v = x; break;
            case ValueDef::Kind::constant: v = n.def.constant; break;
            case ValueDef::Kind::compute: {
                const Rational& a = env.at(n.def.lhs);
                const Rational& b = env.at(n.def.rhs);
                switch (n.def.op) {
                case Op::add: v = a + b; break;
                case Op::sub: v = a - b; break;
                case Op::mul: v = a * b; break;
                case Op::div:
                    if (b == 0)
                        return false;
                    v = a / b;
                    break;
                }
                break;
            }
            }
            env[n.target] = std::move(v);
            id = n.next;
            break;
        }
        }
    }
}

// ---------------------------------------------------------------- text format

namespace {

std::string register_name(ComputationTree::ValueId v) { return "n" + std::to_string(v); }

void emit(const ComputationTree& t, ComputationTree::NodeId id, const std::string& path, std::ostringstream& out)
{
    using Kind = ComputationTree::Node::Kind;
    using DefKind = ComputationTree::ValueDef::Kind;
    const std::string prefix = path.empty() ? "" : path + "| ";
    for (;;) {
        const auto& n = t.node(id);
        if (n.kind == Kind::leaf) {
            out << prefix << (n.accept ? "accept" : "reject") << "\n";
            return;
        }
        if (n.kind == Kind::assign) {
            out << prefix << register_name(n.target) << " = ";
            switch (n.def.kind) {
            case DefKind::input: out << "input"; break;
            case DefKind::constant: out << "const " << to_string(n.def.constant); break;
            case DefKind::compute:
                out << op_name(n.def.op) << " " << register_name(n.def.lhs) << " " << register_name(n.def.rhs);
                break;
            }
            out << "\n";
            id = n.next;
            continue;
        }
        auto child = [&](ComputationTree::NodeId c) -> std::string {
            const auto& cn = t.node(c);
            if (cn.kind == Kind::leaf)
                return cn.accept ? "accept" : "reject";
            return "*";
        };
        out << prefix << "branch " << register_name(n.test) << " ? L:" << child(n.zero_child)
            << " R:" << child(n.nonzero_child) << "\n";
        if (t.node(n.zero_child).kind != Kind::leaf)
            emit(t, n.zero_child, path + "L", out);
        if (t.node(n.nonzero_child).kind != Kind::leaf)
            emit(t, n.nonzero_child, path + "R", out);
        return;
    }
}

std::vector<std::string_view> split_ws(std::string_view s)
{
    std::vector<std::string_view> out;
    while (true) {
        s = trim(s);
        if (s.empty())
            return out;
        std::size_t k = 0;
        while (k < s.size() && !std::isspace(static_cast<unsigned char>(s[k])))
            ++k;
        out.push_back(s.substr(0, k));
        s.remove_prefix(k);
    }
}

struct ParsedLine {
    std::size_t lineno;
    std::vector<std::string_view> words;
};

class TreeParser {
public:
    explicit TreeParser(std::string_view text)
    {
        std::size_t lineno = 0;
        while (!text.empty()) {
            ++lineno;
            const auto nl = text.find('\n');
            std::string_view line = trim(text.substr(0, nl));
            text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
            if (line.empty() || line.front() == '#')
                continue;
            std::string path;
            if (const auto bar = line.find('|'); bar != std::string_view::npos) {
                const auto p = trim(line.substr(0, bar));
                for (char c : p)
                    if (c != 'L' && c != 'R')
                        fail(lineno, "path prefix may contain only L and R");
                path = std::string(p);
                line = trim(line.substr(bar + 1));
            }
            groups_[path].push_back({lineno, split_ws(line)});
        }
    }

    ComputationTree run()
    {
        if (!groups_.count(""))
            throw MalformedTree("tree text has no root lines");
        const auto root = build("");
        for (const auto& [path, lines] : groups_)
            if (!used_.count(path))
                fail(lines.front().lineno, "lines for path '" + path + "' are not reachable from any branch");
        tree_.set_root(root);
        return std::move(tree_);
    }

private:
    [[noreturn]] static void fail(std::size_t lineno, const std::string& msg)
    {
        throw MalformedTree("tree text line " + std::to_string(lineno) + ": " + msg);
    }

    static ComputationTree::ValueId reg(std::size_t lineno, std::string_view w)
    {
        ComputationTree::ValueId v = 0;
        if (w.size() < 2 || w[0] != 'n')
            fail(lineno, "expected a register like n3, got '" + std::string(w) + "'");
        auto [ptr, ec] = std::from_chars(w.data() + 1, w.data() + w.size(), v);
        if (ec != std::errc() || ptr != w.data() + w.size())
            fail(lineno, "bad register '" + std::string(w) + "'");
        return v;
    }

    ComputationTree::NodeId child(std::size_t lineno, std::string_view spec, char side, const std::string& path)
    {
        const std::string expected = std::string(1, side) + ":";
        if (spec.substr(0, 2) != expected)
            fail(lineno, "expected '" + expected + "...', got '" + std::string(spec) + "'");
        const auto what = spec.substr(2);
        if (what == "accept")
            return tree_.add_leaf(true);
        if (what == "reject")
            return tree_.add_leaf(false);
        if (what == "*")
            return build(path + side);
        fail(lineno, "branch child must be accept, reject or *");
    }

    ComputationTree::NodeId build(const std::string& path)
    {
        auto it = groups_.find(path);
        if (it == groups_.end())
            throw MalformedTree("branch continues at path '" + path + "' but no lines carry that prefix");
        used_.insert(path);
        const auto& lines = it->second;

        // The last line ends the path; everything before it assigns registers.
        const auto& last = lines.back();
        ComputationTree::NodeId node;
        const auto& lw = last.words;
        if (lw.size() == 1 && (lw[0] == "accept" || lw[0] == "reject")) {
            node = tree_.add_leaf(lw[0] == "accept");
        } else if (!lw.empty() && lw[0] == "branch") {
            if (lw.size() != 5 || lw[2] != "?")
                fail(last.lineno, "expected 'branch nK ? L:... R:...'");
            const auto test = reg(last.lineno, lw[1]);
            const auto zero = child(last.lineno, lw[3], 'L', path);
            const auto nonzero = child(last.lineno, lw[4], 'R', path);
            node = tree_.add_branch(test, zero, nonzero);
        } else {
            fail(last.lineno, "a path must end with a branch, accept or reject");
        }

        for (std::size_t k = lines.size() - 1; k-- > 0;) {
            const auto& l = lines[k];
            const auto& w = l.words;
            if (w.size() < 3 || w[1] != "=")
                fail(l.lineno, "expected 'nK = ...'");
            const auto target = reg(l.lineno, w[0]);
            ComputationTree::ValueDef def;
            if (w[2] == "input" && w.size() == 3) {
                def = ComputationTree::ValueDef::make_input();
            } else if (w[2] == "const" && w.size() == 4) {
                try {
                    def = ComputationTree::ValueDef::make_constant(parse_rational(w[3]));
                } catch (const std::invalid_argument& e) {
                    fail(l.lineno, e.what());
                }
            } else if (w.size() == 5) {
                Op op;
                try {
                    op = parse_op(w[2]);
                } catch (const std::invalid_argument& e) {
                    fail(l.lineno, e.what());
                }
                def = ComputationTree::ValueDef::make_compute(op, reg(l.lineno, w[3]), reg(l.lineno, w[4]));
            } else {
                fail(l.lineno, "unrecognized assignment");
            }
            node = tree_.add_assign(target, def, node);
        }
        return node;
    }

    std::map<std::string, std::vector<ParsedLine>> groups_;
    std::unordered_set<std::string> used_;
    ComputationTree tree_;
};

} // namespace

std::string ComputationTree::to_text() const
{
    std::ostringstream out;
    emit(*this, root_, "", out);
    return out.str();
}

ComputationTree ComputationTree::parse(std::string_view text) { return TreeParser(text).run(); }

// ---------------------------------------------------------------- semantics

namespace {

using Env = std::unordered_map<ComputationTree::ValueId, RationalFunction>;

RationalFunction evaluate(const ComputationTree::ValueDef& def, const Env& env)
{
    using DefKind = ComputationTree::ValueDef::Kind;
    switch (def.kind) {
    case DefKind::input: return RationalFunction::input();
    case DefKind::constant: return RationalFunction::constant(def.constant);
    case DefKind::compute: return apply(def.op, env.at(def.lhs), env.at(def.rhs));
    }
    throw std::logic_error("unreachable");
}

} // namespace

PathPolynomial trace_generic_path(const ComputationTree& tree)
{
    using Kind = ComputationTree::Node::Kind;
    PathPolynomial out;
    out.g = one_poly();
    Env env;
    auto id = tree.root();
    for (;;) {
        const auto& n = tree.node(id);
        if (n.kind == Kind::leaf)
            return out;
        if (n.kind == Kind::assign) {
            env[n.target] = evaluate(n.def, env);
            if (is_compute(n)) {
                ++out.depth_total;
                if (is_mult(n))
                    ++out.depth_mult;
            }
            id = n.next;
            continue;
        }
        ++out.depth_total;
        const DensePoly& t = env.at(n.test).num;
        if (t.is_zero()) {
            id = n.zero_child;
        } else {
            out.g = out.g * t;
            out.tests.push_back(t);
            id = n.nonzero_child;
        }
    }
}

namespace {

struct PathCollector {
    const ComputationTree& tree;
    AcceptSet result{{}, PointSet::empty()};

    void walk(ComputationTree::NodeId id, Env& env, std::vector<DensePoly>& eqs, std::vector<DensePoly>& excl)
    {
        using Kind = ComputationTree::Node::Kind;
        const auto& n = tree.node(id);
        switch (n.kind) {
        case Kind::leaf:
            if (n.accept)
                finish(eqs, excl);
            return;
        case Kind::assign: {
            const bool divides_here = is_compute(n) && n.def.op == Op::div;
            if (divides_here)
                excl.push_back(env.at(n.def.rhs).num);
            auto saved = env.find(n.target) != env.end() ? std::optional(env.at(n.target)) : std::nullopt;
            env[n.target] = evaluate(n.def, env);
            walk(n.next, env, eqs, excl);
            if (saved)
                env[n.target] = *saved;
            else
                env.erase(n.target);
            if (divides_here)
                excl.pop_back();
            return;
        }
        case Kind::branch: {
            const DensePoly t = env.at(n.test).num;
            eqs.push_back(t);
            walk(n.zero_child, env, eqs, excl);
            eqs.pop_back();
            excl.push_back(t);
            walk(n.nonzero_child, env, eqs, excl);
            excl.pop_back();
            return;
        }
        }
    }

    void finish(const std::vector<DensePoly>& eqs, const std::vector<DensePoly>& excl)
    {
        AcceptSet::Path path{std::nullopt, one_poly(), PointSet::empty()};
        bool feasible = true;
        for (const auto& e : excl) {
            if (e.is_zero()) {
                feasible = false;
                continue;
            }
            if (!e.is_constant())
                path.exclusions = lcm(path.exclusions, squarefree_part(e));
        }
        for (const auto& e : eqs) {
            if (e.is_zero())
                continue;
            path.equations = path.equations ? gcd(*path.equations, e) : monic(e);
        }
        if (path.equations)
            path.equations = squarefree_part(*path.equations);
        if (feasible) {
            if (path.equations)
                path.set = PointSet::zeros(strip(*path.equations, path.exclusions));
            else
                path.set = PointSet::nonzeros(path.exclusions);
        }
        result.set = result.set | path.set;
        result.accepting_paths.push_back(std::move(path));
    }
};

} // namespace

AcceptSet accept_set(const ComputationTree& tree)
{
    PathCollector c{tree};
    Env env;
    std::vector<DensePoly> eqs, excl;
    c.walk(tree.root(), env, eqs, excl);
    return std::move(c.result);
}

bool decides(const ComputationTree& tree, const DensePoly& target)
{
    const DensePoly s = squarefree_part(target);
    const PointSet a = accept_set(tree).set;
    return !a.is_cofinite() && a.poly() == s;
}

// ---------------------------------------------------------------- enumeration

namespace {

struct BudgetExceeded {};

struct Sketch;
using SketchPtr = std::shared_ptr<const Sketch>;

struct Sketch {
    enum class Kind { leaf, compute, branch };
    Kind kind = Kind::leaf;
    bool accept = false;
    Op op = Op::add;
    unsigned lhs = 0, rhs = 0, target = 0;
    unsigned test = 0;
    SketchPtr next, zero, nonzero;
};

/// A class of subtrees sharing everything their parents look at.
struct Summary {
    PointSet accept;
    DensePoly g;
    unsigned depth = 0;
    unsigned generic_total = 0;
    unsigned generic_mult = 0;
    unsigned tests = 0;
    std::uint64_t uses = 0;
    std::uint64_t count = 0;
    SketchPtr rep;
};

using SummaryList = std::vector<Summary>;

std::string poly_key(const DensePoly& p)
{
    std::string k;
    for (const auto& c : p.coeffs()) {
        k += to_string(c);
        k += ',';
    }
    return k;
}

std::string set_key(const PointSet& s) { return (s.is_cofinite() ? "C" : "F") + poly_key(s.poly()); }

std::string value_key(const RationalFunction& v) { return poly_key(v.num) + "/" + poly_key(v.den); }

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("tree count overflow");
    return r;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("tree count overflow");
    return r;
}

class Merger {
public:
    explicit Merger(SummaryList& out) : out_(out) {}

    void add(Summary s)
    {
        std::string key = set_key(s.accept) + "|" + poly_key(s.g) + "|" + std::to_string(s.depth) + "," +
                          std::to_string(s.generic_total) + "," + std::to_string(s.generic_mult) + "," +
                          std::to_string(s.tests) + "," + std::to_string(s.uses);
        auto [it, fresh] = index_.try_emplace(std::move(key), out_.size());
        if (fresh)
            out_.push_back(std::move(s));
        else
            out_[it->second].count = checked_add(out_[it->second].count, s.count);
    }

private:
    SummaryList& out_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct State {
    std::vector<RationalFunction> values;
    std::vector<std::string> value_keys;
    std::vector<std::string> tested; // sorted keys of monic tested numerators
    unsigned remaining = 0;
    int last = -1;

    std::string key() const
    {
        std::string k = std::to_string(remaining) + "#" + std::to_string(last) + "#";
        for (const auto& v : value_keys)
            k += v + ";";
        k += "#";
        for (const auto& t : tested)
            k += t + ";";
        return k;
    }
};

/// One choice at a tree node: a leaf, a branch on a register, or a new register.
struct Choice {
    enum class Kind { leaf, branch, compute };
    Kind kind;
    bool accept = false;
    unsigned test = 0;
    Op op = Op::add;
    unsigned lhs = 0, rhs = 0;
    RationalFunction value;
};

class Enumerator {
public:
    Enumerator(const EnumerationConfig& config, std::atomic<std::uint64_t>& produced)
        : ops_(config.ops), budget_(config.node_budget), produced_(produced)
    {
    }

    /// Choices available at a node, after pruning.
    std::vector<Choice> choices(const State& st) const
    {
        std::vector<Choice> out;
        out.push_back({Choice::Kind::leaf, true});
        out.push_back({Choice::Kind::leaf, false});
        if (st.remaining >= 1) {
            std::unordered_set<std::string> seen;
            for (unsigned i = 0; i < st.values.size(); ++i) {
                const DensePoly& t = st.values[i].num;
                if (t.is_constant())
                    continue;
                std::string k = poly_key(monic(t));
                if (std::binary_search(st.tested.begin(), st.tested.end(), k) || !seen.insert(k).second)
                    continue;
                Choice c{Choice::Kind::branch};
                c.test = i;
                out.push_back(std::move(c));
            }
        }
        if (st.remaining >= 2 && st.values.size() < 63) {
            std::unordered_set<std::string> existing(st.value_keys.begin(), st.value_keys.end());
            const unsigned n = static_cast<unsigned>(st.values.size());
            for (Op op : ops_.ops()) {
                const bool commutative = op == Op::add || op == Op::mul;
                for (unsigned a = 0; a < n; ++a) {
                    for (unsigned b = commutative ? a : 0; b < n; ++b) {
                        if (op == Op::div && st.values[b].is_zero())
                            continue;
                        RationalFunction v = apply(op, st.values[a], st.values[b]);
                        // First operand form of each new value only.
                        if (!existing.insert(value_key(v)).second)
                            continue;
                        if (st.last >= 0 && a != static_cast<unsigned>(st.last) && b != static_cast<unsigned>(st.last) &&
                            compare(v, st.values[static_cast<unsigned>(st.last)]) < 0)
                            continue;
                        Choice c{Choice::Kind::compute};
                        c.op = op;
                        c.lhs = a;
                        c.rhs = b;
                        c.value = std::move(v);
                        out.push_back(std::move(c));
                    }
                }
            }
        }
        return out;
    }

    void expand(const State& st, const Choice& c, Merger& m)
    {
        switch (c.kind) {
        case Choice::Kind::leaf: {
            Summary s{c.accept ? PointSet::all() : PointSet::empty(), one_poly()};
            s.count = 1;
            auto sk = std::make_shared<Sketch>();
            sk->accept = c.accept;
            s.rep = std::move(sk);
            produce(m, std::move(s));
            return;
        }
        case Choice::Kind::branch:
            expand_branch(st, c.test, m);
            return;
        case Choice::Kind::compute:
            expand_compute(st, c, m);
            return;
        }
    }

    const SummaryList& summaries(const State& st)
    {
        std::string key = st.key();
        if (auto it = memo_.find(key); it != memo_.end())
            return *it->second;
        auto list = std::make_shared<SummaryList>();
        Merger m(*list);
        for (const auto& c : choices(st))
            expand(st, c, m);
        return *memo_.emplace(std::move(key), std::move(list)).first->second;
    }

private:
    void produce(Merger& m, Summary s)
    {
        if (produced_.fetch_add(1, std::memory_order_relaxed) >= budget_)
            throw BudgetExceeded{};
        m.add(std::move(s));
    }

    void expand_branch(const State& st, unsigned i, Merger& m)
    {
        const DensePoly& t = st.values[i].num;
        State child = st;
        child.remaining = st.remaining - 1;
        child.last = -1;
        const std::string tk = poly_key(monic(t));
        child.tested.insert(std::upper_bound(child.tested.begin(), child.tested.end(), tk), tk);
        const SummaryList& kids = summaries(child);

        const PointSet zt = PointSet::zeros(t);

        struct Group {
            PointSet part;
            const Summary* first;
            std::uint64_t count;
            int leaf; // -1 non-leaf, 0 reject leaf, 1 accept leaf
        };
        auto group = [&](bool zero_side) {
            std::vector<Group> groups;
            std::unordered_map<std::string, std::size_t> index;
            for (const auto& s : kids) {
                PointSet part = zero_side ? (s.accept & zt) : (s.accept - zt);
                std::string key = set_key(part) + "|" + std::to_string(s.depth) + "|" + std::to_string(s.uses);
                if (!zero_side)
                    key += "|" + poly_key(s.g) + "|" + std::to_string(s.generic_total) + "," +
                           std::to_string(s.generic_mult) + "," + std::to_string(s.tests);
                const int leaf = s.depth == 0 ? (s.accept.is_cofinite() ? 1 : 0) : -1;
                key += "|" + std::to_string(leaf);
                auto [it, fresh] = index.try_emplace(std::move(key), groups.size());
                if (fresh)
                    groups.push_back({std::move(part), &s, s.count, leaf});
                else
                    groups[it->second].count = checked_add(groups[it->second].count, s.count);
            }
            return groups;
        };
        const auto zero_groups = group(true);
        const auto nonzero_groups = group(false);

        for (const auto& z : zero_groups) {
            for (const auto& nz : nonzero_groups) {
                if (z.leaf >= 0 && z.leaf == nz.leaf)
                    continue;
                const Summary& r = *nz.first;
                Summary s{z.part | nz.part, t * r.g};
                s.depth = 1 + std::max(z.first->depth, r.depth);
                s.generic_total = 1 + r.generic_total;
                s.generic_mult = r.generic_mult;
                s.tests = 1 + r.tests;
                s.uses = z.first->uses | r.uses | (std::uint64_t{1} << i);
                s.count = checked_mul(z.count, nz.count);
                auto sk = std::make_shared<Sketch>();
                sk->kind = Sketch::Kind::branch;
                sk->test = i;
                sk->zero = z.first->rep;
                sk->nonzero = r.rep;
                s.rep = std::move(sk);
                produce(m, std::move(s));
            }
        }
    }

    void expand_compute(const State& st, const Choice& c, Merger& m)
    {
        State child = st;
        const unsigned idx = static_cast<unsigned>(st.values.size());
        child.values.push_back(c.value);
        child.value_keys.push_back(value_key(c.value));
        child.remaining = st.remaining - 1;
        child.last = static_cast<int>(idx);
        const SummaryList& kids = summaries(child);

        const std::uint64_t bit = std::uint64_t{1} << idx;
        const bool mult = c.op == Op::mul || c.op == Op::div;
        std::optional<PointSet> undefined;
        if (c.op == Op::div)
            undefined = PointSet::zeros(st.values[c.rhs].num);
        for (const auto& k : kids) {
            if (!(k.uses & bit))
                continue;
            Summary s{undefined ? k.accept - *undefined : k.accept, k.g};
            s.depth = k.depth + 1;
            s.generic_total = k.generic_total + 1;
            s.generic_mult = k.generic_mult + (mult ? 1 : 0);
            s.tests = k.tests;
            s.uses = (k.uses & ~bit) | (std::uint64_t{1} << c.lhs) | (std::uint64_t{1} << c.rhs);
            s.count = k.count;
            auto sk = std::make_shared<Sketch>();
            sk->kind = Sketch::Kind::compute;
            sk->op = c.op;
            sk->lhs = c.lhs;
            sk->rhs = c.rhs;
            sk->target = idx;
            sk->next = k.rep;
            s.rep = std::move(sk);
            produce(m, std::move(s));
        }
    }

    const OpSet& ops_;
    std::uint64_t budget_;
    std::atomic<std::uint64_t>& produced_;
    std::unordered_map<std::string, std::shared_ptr<SummaryList>> memo_;
};

ComputationTree::NodeId materialize(const Sketch& sk, ComputationTree& tree)
{
    switch (sk.kind) {
    case Sketch::Kind::leaf:
        return tree.add_leaf(sk.accept);
    case Sketch::Kind::compute: {
        const auto next = materialize(*sk.next, tree);
        return tree.add_assign(sk.target, ComputationTree::ValueDef::make_compute(sk.op, sk.lhs, sk.rhs), next);
    }
    case Sketch::Kind::branch: {
        const auto zero = materialize(*sk.zero, tree);
        const auto nonzero = materialize(*sk.nonzero, tree);
        return tree.add_branch(sk.test, zero, nonzero);
    }
    }
    throw std::logic_error("unreachable");
}

ComputationTree to_tree(const Sketch& sk, const std::vector<Rational>& constants)
{
    ComputationTree tree;
    auto node = materialize(sk, tree);
    for (std::size_t k = constants.size(); k-- > 0;)
        node = tree.add_assign(k + 1, ComputationTree::ValueDef::make_constant(constants[k]), node);
    node = tree.add_assign(0, ComputationTree::ValueDef::make_input(), node);
    tree.set_root(node);
    return tree;
}

/// Deg g <= 2^(T^2), integer coefficients with 0 <= v2 <= 2^(T^2).
bool within_generic_bounds(const DensePoly& g, unsigned depth)
{
    Integer bound;
    mpz_ui_pow_ui(bound.get_mpz_t(), 2, static_cast<unsigned long>(depth) * depth);
    if (Integer(g.degree()) > bound)
        return false;
    const Prime two(2);
    for (const auto& c : g.coeffs()) {
        if (c == 0)
            continue;
        if (c.get_den() != 1)
            return false;
        if (Integer(static_cast<unsigned long>(val_p(c.get_num(), two))) > bound)
            return false;
    }
    return true;
}

struct ItemResult {
    std::uint64_t trees = 0, classes = 0, deciders = 0, div_holds = 0, div_fails = 0;
    std::uint64_t deciders_failing = 0, violations = 0;
    unsigned max_degree = 0;
    SketchPtr witness;
    bool done = false;
};

} // namespace

RefutationReport enumerate_and_refute(const DensePoly& target, const EnumerationConfig& config)
{
    if (target.is_zero())
        throw std::invalid_argument("enumerate_and_refute: zero target");
    RefutationReport report;
    report.target = target;
    report.target_squarefree = squarefree_part(target);
    report.config = config;

    State root;
    root.remaining = config.max_depth;
    root.values.push_back(RationalFunction::input());
    for (const auto& c : config.constants)
        root.values.push_back(RationalFunction::constant(c));
    for (const auto& v : root.values)
        root.value_keys.push_back(value_key(v));
    if (std::unordered_set<std::string>(root.value_keys.begin(), root.value_keys.end()).size() != root.values.size())
        throw std::invalid_argument("enumerate_and_refute: duplicate constants");

    std::atomic<std::uint64_t> produced{0};
    const auto items = Enumerator(config, produced).choices(root);
    std::vector<ItemResult> results(items.size());
    const bool division_free = !config.ops.contains(Op::div);
    const DensePoly& s = report.target_squarefree;

    std::atomic<std::size_t> next_item{0};
    std::atomic<bool> exhausted{false};
    auto work = [&] {
        Enumerator en(config, produced);
        for (;;) {
            const std::size_t k = next_item.fetch_add(1);
            if (k >= items.size() || exhausted.load())
                return;
            SummaryList list;
            try {
                Merger m(list);
                en.expand(root, items[k], m);
            } catch (const BudgetExceeded&) {
                exhausted = true;
                return;
            }
            ItemResult& r = results[k];
            for (const auto& sum : list) {
                r.trees = checked_add(r.trees, sum.count);
                ++r.classes;
                const bool decider = !sum.accept.is_cofinite() && sum.accept.poly() == s;
                const bool div = divides(s, sum.g);
                (div ? r.div_holds : r.div_fails) += sum.count;
                if (decider) {
                    r.deciders += sum.count;
                    if (!div)
                        r.deciders_failing += sum.count;
                    if (!r.witness)
                        r.witness = sum.rep;
                }
                if (division_free && !within_generic_bounds(sum.g, sum.depth))
                    r.violations += sum.count;
                r.max_degree = std::max(r.max_degree, static_cast<unsigned>(std::max(0L, sum.g.degree())));
            }
            r.done = true;
        }
    };

    const unsigned workers = std::max(1U, config.workers);
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work);
    }

    SketchPtr witness;
    for (const auto& r : results) {
        if (!r.done) {
            report.conclusive = false;
            continue;
        }
        report.trees_examined = checked_add(report.trees_examined, r.trees);
        report.classes_examined += r.classes;
        report.deciders += r.deciders;
        report.divisibility_holds += r.div_holds;
        report.divisibility_fails += r.div_fails;
        report.deciders_failing_divisibility += r.deciders_failing;
        report.bound_violations += r.violations;
        report.max_generic_degree = std::max(report.max_generic_degree, r.max_degree);
        if (!witness && r.witness)
            witness = r.witness;
    }
    if (witness)
        report.witness = to_tree(*witness, config.constants);
    return report;
}

} // namespace nlb
