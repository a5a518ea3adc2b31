#ifndef NLB_NEWTON_HPP
#define NLB_NEWTON_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "nlb/poly.hpp"

namespace nlb {

/// Lower convex hull of the points (i, v(g_i)) over the finite entries.
/// Consecutive slopes strictly increase; collinear points are not vertices.
struct NewtonPolygon {
    struct Vertex {
        std::size_t index;
        Rational val;
        friend bool operator==(const Vertex&, const Vertex&) = default;
    };
    struct Segment {
        Rational slope;
        std::size_t length;
        friend bool operator==(const Segment&, const Segment&) = default;
    };

    std::vector<Vertex> vertices;

    std::vector<Segment> segments() const;
};

/// Multiset of root valuations, largest first. Roots at zero are counted
/// separately since their valuation is infinite.
struct RootProfile {
    struct Entry {
        Rational valuation;
        std::size_t multiplicity;
        friend bool operator==(const Entry&, const Entry&) = default;
    };

    std::vector<Entry> entries;
    std::size_t zero_root_multiplicity = 0;

    std::size_t degree() const;
    /// Root valuations expanded with multiplicity, in nonincreasing order,
    /// zero roots (infinite) first.
    std::vector<ExtVal> ordered_roots() const;

    friend bool operator==(const RootProfile&, const RootProfile&) = default;
};

NewtonPolygon lower_hull(const ValuedPoly& vp);
RootProfile root_valuation_profile(const ValuedPoly& vp);

/// Hull vertex indices i < j with (j - i) * root_val = v(g_i) - v(g_j).
/// Throws std::invalid_argument if root_val is not a root valuation of vp.
std::pair<std::size_t, std::size_t> slope_witness(const ValuedPoly& vp, const Rational& root_val);

} // namespace nlb

#endif
