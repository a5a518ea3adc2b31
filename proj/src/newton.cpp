#include "nlb/newton.hpp"

#include <stdexcept>

namespace nlb {

namespace {

// Sign of the cross product (b - a) x (c - a).
int turn(const NewtonPolygon::Vertex& a, const NewtonPolygon::Vertex& b, const NewtonPolygon::Vertex& c)
{
    const Rational abx(static_cast<unsigned long>(b.index - a.index));
    const Rational acx(static_cast<unsigned long>(c.index - a.index));
    const Rational cross = abx * (c.val - a.val) - acx * (b.val - a.val);
    return sgn(cross);
}

} // namespace

std::vector<NewtonPolygon::Segment> NewtonPolygon::segments() const
{
    std::vector<Segment> out;
    for (std::size_t k = 1; k < vertices.size(); ++k) {
        const auto& a = vertices[k - 1];
        const auto& b = vertices[k];
        const std::size_t len = b.index - a.index;
        Rational slope = (b.val - a.val) / Rational(static_cast<unsigned long>(len));
        slope.canonicalize();
        out.push_back({std::move(slope), len});
    }
    return out;
}

NewtonPolygon lower_hull(const ValuedPoly& vp)
{
    // Monotone chain, lower half only; points arrive sorted by index.
    NewtonPolygon poly;
    auto& hull = poly.vertices;
    for (const auto& e : vp.entries()) {
        if (e.val.is_infinite())
            continue;
        NewtonPolygon::Vertex p{e.index, e.val.value()};
        while (hull.size() >= 2 && turn(hull[hull.size() - 2], hull.back(), p) <= 0)
            hull.pop_back();
        hull.push_back(std::move(p));
    }
    if (hull.empty())
        throw std::invalid_argument("lower_hull: no finite entries");
    return poly;
}

std::size_t RootProfile::degree() const
{
    std::size_t n = zero_root_multiplicity;
    for (const auto& e : entries)
        n += e.multiplicity;
    return n;
}

std::vector<ExtVal> RootProfile::ordered_roots() const
{
    std::vector<ExtVal> out(zero_root_multiplicity, ExtVal::infinity());
    for (const auto& e : entries)
        out.insert(out.end(), e.multiplicity, ExtVal(e.valuation));
    return out;
}

RootProfile root_valuation_profile(const ValuedPoly& vp)
{
    const NewtonPolygon poly = lower_hull(vp);
    RootProfile profile;
    profile.zero_root_multiplicity = poly.vertices.front().index;
    for (auto& s : poly.segments())
        profile.entries.push_back({Rational(-s.slope), s.length});
    return profile;
}

std::pair<std::size_t, std::size_t> slope_witness(const ValuedPoly& vp, const Rational& root_val)
{
    const NewtonPolygon poly = lower_hull(vp);
    const auto segs = poly.segments();
    for (std::size_t k = 0; k < segs.size(); ++k)
        if (segs[k].slope == -root_val)
            return {poly.vertices[k].index, poly.vertices[k + 1].index};
    throw std::invalid_argument("slope_witness: " + to_string(root_val) + " is not a root valuation");
}

} // namespace nlb
