#include "nlb/json_io.hpp"

#include <stdexcept>
#include <string>

namespace nlb {

namespace {

Rational rational_field(const Json& j)
{
    if (j.is_string())
        return parse_rational(j.get<std::string>());
    if (j.is_number_integer())
        return Rational(std::to_string(j.get<long long>()), 10);
    throw std::invalid_argument("expected a rational as a decimal string, got " + j.dump());
}

Json rational_pair(std::size_t k, const Rational& q) { return Json::array({k, to_string(q)}); }

} // namespace

Json to_json(const DensePoly& f)
{
    Json coeffs = Json::array();
    for (const auto& c : f.coeffs())
        coeffs.push_back(to_string(c));
    return Json{{"repr", "dense"}, {"coeffs", std::move(coeffs)}};
}

Json to_json(const ValuedPoly& vp)
{
    Json entries = Json::array();
    for (const auto& e : vp.entries())
        entries.push_back(Json::array({e.index, to_string(e.val)}));
    return Json{{"repr", "valued"}, {"prime", vp.prime().value()}, {"degree", vp.degree()}, {"entries", std::move(entries)}};
}

AnyPoly poly_from_json(const Json& j)
{
    try {
        const std::string repr = j.at("repr").get<std::string>();
        if (repr == "dense") {
            std::vector<Rational> coeffs;
            for (const auto& c : j.at("coeffs"))
                coeffs.push_back(rational_field(c));
            return DensePoly(std::move(coeffs));
        }
        if (repr == "valued") {
            const Prime p(j.at("prime").get<std::uint64_t>());
            const auto degree = j.at("degree").get<std::size_t>();
            std::vector<ValuedPoly::Entry> entries;
            for (const auto& e : j.at("entries")) {
                if (!e.is_array() || e.size() != 2)
                    throw std::invalid_argument("valued entry must be [index, \"val\"]");
                const Json& v = e[1];
                ExtVal val = v.is_string() ? parse_extval(v.get<std::string>()) : ExtVal(rational_field(v));
                entries.push_back({e[0].get<std::size_t>(), std::move(val)});
            }
            return ValuedPoly(p, degree, std::move(entries));
        }
        throw std::invalid_argument("unknown polynomial repr '" + repr + "'");
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed polynomial JSON: ") + e.what());
    }
}

Json polygon_report(const ValuedPoly& vp)
{
    const NewtonPolygon poly = lower_hull(vp);
    Json vertices = Json::array();
    for (const auto& v : poly.vertices)
        vertices.push_back(rational_pair(v.index, v.val));
    Json slopes = Json::array();
    for (const auto& s : poly.segments())
        slopes.push_back(Json::array({to_string(s.slope), s.length}));
    const Json profile = profile_json(root_valuation_profile(vp));
    return Json{{"vertices", std::move(vertices)},
                {"slopes", std::move(slopes)},
                {"profile", profile.at("profile")},
                {"zero_roots", profile.at("zero_roots")}};
}

Json profile_json(const RootProfile& profile)
{
    Json entries = Json::array();
    for (const auto& e : profile.entries)
        entries.push_back(Json::array({to_string(e.valuation), e.multiplicity}));
    return Json{{"profile", std::move(entries)}, {"zero_roots", profile.zero_root_multiplicity}};
}

Json to_json(const FamilyCertificate& cert)
{
    const auto& lemma = cert.lemma;
    Json out;
    out["family"] = cert.family.to_string();
    out["conditions"] = Json::array({lemma.conditions.condition1, lemma.conditions.condition2});
    out["constant"] = static_cast<unsigned>(lemma.constant);
    out["T"] = cert.T;
    out["D"] = to_string(lemma.D);
    out["d"] = lemma.d;
    out["bound_L"] = lemma.bound_ceiling ? Json(lemma.bound_ceiling->get_ui()) : Json(nullptr);
    out["bound_L_approx"] = lemma.bound_approx ? Json(to_string(*lemma.bound_approx)) : Json(nullptr);
    Json thresholds;
    thresholds["uniform"] = cert.uniform_threshold ? Json(*cert.uniform_threshold) : Json(nullptr);
    thresholds["nonuniform"] = cert.nonuniform_threshold ? Json(*cert.nonuniform_threshold) : Json(nullptr);
    out["thresholds"] = std::move(thresholds);
    out["profile"] = profile_json(cert.profile).at("profile");
    if (cert.gaps) {
        Json g = Json::array();
        for (const auto& v : cert.gaps->values())
            g.push_back(to_string(v));
        out["gaps"] = std::move(g);
    } else {
        out["gaps"] = nullptr;
    }
    out["gap_condition"] = cert.gap_condition_holds ? Json(*cert.gap_condition_holds) : Json(nullptr);
    out["subset_sums"] = cert.subset_sums ? Json{{"count", cert.subset_sums->count}, {"distinct", cert.subset_sums->distinct}}
                                          : Json(nullptr);
    out["gap_without_distinct"] = cert.gap_without_distinct;
    out["mu_lower_count"] = cert.mu_count ? Json(*cert.mu_count) : Json(nullptr);
    return out;
}

Json to_json(const RefutationReport& r)
{
    Json constants = Json::array();
    for (const auto& c : r.config.constants)
        constants.push_back(to_string(c));
    Json out;
    out["target"] = to_json(r.target);
    out["target_squarefree"] = to_json(r.target_squarefree);
    out["max_depth"] = r.config.max_depth;
    out["ops"] = r.config.ops.to_string();
    out["constants"] = std::move(constants);
    out["conclusive"] = r.conclusive;
    out["verdict"] = !r.conclusive ? "inconclusive" : (r.deciders > 0 ? "decider-found" : "no-decider");
    out["trees_examined"] = r.trees_examined;
    out["classes_examined"] = r.classes_examined;
    out["deciders"] = r.deciders;
    out["witness"] = r.witness ? Json(r.witness->to_text()) : Json(nullptr);
    out["divisibility"] = Json{{"holds", r.divisibility_holds},
                               {"fails", r.divisibility_fails},
                               {"deciders_failing", r.deciders_failing_divisibility}};
    out["generic_path_bound_violations"] = r.bound_violations;
    out["max_generic_degree"] = r.max_generic_degree;
    return out;
}

} // namespace nlb
