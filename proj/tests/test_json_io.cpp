#include "doctest.h"

#include "nlb/families.hpp"
#include "nlb/json_io.hpp"

using namespace nlb;

TEST_CASE("polynomial json layouts")
{
    const DensePoly q2 = gen_exact(FamilyId::parse("q:2"));
    CHECK(to_json(q2).dump() == R"({"repr":"dense","coeffs":["2","4","16"]})");
    CHECK(to_json(gen_valued(FamilyId::parse("q:2"))).dump() ==
          R"({"repr":"valued","prime":2,"degree":2,"entries":[[0,"1"],[1,"2"],[2,"4"]]})");

    CHECK(std::get<DensePoly>(poly_from_json(to_json(q2))) == q2);
    const ValuedPoly vp = gen_valued(FamilyId::parse("p:3"));
    CHECK(std::get<ValuedPoly>(poly_from_json(to_json(vp))) == vp);

    const auto mixed = poly_from_json(Json::parse(R"({"repr":"dense","coeffs":[1,"-1/2",0,3]})"));
    CHECK(std::get<DensePoly>(mixed).coeff(1) == Rational(-1, 2));
    const auto with_inf = poly_from_json(Json::parse(R"({"repr":"valued","prime":3,"degree":2,"entries":[[0,"inf"],[2,0]]})"));
    CHECK(std::get<ValuedPoly>(with_inf).entries().size() == 1);
}

TEST_CASE("malformed polynomial json")
{
    CHECK_THROWS_AS(poly_from_json(Json::parse(R"({"repr":"sparse"})")), std::invalid_argument);
    CHECK_THROWS_AS(poly_from_json(Json::parse(R"({"coeffs":[1]})")), std::invalid_argument);
    CHECK_THROWS_AS(poly_from_json(Json::parse(R"({"repr":"dense","coeffs":[1.5]})")), std::invalid_argument);
    CHECK_THROWS_AS(poly_from_json(Json::parse(R"({"repr":"valued","prime":4,"degree":0,"entries":[[0,"0"]]})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(poly_from_json(Json::parse(R"({"repr":"valued","prime":2,"degree":1,"entries":[[0]]})")),
                    std::invalid_argument);
}

TEST_CASE("polygon report")
{
    const ValuedPoly p2 = gen_valued(FamilyId::parse("p:2"));
    CHECK(polygon_report(p2).dump() ==
          R"({"vertices":[[0,"16"],[1,"4"],[2,"1"]],"slopes":[["-12",1],["-3",1]],"profile":[["12",1],["3",1]],"zero_roots":0})");
    const ValuedPoly t2 = coefficient_valuations(DensePoly({Rational(0), Rational(0), Rational(1)}), Prime(2));
    CHECK(polygon_report(t2).dump() == R"({"vertices":[[2,"0"]],"slopes":[],"profile":[],"zero_roots":2})");
}

TEST_CASE("certificate json")
{
    const auto cert = certify_family(FamilyId::parse("p:2"), 1, LemmaConstant::c28, 1);
    const Json j = to_json(cert);
    CHECK(j.at("family") == "p:2");
    CHECK(j.at("D") == "2");
    CHECK(j.at("conditions") == Json::array({true, true}));
    CHECK(j.at("profile").dump() == R"([["12",1],["3",1]])");
    CHECK(j.at("subset_sums").at("count") == 4);
}
