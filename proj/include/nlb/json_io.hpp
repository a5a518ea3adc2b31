#ifndef NLB_JSON_IO_HPP
#define NLB_JSON_IO_HPP

#include <variant>

#include "json.hpp"

#include "nlb/certificates.hpp"
#include "nlb/newton.hpp"
#include "nlb/poly.hpp"
#include "nlb/trees.hpp"

namespace nlb {

using Json = nlohmann::ordered_json;

inline constexpr const char* library_version = "0.1.0";

using AnyPoly = std::variant<DensePoly, ValuedPoly>;

/// {"repr":"dense","coeffs":["2","4","16"]}
Json to_json(const DensePoly& f);
/// {"repr":"valued","prime":2,"degree":2,"entries":[[0,"1"],[1,"2"],[2,"4"]]}
Json to_json(const ValuedPoly& vp);
/// Accepts either layout; throws std::invalid_argument on malformed input.
AnyPoly poly_from_json(const Json& j);

/// {"vertices":[[0,"1"],...],"slopes":[["1",1],...],"profile":[["-1",1],...],"zero_roots":0}
Json polygon_report(const ValuedPoly& vp);
Json profile_json(const RootProfile& profile);

Json to_json(const FamilyCertificate& cert);
Json to_json(const RefutationReport& report);

} // namespace nlb

#endif
