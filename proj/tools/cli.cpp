#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "nlb/certificates.hpp"
#include "nlb/families.hpp"
#include "nlb/json_io.hpp"
#include "nlb/trees.hpp"

namespace nlb::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Outcome {
    Json report;
    int code = ok;
};

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, ',');) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (item.empty())
            throw UsageError("empty item in list '" + s + "'");
        out.push_back(item);
    }
    if (out.empty())
        throw UsageError("empty list");
    return out;
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("'" + path + "' is not valid JSON: " + e.what());
    }
}

FamilyId family_of(const Json& input)
{
    try {
        return FamilyId::parse(input.at("family").get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

LemmaConstant constant_of(const Json& input)
{
    try {
        return parse_lemma_constant(input.at("constant").get<unsigned>());
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

Json finish(Json result, const Json& input)
{
    result["input"] = input;
    result["version"] = library_version;
    return result;
}

// ---------------------------------------------------------------- commands

Outcome do_polygon(const Json& input)
{
    Prime p(2);
    AnyPoly poly;
    try {
        p = Prime(input.at("prime").get<std::uint64_t>());
        poly = poly_from_json(input.at("poly"));
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    ValuedPoly vp = std::visit(
        [&](const auto& f) -> ValuedPoly {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, DensePoly>) {
                if (f.is_zero())
                    throw UsageError("the zero polynomial has no Newton polygon");
                return coefficient_valuations(f, p);
            } else {
                if (f.prime().value() != p.value())
                    throw UsageError("valued polynomial is over p = " + std::to_string(f.prime().value()) +
                                     ", not " + std::to_string(p.value()));
                return f;
            }
        },
        poly);
    return {finish(polygon_report(vp), input)};
}

Outcome do_profile(const Json& input)
{
    const FamilyId id = family_of(input);
    const ValuedPoly vp = gen_valued(id);
    Json r = profile_json(root_valuation_profile(vp));
    Json out;
    out["family"] = id.to_string();
    out["degree"] = vp.degree();
    out["profile"] = r.at("profile");
    out["zero_roots"] = r.at("zero_roots");
    return {finish(std::move(out), input)};
}

Outcome do_certify(const Json& input)
{
    const FamilyId id = family_of(input);
    const auto T = input.at("T").get<std::uint64_t>();
    if (T == 0)
        throw UsageError("--T must be at least 1");
    const auto cert = certify_family(id, T, constant_of(input), input.at("workers").get<unsigned>());
    const int code = cert.lemma.conditions.both() ? ok : failed;
    return {finish(to_json(cert), input), code};
}

Outcome do_subset_sums(const Json& input)
{
    std::vector<Rational> values;
    for (const auto& v : input.at("values")) {
        try {
            values.push_back(parse_rational(v.get<std::string>()));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    std::optional<GapSequence> g;
    try {
        g.emplace(std::move(values));
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const auto r = subset_sums_distinct(*g, input.at("workers").get<unsigned>());
    Json out;
    out["count"] = r.count;
    out["gap_condition"] = gap_condition(*g);
    out["distinct"] = r.distinct;
    return {finish(std::move(out), input)};
}

Outcome do_thresholds(const Json& input)
{
    const auto T = input.at("T").get<std::uint64_t>();
    if (T == 0)
        throw UsageError("--T must be at least 1");
    Json out;
    out["uniform"] = uniform_threshold(T);
    out["nonuniform"] = nonuniform_threshold(T, constant_of(input));
    return {finish(std::move(out), input)};
}

Outcome do_gen(const Json& input)
{
    const FamilyId id = family_of(input);
    const auto repr = input.at("repr").get<std::string>();
    if (repr == "valued")
        return {finish(Json{{"family", id.to_string()}, {"poly", to_json(gen_valued(id))}}, input)};
    if (repr != "exact")
        throw UsageError("--repr must be exact or valued");
    return {finish(Json{{"family", id.to_string()},
                        {"poly", to_json(gen_exact(id, input.at("bit_budget").get<std::uint64_t>()))}},
                   input)};
}

Outcome do_refute(const Json& input)
{
    DensePoly target;
    try {
        target = std::get<DensePoly>(poly_from_json(input.at("target")));
    } catch (const std::bad_variant_access&) {
        throw UsageError("the target must be a dense polynomial");
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (target.is_zero())
        throw UsageError("the target must be a nonzero polynomial");

    EnumerationConfig cfg;
    cfg.max_depth = input.at("max_depth").get<unsigned>();
    cfg.workers = input.at("workers").get<unsigned>();
    cfg.node_budget = input.at("budget").get<std::uint64_t>();
    try {
        cfg.ops = OpSet::parse(input.at("ops").get<std::string>());
        cfg.constants.clear();
        for (const auto& c : input.at("constants"))
            cfg.constants.push_back(parse_rational(c.get<std::string>()));
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const auto r = enumerate_and_refute(target, cfg);
    return {finish(to_json(r), input), r.refuted() ? ok : failed};
}

Outcome execute(const Json& input)
{
    try {
        const auto cmd = input.at("command").get<std::string>();
        if (cmd == "polygon")
            return do_polygon(input);
        if (cmd == "profile")
            return do_profile(input);
        if (cmd == "certify")
            return do_certify(input);
        if (cmd == "subset-sums")
            return do_subset_sums(input);
        if (cmd == "thresholds")
            return do_thresholds(input);
        if (cmd == "gen")
            return do_gen(input);
        if (cmd == "refute-trees")
            return do_refute(input);
        throw UsageError("unknown command '" + cmd + "'");
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("malformed input specification: ") + e.what());
    }
}

Json json_list(const std::string& s)
{
    Json out = Json::array();
    for (const auto& item : split_list(s))
        out.push_back(item);
    return out;
}

DensePoly refute_target(const std::string& spec, std::uint64_t bit_budget)
{
    if (spec.find(':') != std::string::npos && spec.size() < 16) {
        try {
            return gen_exact(FamilyId::parse(spec), bit_budget);
        } catch (const std::invalid_argument&) {
            // not a family; fall through to a file
        }
    }
    auto poly = poly_from_json(read_json_file(spec));
    if (!std::holds_alternative<DensePoly>(poly))
        throw UsageError("the target must be a dense polynomial");
    return std::get<DensePoly>(poly);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Newton polygon certificates and computation-tree refutation"};
    app.name("nlb");
    app.require_subcommand(1);
    bool pretty = false;
    app.add_flag("--pretty", pretty, "Indent the JSON report");

    std::string family, repr = "exact", poly_file, values, target, ops = "add,sub,mul", constants = "0,1", report_file;
    unsigned long prime = 2, constant = 28, T = 0, workers = 1, max_depth = 3;
    std::uint64_t bit_budget = default_bit_budget, budget = EnumerationConfig{}.node_budget;

    auto* polygon = app.add_subcommand("polygon", "Newton polygon of a polynomial file");
    polygon->add_option("--prime", prime, "Prime p")->capture_default_str();
    polygon->add_option("--poly", poly_file, "Polynomial JSON file")->required();

    auto* profile = app.add_subcommand("profile", "Root valuation profile of a family member");
    profile->add_option("--family", family, "Family, e.g. q:5")->required();

    auto* certify = app.add_subcommand("certify", "Check a family against the lemma and thresholds");
    certify->add_option("--family", family, "Family, e.g. p:6")->required();
    certify->add_option("--constant", constant, "Lemma constant (28 or 21)")->capture_default_str();
    certify->add_option("--T", T, "Time bound T")->required();
    certify->add_option("--workers", workers, "Worker threads")->capture_default_str();

    auto* sums = app.add_subcommand("subset-sums", "Count distinct subset sums of a decreasing sequence");
    sums->add_option("--values", values, "Comma-separated, strictly decreasing")->required();
    sums->add_option("--workers", workers, "Worker threads")->capture_default_str();

    auto* thresholds = app.add_subcommand("thresholds", "Minimal degrees for the uniform and non-uniform bounds");
    thresholds->add_option("--T", T, "Time bound T")->required();
    thresholds->add_option("--constant", constant, "Lemma constant (28 or 21)")->capture_default_str();

    auto* refute = app.add_subcommand("refute-trees", "Search all small computation trees for a decider");
    refute->add_option("--target", target, "Polynomial JSON file or family")->required();
    refute->add_option("--max-depth", max_depth, "Maximum tree depth")->capture_default_str();
    refute->add_option("--ops", ops, "Operations")->capture_default_str();
    refute->add_option("--constants", constants, "Constants")->capture_default_str();
    refute->add_option("--workers", workers, "Worker threads")->capture_default_str();
    refute->add_option("--budget", budget, "Cap on generated subtree classes")->capture_default_str();
    refute->add_option("--bit-budget", bit_budget, "Bit budget for a family target")->capture_default_str();

    auto* gen = app.add_subcommand("gen", "Emit a family polynomial");
    gen->add_option("--family", family, "Family, e.g. p:2")->required();
    gen->add_option("--repr", repr, "exact or valued")->capture_default_str();
    gen->add_option("--bit-budget", bit_budget, "Largest power of two written out")->capture_default_str();

    auto* replay = app.add_subcommand("replay", "Re-run the input embedded in a report");
    replay->add_option("--report", report_file, "Report JSON file")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "nlb: " << e.what() << "\n";
        return usage;
    }

    try {
        Json input;
        const CLI::App* sub = app.get_subcommands().front();
        input["command"] = sub->get_name();
        if (sub == polygon) {
            input["prime"] = prime;
            input["poly"] = read_json_file(poly_file);
        } else if (sub == profile) {
            input["family"] = family;
        } else if (sub == certify) {
            input["family"] = family;
            input["constant"] = constant;
            input["T"] = T;
            input["workers"] = workers;
        } else if (sub == sums) {
            input["values"] = json_list(values);
            input["workers"] = workers;
        } else if (sub == thresholds) {
            input["T"] = T;
            input["constant"] = constant;
        } else if (sub == refute) {
            DensePoly t;
            try {
                t = refute_target(target, bit_budget);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            input["target"] = to_json(t);
            input["target_name"] = target;
            input["max_depth"] = max_depth;
            input["ops"] = ops;
            input["constants"] = json_list(constants);
            input["workers"] = workers;
            input["budget"] = budget;
        } else if (sub == gen) {
            input["family"] = family;
            input["repr"] = repr;
            input["bit_budget"] = bit_budget;
        } else {
            const Json report = read_json_file(report_file);
            if (!report.is_object() || !report.contains("input"))
                throw UsageError("'" + report_file + "' has no embedded input");
            if (report.value("version", "") != library_version)
                err << "nlb: report was written by version " << report.value("version", "?") << ", this is "
                    << library_version << "\n";
            input = report.at("input");
        }

        const Outcome o = execute(input);
        out << (pretty ? o.report.dump(2) : o.report.dump()) << "\n";
        return o.code;
    } catch (const UsageError& e) {
        err << "nlb: " << e.what() << "\n";
        return usage;
    } catch (const std::exception& e) {
        err << "nlb: " << e.what() << "\n";
        return failed;
    }
}

} // namespace nlb::cli
