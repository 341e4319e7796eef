#include "cfmm/payoff_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cfmm/errors.hpp"

namespace cfmm {
namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const std::map<std::string_view, std::vector<std::string_view>, std::less<>> kFamilies = {
    {"cash_or_nothing", {"p0"}},
    {"capped_call", {"p0", "p1"}},
    {"black_scholes_binary", {"K", "sigma", "tau"}},
    {"logarithmic", {"p0"}},
    {"capped_power", {"p0", "p1", "a"}},
    {"constant_proportion", {"w", "C"}},
};

int line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

double number(const json& doc, std::string_view key) {
    const auto it = doc.find(key);
    if (it == doc.end()) throw PayoffFormatError("missing required field '" + std::string(key) + "'");
    if (!it->is_number()) throw PayoffFormatError("field '" + std::string(key) + "' must be a number");
    return it->get<double>();
}

ExtendedPrice extended(const json& value, std::string_view key) {
    if (value.is_string()) {
        if (value.get<std::string>() == "inf") return ExtendedPrice::infinity();
        throw PayoffFormatError("field '" + std::string(key) + "' must be a number or \"inf\"");
    }
    if (!value.is_number()) throw PayoffFormatError("field '" + std::string(key) + "' must be a number or \"inf\"");
    return value.get<double>();
}

json extended_json(const ExtendedPrice& p) { return p.is_infinite() ? json("inf") : json(p.value()); }

std::vector<std::pair<double, double>> pairs(const json& doc, std::string_view key) {
    std::vector<std::pair<double, double>> out;
    if (!doc.is_array()) throw PayoffFormatError("'" + std::string(key) + "' must be an array of [p, value] pairs");
    for (const auto& row : doc) {
        if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number())
            throw PayoffFormatError("'" + std::string(key) + "' entries must be [number, number]");
        out.emplace_back(row[0].get<double>(), row[1].get<double>());
    }
    return out;
}

CatalogParams catalog_from_json(const std::string& family, const json& doc) {
    if (family == "cash_or_nothing") return CashOrNothing{number(doc, "p0")};
    if (family == "capped_call") return CappedCall{number(doc, "p0"), number(doc, "p1")};
    if (family == "black_scholes_binary")
        return BlackScholesBinary{number(doc, "K"), number(doc, "sigma"), number(doc, "tau")};
    if (family == "logarithmic") return Logarithmic{number(doc, "p0")};
    if (family == "capped_power") {
        if (!doc.contains("p1")) throw PayoffFormatError("missing required field 'p1'");
        return CappedPower{number(doc, "p0"), extended(doc["p1"], "p1"), number(doc, "a")};
    }
    if (family == "constant_proportion") return ConstantProportion{number(doc, "w"), number(doc, "C")};
    throw PayoffFormatError("unknown catalog family '" + family + "'");
}

json catalog_to_json(const CatalogParams& params) {
    json doc;
    doc["catalog"] = std::string(catalog_name(params));
    std::visit(overloaded{
                   [&](const CashOrNothing& c) { doc["p0"] = c.p0; },
                   [&](const CappedCall& c) {
                       doc["p0"] = c.p0;
                       doc["p1"] = c.p1;
                   },
                   [&](const BlackScholesBinary& b) {
                       doc["K"] = b.strike;
                       doc["sigma"] = b.sigma;
                       doc["tau"] = b.tau;
                   },
                   [&](const Logarithmic& l) { doc["p0"] = l.p0; },
                   [&](const CappedPower& c) {
                       doc["p0"] = c.p0;
                       doc["p1"] = extended_json(c.p1);
                       doc["a"] = c.a;
                   },
                   [&](const ConstantProportion& c) {
                       doc["w"] = c.w;
                       doc["C"] = c.c;
                   },
               },
               params);
    return doc;
}

std::optional<PriceInterval> interval_from_json(const json& doc, std::optional<PriceInterval> fallback) {
    const bool has_alpha = doc.contains("alpha");
    const bool has_beta = doc.contains("beta");
    if (!has_alpha && !has_beta) return fallback;
    if (!fallback) fallback = PriceInterval(0.0, ExtendedPrice::infinity());
    const double alpha = has_alpha ? number(doc, "alpha") : fallback->alpha();
    const ExtendedPrice beta = has_beta ? extended(doc["beta"], "beta") : fallback->beta();
    return PriceInterval(alpha, beta);
}

void reject_unknown_keys(const json& doc, const std::set<std::string, std::less<>>& allowed) {
    for (const auto& [key, _] : doc.items())
        if (!allowed.contains(key)) throw PayoffFormatError("unknown field '" + key + "'");
}

}  // namespace

std::vector<std::string_view> catalog_families() {
    return {"cash_or_nothing", "capped_call", "black_scholes_binary", "logarithmic", "capped_power",
            "constant_proportion"};
}

std::vector<std::string_view> catalog_parameter_names(std::string_view family) {
    const auto it = kFamilies.find(family);
    if (it == kFamilies.end()) throw PayoffFormatError("unknown catalog family '" + std::string(family) + "'");
    return it->second;
}

PayoffSpec parse_payoff_file(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw PayoffFormatError(std::string("syntax error: ") + e.what(), line_of(text, e.byte == 0 ? 0 : e.byte - 1));
    }
    if (!doc.is_object()) throw PayoffFormatError("payoff document must be a JSON object", 1);

    const bool is_catalog = doc.contains("catalog");
    const bool is_table = doc.contains("piecewise");
    if (is_catalog == is_table) throw PayoffFormatError("payoff document needs exactly one of 'catalog' or 'piecewise'");

    if (is_catalog) {
        if (!doc["catalog"].is_string()) throw PayoffFormatError("'catalog' must be a string");
        const auto family = doc["catalog"].get<std::string>();
        std::set<std::string, std::less<>> allowed = {"catalog", "alpha", "beta"};
        for (auto key : catalog_parameter_names(family)) allowed.emplace(key);
        reject_unknown_keys(doc, allowed);
        const CatalogParams params = catalog_from_json(family, doc);
        validate_catalog_params(params);
        return make_catalog_payoff(params, interval_from_json(doc, default_interval(params)));
    }

    reject_unknown_keys(doc, {"piecewise", "alpha", "beta"});
    const json& body = doc["piecewise"];
    if (!body.is_object()) throw PayoffFormatError("'piecewise' must be an object");
    reject_unknown_keys(body, {"points", "jumps"});
    if (!body.contains("points")) throw PayoffFormatError("piecewise: missing 'points'");
    PiecewiseTable table;
    table.points = pairs(body["points"], "points");
    if (body.contains("jumps"))
        for (auto [p, size] : pairs(body["jumps"], "jumps")) table.jumps.push_back({p, size});
    std::optional<PriceInterval> fallback;
    if (!table.points.empty()) fallback = PriceInterval(table.points.front().first, table.points.back().first);
    return PayoffSpec::from_table(std::move(table), interval_from_json(doc, fallback));
}

PayoffSpec load_payoff_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw PayoffFormatError("cannot open payoff file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_payoff_file(buf.str());
}

std::string serialize_payoff(const PayoffSpec& spec) {
    json doc;
    if (spec.catalog()) {
        doc = catalog_to_json(*spec.catalog());
    } else {
        json points = json::array();
        json jumps = json::array();
        for (const auto& [p, v] : spec.table()->points) points.push_back({p, v});
        for (const auto& j : spec.table()->jumps) jumps.push_back({j.price, j.size});
        doc["piecewise"] = {{"points", points}, {"jumps", jumps}};
    }
    doc["alpha"] = spec.interval().alpha();
    doc["beta"] = extended_json(spec.interval().beta());
    return doc.dump(2);
}

}  // namespace cfmm
