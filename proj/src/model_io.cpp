#include "jetfield/model_io.hpp"

#include "jetfield/error.hpp"
#include "jetfield/parser.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace jetfield {

namespace {

using Json = nlohmann::ordered_json;

/// Error text without the "Kind: " prefix.
std::string detail(const Error& e)
{
    std::string_view what = e.what();
    const auto kind = to_string(e.kind());
    if (what.substr(0, kind.size()) == kind && what.substr(kind.size(), 2) == ": ") what.remove_prefix(kind.size() + 2);
    return std::string(what);
}

Expr parse_field(const Json& doc, const std::string& key, const SymbolScope& scope)
{
    if (!doc.is_string()) throw Error(ErrorKind::InvalidModel, "'" + key + "' must be expression text");
    try {
        return normalize(parse_expr(doc.get<std::string>(), scope));
    } catch (const Error& e) {
        throw Error(e.kind(), "in '" + key + "': " + detail(e));
    }
}

std::vector<std::string> name_list(const Json& doc, const char* key)
{
    if (!doc.is_array() || doc.empty())
        throw Error(ErrorKind::InvalidModel, std::string("'") + key + "' must be a non-empty list of names");
    std::vector<std::string> out;
    for (const auto& item : doc) {
        if (!item.is_string()) throw Error(ErrorKind::InvalidModel, std::string("'") + key + "' entries must be names");
        const auto s = item.get<std::string>();
        const bool ok = !s.empty() && !std::isdigit(static_cast<unsigned char>(s[0])) &&
                        std::all_of(s.begin(), s.end(), [](char c) {
                            return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
                        });
        if (!ok) throw Error(ErrorKind::InvalidModel, "'" + s + "' is not an identifier");
        out.push_back(s);
    }
    return out;
}

std::optional<Rational> parameter_value(const std::string& name, const Json& v)
{
    if (v.is_null()) return std::nullopt;
    if (v.is_string()) return Rational::parse(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_number_float()) return Rational::parse(v.dump());
    throw Error(ErrorKind::InvalidModel, "parameter '" + name + "' must be null, a number or a rational string");
}

}  // namespace

FieldModel parse_model(std::string_view json_text, const std::string& name)
{
    Json doc;
    try {
        doc = Json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::InvalidModel, std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorKind::InvalidModel, "a model is a JSON object");
    static const std::set<std::string> known{"base",    "fibers",      "parameters", "lagrangian",
                                             "sources", "hamiltonian", "source_sign"};
    for (const auto& [key, value] : doc.items())
        if (!known.count(key)) throw Error(ErrorKind::InvalidModel, "unknown key '" + key + "'");
    for (const char* key : {"base", "fibers", "lagrangian"})
        if (!doc.contains(key)) throw Error(ErrorKind::InvalidModel, std::string("missing key '") + key + "'");

    FieldModel model;
    model.name = name;
    model.base = name_list(doc["base"], "base");
    model.fibers = name_list(doc["fibers"], "fibers");
    if (doc.contains("parameters")) {
        if (!doc["parameters"].is_object()) throw Error(ErrorKind::InvalidModel, "'parameters' must be an object");
        for (const auto& [pname, value] : doc["parameters"].items()) {
            const auto checked = name_list(Json::array({pname}), "parameters");
            model.parameters.push_back({checked.front(), parameter_value(pname, value)});
        }
    }
    if (doc.contains("source_sign")) {
        const auto& s = doc["source_sign"];
        if (!s.is_number_integer() || (s.get<int>() != 1 && s.get<int>() != -1))
            throw Error(ErrorKind::InvalidModel, "'source_sign' must be 1 or -1");
        model.source_sign = s.get<int>();
    }

    const ChartSet charts(model);
    model.lagrangian = parse_field(doc["lagrangian"], "lagrangian", charts.scope(Space::J1E));
    if (doc.contains("sources")) {
        const auto& s = doc["sources"];
        if (!s.is_array() || static_cast<int>(s.size()) != model.n())
            throw Error(ErrorKind::InvalidModel, "'sources' needs one expression per fiber");
        std::vector<Expr> rho;
        for (std::size_t a = 0; a < s.size(); ++a)
            rho.push_back(parse_field(s[a], "sources[" + std::to_string(a) + "]", charts.scope(Space::E)));
        model.sources = std::move(rho);
    }
    if (doc.contains("hamiltonian"))
        model.hamiltonian = parse_field(doc["hamiltonian"], "hamiltonian", charts.scope(Space::P));
    validate(model, charts);
    return model;
}

FieldModel load_model(const std::string& source)
{
    constexpr std::string_view prefix = "builtin:";
    if (source.rfind(prefix, 0) == 0) return builtin_model(std::string_view(source).substr(prefix.size()));
    std::ifstream in(source);
    if (!in) throw Error(ErrorKind::InvalidModel, "cannot open model file '" + source + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_model(buffer.str(), std::filesystem::path(source).stem().string());
}

std::string print_model(const FieldModel& model)
{
    Json doc;
    doc["base"] = model.base;
    doc["fibers"] = model.fibers;
    Json params = Json::object();
    for (const auto& p : model.parameters) params[p.name] = p.value ? Json(p.value->str()) : Json(nullptr);
    doc["parameters"] = params;
    doc["lagrangian"] = to_string(normalize(model.lagrangian));
    if (model.sources) {
        Json rho = Json::array();
        for (const auto& e : *model.sources) rho.push_back(to_string(normalize(e)));
        doc["sources"] = rho;
    }
    if (model.hamiltonian) doc["hamiltonian"] = to_string(normalize(*model.hamiltonian));
    doc["source_sign"] = model.source_sign;
    return doc.dump(2) + "\n";
}

std::string model_digest(const FieldModel& model)
{
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : print_model(model)) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

const std::vector<std::string>& builtin_names()
{
    static const std::vector<std::string> names{"electrostatics3d", "wave2d", "oscillator1d", "laplace2d"};
    return names;
}

FieldModel builtin_model(std::string_view name)
{
    const char* text = nullptr;
    if (name == "electrostatics3d")
        text = R"({"base": ["x1", "x2", "x3"], "fibers": ["y1"], "parameters": {"rho": null},
                   "lagrangian": "(y1_1^2 + y1_2^2 + y1_3^2)/2", "sources": ["rho"]})";
    else if (name == "wave2d")
        text = R"({"base": ["x1", "x2"], "fibers": ["y1"], "lagrangian": "y1_1^2/2 - y1_2^2/2"})";
    else if (name == "oscillator1d")
        text = R"({"base": ["x1"], "fibers": ["y1"], "lagrangian": "y1_1^2/2 - y1^2/2"})";
    else if (name == "laplace2d")
        text = R"({"base": ["x1", "x2"], "fibers": ["y1"], "lagrangian": "(y1_1^2 + y1_2^2)/2"})";
    if (!text) throw Error(ErrorKind::InvalidModel, "no built-in model named '" + std::string(name) + "'");
    return parse_model(text, std::string(name));
}

}  // namespace jetfield
