#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pmda/pmds.hpp"
#include "sha256.hpp"

namespace pmda {

using nlohmann::json;

namespace {

json field_to_json(const FieldPtr& f) {
    return json{{"p", f->p()}, {"m", f->m()}, {"modulus", f->modulus()}};
}

FieldPtr field_from_json(const json& j) {
    return Field::make(j.at("p").get<uint32_t>(), j.at("m").get<uint32_t>(),
                       j.at("modulus").get<std::vector<uint32_t>>());
}

json spec_to_json(const CodeSpec& s) {
    json j;
    j["family"] = family_name(s.family);
    j["mu"] = s.mu;
    j["n"] = s.n;
    j["nprime"] = s.nprime;
    j["r"] = s.r;
    j["s"] = s.s;
    j["field"] = field_to_json(s.field);
    j["subgroup"] = json{{"generator", s.subgroup.generator}, {"order", s.subgroup.order}};
    j["lambda"] = s.lambda;
    j["theta"] = s.theta;
    j["delta"] = s.delta;
    j["d0"] = s.d0 ? json(*s.d0) : json(nullptr);
    j["d1"] = s.d1 ? json(*s.d1) : json(nullptr);
    json info = json::array();
    for (auto [g, n] : s.info_set) info.push_back(json::array({g, n}));
    j["info_set"] = info;
    return j;
}

}  // namespace

std::string CodeSpec::to_json_text(bool pretty) const {
    return pretty ? spec_to_json(*this).dump(2) : spec_to_json(*this).dump();
}

std::string CodeSpec::canonical_text() const { return spec_to_json(*this).dump(); }

std::array<uint8_t, 32> CodeSpec::spec_hash() const { return sha256(canonical_text()); }

CodeSpec CodeSpec::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("spec file is not valid JSON: ") + e.what());
    }
    CodeSpec s;
    try {
        s.family = family_from_name(j.at("family").get<std::string>());
        s.mu = j.at("mu").get<uint32_t>();
        s.n = j.at("n").get<uint32_t>();
        s.nprime = j.at("nprime").get<uint32_t>();
        s.r = j.at("r").get<uint32_t>();
        s.s = j.at("s").get<uint32_t>();
        s.field = field_from_json(j.at("field"));
        s.base = s.family == Family::c4 ? Field::make(s.field->p(), 1) : s.field;
        s.subgroup.field = s.base;
        s.subgroup.generator = j.at("subgroup").at("generator").get<uint32_t>();
        s.subgroup.order = j.at("subgroup").at("order").get<uint32_t>();
        s.lambda = j.at("lambda").get<std::vector<std::vector<uint32_t>>>();
        s.theta = j.at("theta").get<std::vector<uint32_t>>();
        s.delta = j.at("delta").get<std::vector<uint32_t>>();
        if (!j.at("d0").is_null()) s.d0 = j.at("d0").get<uint32_t>();
        if (!j.at("d1").is_null()) s.d1 = j.at("d1").get<uint32_t>();
        for (const auto& e : j.at("info_set"))
            s.info_set.push_back({e.at(0).get<uint32_t>(), e.at(1).get<uint32_t>()});
    } catch (const json::exception& e) {
        throw ValidationError(std::string("spec file is malformed: ") + e.what());
    }
    s.ell = s.family == Family::c3 ? 2u : [&] {
        uint64_t e = 1;
        for (uint32_t i = 0; i < s.nprime; ++i) e *= s.r;
        return static_cast<uint32_t>(e);
    }();
    return s;
}

void CodeSpec::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << to_json_text(true) << "\n";
}

CodeSpec CodeSpec::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    CodeSpec s = from_json_text(ss.str());
    s.validate();
    return s;
}

}  // namespace pmda
