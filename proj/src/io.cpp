#include "noise/io.hpp"

#include <cstdio>
#include <fstream>

namespace noise {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json scenario_to_json(const Scenario& sc) {
    json j;
    j["probs"] = sc.space->probs;
    json fields = json::object();
    for (const auto& [name, f] : sc.fields) fields[name] = f.blocks;
    j["fields"] = std::move(fields);
    json rvs = json::object();
    for (const auto& [name, f] : sc.rvs) rvs[name] = f.values;
    j["rvs"] = std::move(rvs);
    if (!sc.atom_names.empty() || sc.algebra.space) j["algebra"] = {{"atoms", sc.atom_names}};
    if (!sc.chain.empty()) {
        json chain = json::array();
        for (const auto& level : sc.chain) {
            json groups = json::array();
            for (std::uint32_t g : level) {
                json idx = json::array();
                for (int a = 0; a < 32; ++a)
                    if (g & (1u << a)) idx.push_back(a);
                groups.push_back(std::move(idx));
            }
            chain.push_back(std::move(groups));
        }
        j["chain"] = std::move(chain);
    }
    if (!sc.generator.empty()) {
        json meta;
        meta["generator"] = sc.generator;
        meta["params"] = sc.params;
        j["metadata"] = std::move(meta);
    }
    return j;
}

Scenario scenario_from_json(const json& j) {
    try {
        Scenario sc;
        if (!j.contains("probs")) throw LoadError("scenario: missing \"probs\"");
        sc.space = make_space(j.at("probs").get<std::vector<double>>());
        if (j.contains("fields"))
            for (const auto& [name, blocks] : j.at("fields").items())
                sc.fields[name] =
                    field_from_blocks(sc.space, blocks.get<std::vector<std::vector<int>>>());
        if (j.contains("rvs"))
            for (const auto& [name, vals] : j.at("rvs").items())
                sc.rvs[name] = make_rv(sc.space, vals.get<std::vector<double>>());
        if (j.contains("algebra")) {
            const auto& alg = j.at("algebra");
            if (alg.contains("atoms")) {
                sc.atom_names = alg.at("atoms").get<std::vector<std::string>>();
                std::vector<SigmaField> atoms;
                for (const auto& name : sc.atom_names) {
                    auto it = sc.fields.find(name);
                    if (it == sc.fields.end())
                        throw LoadError("scenario: algebra atom \"" + name +
                                        "\" is not a declared field");
                    atoms.push_back(it->second);
                }
                sc.algebra = from_independency(sc.space, atoms);
            } else if (alg.contains("elements")) {
                // Explicit element list, taken as-is (no closure or independency
                // check) so that `verify` can diagnose hand-edited algebras.
                sc.algebra.space = sc.space;
                for (const auto& name : alg.at("elements").get<std::vector<std::string>>()) {
                    auto it = sc.fields.find(name);
                    if (it == sc.fields.end())
                        throw LoadError("scenario: algebra element \"" + name +
                                        "\" is not a declared field");
                    sc.algebra.elements.push_back(it->second);
                }
            } else {
                throw LoadError("scenario: algebra needs \"atoms\" or \"elements\"");
            }
        }
        if (j.contains("chain"))
            for (const auto& level : j.at("chain")) {
                std::vector<std::uint32_t> groups;
                for (const auto& idx : level) {
                    std::uint32_t g = 0;
                    for (int a : idx.get<std::vector<int>>()) g |= (1u << a);
                    groups.push_back(g);
                }
                sc.chain.push_back(std::move(groups));
            }
        if (j.contains("metadata")) {
            const auto& meta = j.at("metadata");
            if (meta.contains("generator")) sc.generator = meta.at("generator").get<std::string>();
            if (meta.contains("params"))
                for (const auto& [k, v] : meta.at("params").items())
                    sc.params[k] = v.get<double>();
        }
        return sc;
    } catch (const LoadError&) {
        throw;
    } catch (const std::exception& e) {
        throw LoadError(std::string("scenario: malformed input: ") + e.what());
    }
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw LoadError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return scenario_from_json(j);
}

void save_scenario(const Scenario& sc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw LoadError("cannot open " + path + " for writing");
    out << scenario_to_json(sc).dump(2) << "\n";
}

}  // namespace noise
