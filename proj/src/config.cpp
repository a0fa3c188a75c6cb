#include "aoicontract/config.hpp"

#include <fstream>
#include <sstream>

#include "aoicontract/errors.hpp"

namespace aoicontract {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json delay_json(const flsim::StageDelay& d) { return {{"lo", d.lo}, {"hi", d.hi}}; }

// keys whose default is null but which accept a number
bool nullable_number(const std::string& path) { return path == "solver.f_max"; }

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

const char* kind(const json& v) {
    if (v.is_object()) return "object";
    if (v.is_array()) return "array";
    if (v.is_string()) return "string";
    if (v.is_boolean()) return "boolean";
    if (v.is_number()) return "number";
    return "null";
}

void merge_checked(ordered_json& base, const json& patch, const std::string& path) {
    if (!patch.is_object()) throw ConfigError((path.empty() ? std::string("config") : path) + ": expected an object");
    for (auto it = patch.begin(); it != patch.end(); ++it) {
        const std::string key = join(path, it.key());
        if (!base.contains(it.key())) throw ConfigError(key + ": unknown configuration key");
        auto& slot = base[it.key()];
        const auto& v = it.value();
        if (slot.is_object()) {
            merge_checked(slot, v, key);
            continue;
        }
        const bool ok = (slot.is_number() && v.is_number()) || (slot.is_string() && v.is_string()) ||
                        (slot.is_boolean() && v.is_boolean()) || (slot.is_array() && v.is_array()) ||
                        (nullable_number(key) && (v.is_null() || v.is_number()));
        if (!ok) {
            const char* want = nullable_number(key) ? "number or null" : kind(slot);
            throw ConfigError(key + ": expected " + std::string(want) + ", got " + kind(v));
        }
        slot = v;
    }
}

const json& at(const json& j, const std::string& path) {
    const json* cur = &j;
    std::stringstream ss(path);
    std::string part;
    while (std::getline(ss, part, '.')) {
        cur = cur->is_array() ? &cur->at(static_cast<std::size_t>(std::stoul(part))) : &cur->at(part);
    }
    return *cur;
}

double number(const json& j, const std::string& path) {
    const auto& v = at(j, path);
    if (!v.is_number()) throw ConfigError(path + ": expected number");
    return v.get<double>();
}

long long integer(const json& j, const std::string& path) {
    const auto& v = at(j, path);
    if (!v.is_number_integer()) throw ConfigError(path + ": expected integer, got " + v.dump());
    return v.get<long long>();
}

std::string string(const json& j, const std::string& path) {
    const auto& v = at(j, path);
    if (!v.is_string()) throw ConfigError(path + ": expected string");
    return v.get<std::string>();
}

bool boolean(const json& j, const std::string& path) {
    const auto& v = at(j, path);
    if (!v.is_boolean()) throw ConfigError(path + ": expected boolean");
    return v.get<bool>();
}

flsim::StageDelay delay(const json& j, const std::string& path) {
    const auto& v = at(j, path);
    if (v.is_number()) return flsim::StageDelay::fixed(v.get<double>());
    if (!v.is_object()) throw ConfigError(path + ": expected {\"lo\", \"hi\"} or number");
    for (auto it = v.begin(); it != v.end(); ++it) {
        if (it.key() != "lo" && it.key() != "hi") throw ConfigError(path + "." + it.key() + ": unknown configuration key");
    }
    return {number(j, path + ".lo"), number(j, path + ".hi")};
}

int to_int(long long v, const std::string& path) {
    if (v < -2147483647LL || v > 2147483647LL) throw ConfigError(path + ": integer out of range");
    return static_cast<int>(v);
}

}  // namespace

ordered_json scenario_to_json(const ScenarioConfig& c) {
    ordered_json j;
    j["timing"] = {{"t", c.timing.t}, {"a", c.timing.a}, {"c_min", c.timing.c_min}, {"c_max", c.timing.c_max}};
    j["population"] = {{"M", c.provider.M},
                       {"N", c.population.N},
                       {"gamma_min", c.population.gamma_min},
                       {"gamma_max", c.population.gamma_max},
                       {"distribution", c.population.distribution == TypeDistribution::Grid ? "grid" : "sampled"}};
    j["provider"] = {{"beta", c.provider.beta},
                     {"K", c.provider.K},
                     {"H", c.provider.H},
                     {"alpha", c.alpha},
                     {"alpha_per_type", c.alpha_per_type}};
    ordered_json solver;
    solver["f_min"] = c.solver.f_min;
    solver["f_max"] = c.solver.f_max ? ordered_json(*c.solver.f_max) : ordered_json();
    solver["phi"] = c.solver.phi;
    solver["variant"] = to_string(c.solver.variant);
    j["solver"] = solver;
    j["mechanism"] = to_string(c.mechanism);
    j["seed"] = c.seed;
    j["sweep"] = {{"a_values", c.a_values}, {"alpha_values", c.alpha_values}};
    const auto& w = c.workflow;
    ordered_json wf;
    wf["publish"] = delay_json(w.publish);
    wf["relay_verify"] = delay_json(w.relay_verify);
    wf["dispatch"] = delay_json(w.dispatch);
    wf["train"] = delay_json(w.train);
    wf["upload"] = delay_json(w.upload);
    wf["relay_check"] = delay_json(w.relay_check);
    wf["relay_transfer"] = delay_json(w.relay_transfer);
    wf["aggregate"] = delay_json(w.aggregate);
    wf["distribute"] = delay_json(w.distribute);
    wf["physical_workers"] = w.physical_workers;
    wf["virtual_workers"] = w.virtual_workers;
    auto overrides = ordered_json::array();
    for (const auto& d : w.train_overrides) overrides.push_back(delay_json(d));
    wf["train_overrides"] = overrides;
    wf["fixed_consensus"] = w.fixed_consensus;
    wf["epochs"] = w.epochs;
    j["workflow"] = wf;
    return j;
}

ScenarioConfig scenario_from_json(const json& user) {
    ordered_json doc = scenario_to_json(ScenarioConfig{});
    if (!user.is_null()) merge_checked(doc, user, "");
    const json j = doc;

    ScenarioConfig c;
    try {
        c.timing.t = number(j, "timing.t");
        c.timing.a = to_int(integer(j, "timing.a"), "timing.a");
        c.timing.c_min = to_int(integer(j, "timing.c_min"), "timing.c_min");
        c.timing.c_max = to_int(integer(j, "timing.c_max"), "timing.c_max");

        c.provider.M = to_int(integer(j, "population.M"), "population.M");
        c.population.N = to_int(integer(j, "population.N"), "population.N");
        c.population.gamma_min = number(j, "population.gamma_min");
        c.population.gamma_max = number(j, "population.gamma_max");
        const auto dist = string(j, "population.distribution");
        if (dist == "grid") {
            c.population.distribution = TypeDistribution::Grid;
        } else if (dist == "sampled") {
            c.population.distribution = TypeDistribution::Sampled;
        } else {
            throw ConfigError("population.distribution: expected \"grid\" or \"sampled\", got \"" + dist + "\"");
        }

        c.provider.beta = number(j, "provider.beta");
        c.provider.K = number(j, "provider.K");
        c.provider.H = number(j, "provider.H");
        c.alpha = number(j, "provider.alpha");
        const auto& apt = at(j, "provider.alpha_per_type");
        for (std::size_t i = 0; i < apt.size(); ++i) {
            c.alpha_per_type.push_back(number(j, "provider.alpha_per_type." + std::to_string(i)));
        }

        c.solver.f_min = number(j, "solver.f_min");
        if (!at(j, "solver.f_max").is_null()) c.solver.f_max = number(j, "solver.f_max");
        c.solver.phi = number(j, "solver.phi");
        try {
            c.solver.variant = parse_variant(string(j, "solver.variant").c_str());
        } catch (const DomainError& e) {
            throw ConfigError(std::string("solver.variant: ") + e.what());
        }
        try {
            c.mechanism = parse_mechanism(string(j, "mechanism"));
        } catch (const DomainError& e) {
            throw ConfigError(std::string("mechanism: ") + e.what());
        }
        const auto& seed = at(j, "seed");
        if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
            throw ConfigError("seed: expected unsigned integer");
        }
        c.seed = seed.get<std::uint64_t>();

        c.a_values.clear();
        const auto& av = at(j, "sweep.a_values");
        for (std::size_t i = 0; i < av.size(); ++i) {
            const auto key = "sweep.a_values." + std::to_string(i);
            c.a_values.push_back(to_int(integer(j, key), key));
        }
        c.alpha_values.clear();
        const auto& alv = at(j, "sweep.alpha_values");
        for (std::size_t i = 0; i < alv.size(); ++i) {
            c.alpha_values.push_back(number(j, "sweep.alpha_values." + std::to_string(i)));
        }

        auto& w = c.workflow;
        w.publish = delay(j, "workflow.publish");
        w.relay_verify = delay(j, "workflow.relay_verify");
        w.dispatch = delay(j, "workflow.dispatch");
        w.train = delay(j, "workflow.train");
        w.upload = delay(j, "workflow.upload");
        w.relay_check = delay(j, "workflow.relay_check");
        w.relay_transfer = delay(j, "workflow.relay_transfer");
        w.aggregate = delay(j, "workflow.aggregate");
        w.distribute = delay(j, "workflow.distribute");
        w.physical_workers = to_int(integer(j, "workflow.physical_workers"), "workflow.physical_workers");
        w.virtual_workers = to_int(integer(j, "workflow.virtual_workers"), "workflow.virtual_workers");
        const auto& tov = at(j, "workflow.train_overrides");
        for (std::size_t i = 0; i < tov.size(); ++i) {
            w.train_overrides.push_back(delay(j, "workflow.train_overrides." + std::to_string(i)));
        }
        w.fixed_consensus = boolean(j, "workflow.fixed_consensus");
        w.epochs = to_int(integer(j, "workflow.epochs"), "workflow.epochs");
        w.seed = c.seed;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

void apply_override(ordered_json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "': expected key=value");
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error&) {
        value = text;
    }
    // build {"a": {"b": value}} and merge it with the usual checks
    std::vector<std::string> parts;
    std::stringstream ss(key);
    for (std::string p; std::getline(ss, p, '.');) {
        if (p.empty()) throw ConfigError("override '" + assignment + "': empty key segment");
        parts.push_back(p);
    }
    json patch = value;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) patch = json{{*it, patch}};
    merge_checked(doc, patch, "");
}

ordered_json load_config_document(const std::filesystem::path& path, std::span<const std::string> overrides) {
    ordered_json doc = scenario_to_json(ScenarioConfig{});
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw ConfigError("config: cannot open " + path.string());
        std::stringstream buf;
        buf << in.rdbuf();
        const std::string text = buf.str();
        if (text.find_first_not_of(" \t\r\n") != std::string::npos) {
            json user;
            try {
                user = json::parse(text);
            } catch (const json::parse_error& e) {
                throw ConfigError("config: " + path.string() + ": " + e.what());
            }
            merge_checked(doc, user, "");
        }
    }
    for (const auto& o : overrides) apply_override(doc, o);
    return doc;
}

ScenarioConfig load_config(const std::filesystem::path& path, std::span<const std::string> overrides) {
    return scenario_from_json(load_config_document(path, overrides));
}

}  // namespace aoicontract
