/*
 * Copyright 2026 The music-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MUSIC_HARNESS_SCENARIO_HPP
#define MUSIC_HARNESS_SCENARIO_HPP

#include <music/allocation/allocators.hpp>
#include <music/allocation/find_service.hpp>
#include <music/allocation/utility.hpp>
#include <music/error.hpp>
#include <music/mobility/uncertainty.hpp>
#include <music/profiles/profiles.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace music {

enum class GroupFormation { Spatial, Random };

/// Everything an experiment needs. Defaults reproduce the reference
/// simulation setup; only `users` is required in a scenario file.
struct Scenario
{
    std::string id = "default";

    // grid
    int grid_width = 15;
    int grid_height = 15;
    double cell_size = 100.0; ///< meters

    // local clouds
    int local_cloud_count = 8;
    std::vector<int> local_cloud_cells; ///< explicit sites; overrides the count
    int local_capacity = 25;            ///< users admitted per local cloud
    int wifi_cells = 6;                 ///< cells covered besides the site itself

    // public tier and service catalog
    int public_clouds = 1;
    int local_per_function = 2; ///< local services per function
    int public_per_function = 1; ///< per public cloud
    bool device_services = true; ///< every user can run every function locally
    std::vector<std::string> streaming_functions{"stream"};

    // population
    int users = 0;
    int groups = 0; ///< 0: single-user study
    GroupFormation group_formation = GroupFormation::Spatial;

    // mobility
    double random_waypoint_share = 0.5;
    double speed_min = 1.0;
    double speed_max = 10.0;
    double pause_max = 10.0;
    double duration = 600.0; ///< seconds of predicted mobility
    int ltw_entries = 3;

    // applications
    std::map<std::string, std::string> templates{
        {"OCRS", "seq(image_filter, ocr, text_to_speech)"},
        {"VS", "seq(transcode, stream)"},
        {"MFS", "seq(upload, and(edit, transcode), download)"},
    };
    std::map<std::string, double> single_mix{{"OCRS", 0.5}, {"VS", 0.5}};
    std::string group_template = "MFS";
    double data_kb_min = 1024.0;
    double data_kb_max = 5120.0;

    // experiment
    std::vector<double> uncertainty_pct{0.0};
    PerturbMode uncertainty_mode = PerturbMode::Both;
    ConstraintVector budgets;
    std::vector<std::string> algorithms{"music", "rsa", "greedy"};
    AnnealingParams annealing;
    GreedyContext greedy_context = GreedyContext::CurrentCell;
    bool gains = false;
    bool throughput = true;
    ProfileSet profiles = ProfileSet::defaults();
    int repetitions = 15;
    std::uint64_t seed = 1;

    void validate() const;
};

namespace detail {

inline void fail(const std::string& path, const std::string& what)
{
    throw ScenarioError(path + ": " + what);
}

class ScenarioReader
{
public:
    explicit ScenarioReader(Scenario& s) : s_(s) {}

    void read(const nlohmann::json& j)
    {
        if (!j.is_object())
            fail("<root>", "a scenario is a JSON object");
        if (!j.contains("users"))
            fail("<root>", "missing required field(s): users");
        static const std::set<std::string> known{
            "id", "users", "grid", "local_clouds", "public_clouds", "catalog", "groups", "mobility", "ltw",
            "templates", "single_mix", "group_template", "data_kb", "uncertainty_pct", "uncertainty_mode",
            "budgets", "algorithms", "annealing", "greedy_context", "gains", "throughput", "profiles", "repetitions", "seed"};
        check_keys(j, "", known);

        get(j, "id", s_.id);
        get_int(j, "users", s_.users, 0);
        if (const auto* g = object(j, "grid")) {
            check_keys(*g, "grid.", {"width", "height", "cell_size_m"});
            get_int(*g, "grid.width", s_.grid_width, 1);
            get_int(*g, "grid.height", s_.grid_height, 1);
            get_positive(*g, "grid.cell_size_m", s_.cell_size);
        }
        if (const auto* c = object(j, "local_clouds")) {
            check_keys(*c, "local_clouds.", {"count", "cells", "capacity", "wifi_cells"});
            get_int(*c, "local_clouds.count", s_.local_cloud_count, 0);
            if (c->contains("cells")) {
                const auto& cells = c->at("cells");
                if (!cells.is_array())
                    fail("local_clouds.cells", "expected an array of cell ids");
                s_.local_cloud_cells.clear();
                for (std::size_t i = 0; i < cells.size(); ++i) {
                    if (!cells[i].is_number_integer())
                        fail("local_clouds.cells[" + std::to_string(i) + "]", "expected an integer cell id");
                    s_.local_cloud_cells.push_back(cells[i].get<int>());
                }
            }
            get_int(*c, "local_clouds.capacity", s_.local_capacity, 0);
            get_int(*c, "local_clouds.wifi_cells", s_.wifi_cells, 0);
        }
        get_int(j, "public_clouds", s_.public_clouds, 0);
        if (const auto* c = object(j, "catalog")) {
            check_keys(*c, "catalog.", {"local_per_function", "public_per_function", "device", "streaming_functions"});
            get_int(*c, "catalog.local_per_function", s_.local_per_function, 0);
            get_int(*c, "catalog.public_per_function", s_.public_per_function, 0);
            get_bool(*c, "catalog.device", s_.device_services);
            if (c->contains("streaming_functions"))
                s_.streaming_functions = strings(c->at("streaming_functions"), "catalog.streaming_functions");
        }
        if (const auto* g = object(j, "groups")) {
            check_keys(*g, "groups.", {"count", "formation"});
            get_int(*g, "groups.count", s_.groups, 0);
            if (g->contains("formation")) {
                const auto f = text(g->at("formation"), "groups.formation");
                if (f == "spatial")
                    s_.group_formation = GroupFormation::Spatial;
                else if (f == "random")
                    s_.group_formation = GroupFormation::Random;
                else
                    fail("groups.formation", "expected \"spatial\" or \"random\"");
            }
        }
        if (const auto* m = object(j, "mobility")) {
            check_keys(*m, "mobility.", {"random_waypoint_share", "speed_min", "speed_max", "pause_max", "duration_s"});
            get_fraction(*m, "mobility.random_waypoint_share", s_.random_waypoint_share);
            get_positive(*m, "mobility.speed_min", s_.speed_min);
            get_positive(*m, "mobility.speed_max", s_.speed_max);
            get_non_negative(*m, "mobility.pause_max", s_.pause_max);
            get_positive(*m, "mobility.duration_s", s_.duration);
        }
        if (const auto* l = object(j, "ltw")) {
            check_keys(*l, "ltw.", {"entries"});
            get_int(*l, "ltw.entries", s_.ltw_entries, 1);
        }
        if (const auto* t = object(j, "templates")) {
            s_.templates.clear();
            for (const auto& [name, expr] : t->items())
                s_.templates[name] = text(expr, "templates." + name);
        }
        if (const auto* m = object(j, "single_mix")) {
            s_.single_mix.clear();
            for (const auto& [name, share] : m->items()) {
                if (!share.is_number())
                    fail("single_mix." + name, "expected a number");
                s_.single_mix[name] = share.get<double>();
            }
        }
        if (j.contains("group_template"))
            s_.group_template = text(j.at("group_template"), "group_template");
        if (j.contains("data_kb")) {
            const auto& d = j.at("data_kb");
            if (!d.is_array() || d.size() != 2 || !d[0].is_number() || !d[1].is_number())
                fail("data_kb", "expected [min, max] in KB");
            s_.data_kb_min = d[0].get<double>();
            s_.data_kb_max = d[1].get<double>();
        }
        if (j.contains("uncertainty_pct")) {
            const auto& u = j.at("uncertainty_pct");
            s_.uncertainty_pct.clear();
            if (u.is_number())
                s_.uncertainty_pct.push_back(u.get<double>());
            else if (u.is_array())
                for (std::size_t i = 0; i < u.size(); ++i) {
                    if (!u[i].is_number())
                        fail("uncertainty_pct[" + std::to_string(i) + "]", "expected a number");
                    s_.uncertainty_pct.push_back(u[i].get<double>());
                }
            else
                fail("uncertainty_pct", "expected a number or an array of numbers");
        }
        if (j.contains("uncertainty_mode")) {
            const auto m = text(j.at("uncertainty_mode"), "uncertainty_mode");
            if (m == "location")
                s_.uncertainty_mode = PerturbMode::PerturbLocation;
            else if (m == "service")
                s_.uncertainty_mode = PerturbMode::PerturbService;
            else if (m == "both")
                s_.uncertainty_mode = PerturbMode::Both;
            else
                fail("uncertainty_mode", "expected \"location\", \"service\" or \"both\"");
        }
        if (const auto* b = object(j, "budgets")) {
            check_keys(*b, "budgets.", {"price", "power", "delay"});
            budget(*b, "price", s_.budgets.price);
            budget(*b, "power", s_.budgets.power);
            budget(*b, "delay", s_.budgets.delay);
        }
        if (j.contains("algorithms"))
            s_.algorithms = strings(j.at("algorithms"), "algorithms");
        if (const auto* a = object(j, "annealing")) {
            check_keys(*a, "annealing.", {"max_iter", "d_th_cells", "d_r_cells", "it", "t0", "alpha",
                                          "literal_acceptance", "assembly_retries"});
            get_int(*a, "annealing.max_iter", s_.annealing.max_iter, 0);
            get_positive(*a, "annealing.d_th_cells", s_.annealing.d_th);
            get_positive(*a, "annealing.d_r_cells", s_.annealing.d_r);
            get_int(*a, "annealing.it", s_.annealing.it, 1);
            get_positive(*a, "annealing.t0", s_.annealing.t0);
            get_positive(*a, "annealing.alpha", s_.annealing.alpha);
            get_bool(*a, "annealing.literal_acceptance", s_.annealing.literal_acceptance);
            get_int(*a, "annealing.assembly_retries", s_.annealing.assembly_retries, 1);
        }
        if (j.contains("greedy_context")) {
            const auto g = text(j.at("greedy_context"), "greedy_context");
            if (g == "current_cell")
                s_.greedy_context = GreedyContext::CurrentCell;
            else if (g == "entry_cell")
                s_.greedy_context = GreedyContext::EntryCell;
            else
                fail("greedy_context", "expected \"current_cell\" or \"entry_cell\"");
        }
        get_bool(j, "gains", s_.gains);
        get_bool(j, "throughput", s_.throughput);
        if (const auto* p = object(j, "profiles"))
            read_profiles(*p);
        get_int(j, "repetitions", s_.repetitions, 1);
        if (j.contains("seed")) {
            const auto& v = j.at("seed");
            if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
                fail("seed", "expected a non-negative integer");
            s_.seed = v.get<std::uint64_t>();
        }
    }

private:
    void read_profiles(const nlohmann::json& p)
    {
        check_keys(p, "profiles.", {"links", "compute", "prices"});
        const auto rows = [](const nlohmann::json& v, const std::string& path) {
            if (!v.is_array())
                fail(path, "expected an array of objects");
            for (std::size_t i = 0; i < v.size(); ++i)
                if (!v[i].is_object())
                    fail(path + "[" + std::to_string(i) + "]", "expected an object");
            return v;
        };
        try {
            if (p.contains("links")) {
                const auto v = rows(p.at("links"), "profiles.links");
                for (std::size_t i = 0; i < v.size(); ++i) {
                    const std::string at = "profiles.links[" + std::to_string(i) + "].";
                    check_keys(v[i], at, {"link", "tier", "delay_ms_per_100kb", "energy_mj_per_100kb"});
                    LinkProfile l;
                    const auto link = v[i].contains("link") ? text(v[i].at("link"), at + "link") : "";
                    if (link == "wifi")
                        l.link = Link::WiFi;
                    else if (link == "3g")
                        l.link = Link::ThreeG;
                    else if (link == "intercloud")
                        l.link = Link::InterCloud;
                    else
                        fail(at + "link", "expected \"wifi\", \"3g\" or \"intercloud\"");
                    const auto tier = v[i].contains("tier") ? text(v[i].at("tier"), at + "tier") : "";
                    if (tier != "local" && tier != "public")
                        fail(at + "tier", "expected \"local\" or \"public\"");
                    l.tier = tier == "local" ? Tier::Local : Tier::Public;
                    get_non_negative(v[i], at + "delay_ms_per_100kb", l.delay_per_100kb);
                    get_non_negative(v[i], at + "energy_mj_per_100kb", l.energy_per_100kb);
                    s_.profiles.set_link(l);
                }
            }
            if (p.contains("compute")) {
                const auto v = rows(p.at("compute"), "profiles.compute");
                for (std::size_t i = 0; i < v.size(); ++i) {
                    const std::string at = "profiles.compute[" + std::to_string(i) + "].";
                    check_keys(v[i], at, {"tier", "class", "delay_ms_per_100kb", "energy_mj_per_100kb"});
                    ComputeProfile c;
                    const auto tier = v[i].contains("tier") ? text(v[i].at("tier"), at + "tier") : "";
                    if (tier == "device")
                        c.tier = HostTier::OnDevice;
                    else if (tier == "local")
                        c.tier = HostTier::Local;
                    else if (tier == "public")
                        c.tier = HostTier::Public;
                    else
                        fail(at + "tier", "expected \"device\", \"local\" or \"public\"");
                    get(v[i], at + "class", c.service_class);
                    c = merged(c);
                    get_non_negative(v[i], at + "delay_ms_per_100kb", c.proc_delay_per_100kb);
                    get_non_negative(v[i], at + "energy_mj_per_100kb", c.device_power_per_100kb);
                    s_.profiles.set_compute(c);
                }
            }
            if (const auto* m = object(p, "prices")) {
                check_keys(*m, "profiles.prices.", {"public_compute_usd_per_h", "storage_usd_per_gb",
                                                    "transfer_usd_per_gb", "streaming_usd_per_h",
                                                    "cellular_usd_per_gb", "local_and_wifi_usd"});
                PriceModel pm = s_.profiles.price();
                get_non_negative(*m, "profiles.prices.public_compute_usd_per_h", pm.public_compute_rate);
                get_non_negative(*m, "profiles.prices.storage_usd_per_gb", pm.storage_rate);
                get_non_negative(*m, "profiles.prices.transfer_usd_per_gb", pm.transfer_rate);
                get_non_negative(*m, "profiles.prices.streaming_usd_per_h", pm.streaming_rate);
                get_non_negative(*m, "profiles.prices.cellular_usd_per_gb", pm.cellular_rate);
                get_non_negative(*m, "profiles.prices.local_and_wifi_usd", pm.local_and_wifi_price);
                s_.profiles.set_price(pm);
            }
        } catch (const InvalidInput& e) {
            fail("profiles", e.what());
        }
    }

    /// Starting point for a compute row: the current entry for its class and
    /// tier, so that a row may override one value only.
    ComputeProfile merged(const ComputeProfile& c) const
    {
        try {
            ComputeProfile out = s_.profiles.compute(c.service_class, c.tier);
            out.service_class = c.service_class;
            out.tier = c.tier;
            return out;
        } catch (const MissingProfile&) {
            return c;
        }
    }

    static void check_keys(const nlohmann::json& j, const std::string& prefix, const std::set<std::string>& known)
    {
        for (const auto& [k, v] : j.items())
            if (!known.contains(k))
                fail(prefix + k, "unknown field");
    }

    static const nlohmann::json* object(const nlohmann::json& j, const std::string& key)
    {
        if (!j.contains(key))
            return nullptr;
        if (!j.at(key).is_object())
            fail(key, "expected an object");
        return &j.at(key);
    }

    static std::string text(const nlohmann::json& v, const std::string& path)
    {
        if (!v.is_string())
            fail(path, "expected a string");
        return v.get<std::string>();
    }

    static std::vector<std::string> strings(const nlohmann::json& v, const std::string& path)
    {
        if (!v.is_array())
            fail(path, "expected an array of strings");
        std::vector<std::string> out;
        for (std::size_t i = 0; i < v.size(); ++i)
            out.push_back(text(v[i], path + "[" + std::to_string(i) + "]"));
        return out;
    }

    static std::string leaf(const std::string& path) { return path.substr(path.rfind('.') + 1); }

    static void get(const nlohmann::json& j, const std::string& path, std::string& out)
    {
        if (j.contains(leaf(path)))
            out = text(j.at(leaf(path)), path);
    }

    static void get_int(const nlohmann::json& j, const std::string& path, int& out, int min)
    {
        const auto key = leaf(path);
        if (!j.contains(key))
            return;
        const auto& v = j.at(key);
        if (!v.is_number_integer())
            fail(path, "expected an integer");
        const auto x = v.get<long long>();
        if (x < min || x > std::numeric_limits<int>::max())
            fail(path, "must be at least " + std::to_string(min));
        out = static_cast<int>(x);
    }

    static void get_bool(const nlohmann::json& j, const std::string& path, bool& out)
    {
        const auto key = leaf(path);
        if (!j.contains(key))
            return;
        if (!j.at(key).is_boolean())
            fail(path, "expected true or false");
        out = j.at(key).get<bool>();
    }

    static void get_number(const nlohmann::json& j, const std::string& path, double& out)
    {
        const auto key = leaf(path);
        if (!j.contains(key))
            return;
        if (!j.at(key).is_number())
            fail(path, "expected a number");
        out = j.at(key).get<double>();
    }

    static void get_positive(const nlohmann::json& j, const std::string& path, double& out)
    {
        get_number(j, path, out);
        if (!(out > 0.0))
            fail(path, "must be positive");
    }

    static void get_non_negative(const nlohmann::json& j, const std::string& path, double& out)
    {
        get_number(j, path, out);
        if (!(out >= 0.0))
            fail(path, "must be non-negative");
    }

    static void get_fraction(const nlohmann::json& j, const std::string& path, double& out)
    {
        get_number(j, path, out);
        if (!(out >= 0.0 && out <= 1.0))
            fail(path, "must lie in [0, 1]");
    }

    static void budget(const nlohmann::json& j, const std::string& key, double& out)
    {
        if (!j.contains(key))
            return;
        const auto& v = j.at(key);
        if (v.is_null()) {
            out = std::numeric_limits<double>::infinity();
            return;
        }
        if (!v.is_number() || v.get<double>() < 0.0)
            fail("budgets." + key, "expected a non-negative number or null");
        out = v.get<double>();
    }

    Scenario& s_;
};

} // namespace detail

inline void Scenario::validate() const
{
    using detail::fail;
    if (users < 0)
        fail("users", "must be non-negative");
    if (local_cloud_cells.empty() && local_cloud_count > grid_width * grid_height)
        fail("local_clouds.count", "more local clouds than cells");
    for (std::size_t i = 0; i < local_cloud_cells.size(); ++i)
        if (local_cloud_cells[i] < 0 || local_cloud_cells[i] >= grid_width * grid_height)
            fail("local_clouds.cells[" + std::to_string(i) + "]", "cell is off the grid");
    if (!(speed_min <= speed_max))
        fail("mobility.speed_max", "must be at least speed_min");
    if (!(data_kb_min > 0.0 && data_kb_min <= data_kb_max))
        fail("data_kb", "expected 0 < min <= max");
    if (public_clouds * public_per_function == 0 && local_per_function == 0 && !device_services)
        fail("catalog", "no service can realize any function");
    for (const auto& [name, expr] : templates) {
        try {
            (void)parse_workflow_expression(expr);
        } catch (const InvalidWorkflow& e) {
            fail("templates." + name, e.what());
        }
    }
    if (groups == 0) {
        double sum = 0.0;
        for (const auto& [name, share] : single_mix) {
            if (!templates.contains(name))
                fail("single_mix." + name, "no such template");
            if (share < 0.0)
                fail("single_mix." + name, "shares must be non-negative");
            sum += share;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            fail("single_mix", "shares sum to " + std::to_string(sum) + ", expected 1");
    } else {
        if (!templates.contains(group_template))
            fail("group_template", "no such template");
        if (groups > users)
            fail("groups.count", "more groups than users");
    }
    for (const double u : uncertainty_pct)
        if (!(u >= 0.0 && u <= 100.0))
            fail("uncertainty_pct", "values must lie in [0, 100]");
    static const std::set<std::string> algos{"music", "gmusic", "rsa", "greedy", "bruteforce"};
    for (const auto& a : algorithms)
        if (!algos.contains(a))
            fail("algorithms", "unknown algorithm '" + a + "'");
    try {
        annealing.validate();
    } catch (const InvalidInput& e) {
        fail("annealing", e.what());
    }
    try {
        budgets.validate();
    } catch (const InvalidInput& e) {
        fail("budgets", e.what());
    }
}

inline Scenario parse_scenario(const std::string& text)
{
    nlohmann::json j;
    if (text.find_first_not_of(" \t\r\n") == std::string::npos)
        detail::fail("<root>", "empty scenario; missing required field(s): users");
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        detail::fail("<root>", std::string("not valid JSON: ") + e.what());
    }
    Scenario s;
    detail::ScenarioReader(s).read(j);
    s.validate();
    return s;
}

inline Scenario load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ScenarioError(path + ": cannot open file");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario(buf.str());
    } catch (const ScenarioError& e) {
        throw ScenarioError(path + ": " + e.what());
    }
}

} // namespace music

#endif // MUSIC_HARNESS_SCENARIO_HPP
