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

#ifndef MUSIC_PROFILES_PROFILES_HPP
#define MUSIC_PROFILES_PROFILES_HPP

#include <music/core/model.hpp>
#include <music/error.hpp>
#include <music/workflow/qos.hpp>
#include <music/workflow/workflow.hpp>

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace music {

enum class Link { WiFi, ThreeG, InterCloud };

inline const char* to_string(Link l)
{
    switch (l) {
    case Link::WiFi: return "wifi";
    case Link::ThreeG: return "3g";
    case Link::InterCloud: return "intercloud";
    }
    return "?";
}

enum class HostTier { OnDevice, Local, Public };

inline const char* to_string(HostTier t)
{
    switch (t) {
    case HostTier::OnDevice: return "device";
    case HostTier::Local: return "local";
    case HostTier::Public: return "public";
    }
    return "?";
}

/// Data sizes are in KB; all per-size rates are per 100 KB.
inline constexpr double kReferenceKB = 2048.0; // the 2 MB measurement point
inline constexpr double kKBPerGB = 1024.0 * 1024.0;

inline constexpr double per_100kb_from_reference(double value_at_reference)
{
    return value_at_reference * 100.0 / kReferenceKB;
}

struct LinkProfile
{
    Link link = Link::WiFi;
    Tier tier = Tier::Local;
    double delay_per_100kb = 0.0;  ///< ms
    double energy_per_100kb = 0.0; ///< mJ on the device
};

struct ComputeProfile
{
    std::string service_class; ///< empty: default for the tier
    HostTier tier = HostTier::Local;
    double proc_delay_per_100kb = 0.0;   ///< ms
    double device_power_per_100kb = 0.0; ///< mJ, on-device only
};

struct PriceModel
{
    double public_compute_rate = 0.52; ///< $/hour, large instance
    double storage_rate = 0.140;       ///< $/GB
    double transfer_rate = 0.1;        ///< $/GB
    double streaming_rate = 0.15;      ///< $/hour
    double cellular_rate = 40.0 / 2.0; ///< $/GB, 40$ per 2 GB plan
    double local_and_wifi_price = 0.0;
};

/// Lookup tables behind the cost functions.
class ProfileSet
{
public:
    /// Averages measured at the 2 MB point, scaled linearly in data size.
    static ProfileSet defaults()
    {
        ProfileSet p;
        p.set_link({Link::WiFi, Tier::Local, per_100kb_from_reference(220.0), per_100kb_from_reference(15435.0)});
        p.set_link({Link::ThreeG, Tier::Local, per_100kb_from_reference(4426.0), per_100kb_from_reference(26156.0)});
        p.set_link({Link::WiFi, Tier::Public, per_100kb_from_reference(240.0), per_100kb_from_reference(19345.0)});
        p.set_link({Link::ThreeG, Tier::Public, per_100kb_from_reference(5128.0), per_100kb_from_reference(27345.0)});
        // Cloud-to-cloud hand-off: the extra WiFi latency of reaching the
        // public cloud instead of the local one.
        const double hop = per_100kb_from_reference(240.0) - per_100kb_from_reference(220.0);
        p.set_link({Link::InterCloud, Tier::Local, hop, 0.0});
        p.set_link({Link::InterCloud, Tier::Public, hop, 0.0});

        p.set_compute({"", HostTier::OnDevice, 400.0, 1500.0});
        p.set_compute({"", HostTier::Local, 30.0, 0.0});
        p.set_compute({"", HostTier::Public, 30.0, 0.0});
        return p;
    }

    void set_link(const LinkProfile& l)
    {
        if (l.delay_per_100kb < 0.0 || l.energy_per_100kb < 0.0)
            throw InvalidInput("link profile values must be non-negative");
        if (l.link == Link::InterCloud && l.energy_per_100kb != 0.0)
            throw InvalidInput("inter-cloud transfers cost the device no energy");
        links_[{l.link, l.tier}] = l;
    }

    void set_compute(const ComputeProfile& c)
    {
        if (c.proc_delay_per_100kb < 0.0 || c.device_power_per_100kb < 0.0)
            throw InvalidInput("compute profile values must be non-negative");
        compute_[{c.service_class, c.tier}] = c;
    }

    void set_price(const PriceModel& m)
    {
        if (m.public_compute_rate < 0 || m.storage_rate < 0 || m.transfer_rate < 0 || m.streaming_rate < 0 ||
            m.cellular_rate < 0 || m.local_and_wifi_price < 0)
            throw InvalidInput("price rates must be non-negative");
        price_ = m;
    }

    [[nodiscard]] const LinkProfile& link(Link l, Tier t) const
    {
        const auto it = links_.find({l, t});
        if (it == links_.end())
            throw MissingProfile(std::string("no ") + to_string(l) + " profile for the " + to_string(t) + " tier");
        return it->second;
    }

    /// Class-specific profile if present, else the tier default.
    [[nodiscard]] const ComputeProfile& compute(const std::string& service_class, HostTier t) const
    {
        if (auto it = compute_.find({service_class, t}); it != compute_.end())
            return it->second;
        if (auto it = compute_.find({std::string(), t}); it != compute_.end())
            return it->second;
        throw MissingProfile("no compute profile for class '" + service_class + "' on " + to_string(t));
    }

    [[nodiscard]] const PriceModel& price() const { return price_; }

    [[nodiscard]] std::vector<LinkProfile> links() const
    {
        std::vector<LinkProfile> out;
        for (const auto& [k, v] : links_)
            out.push_back(v);
        return out;
    }

    [[nodiscard]] std::vector<ComputeProfile> computes() const
    {
        std::vector<ComputeProfile> out;
        for (const auto& [k, v] : compute_)
            out.push_back(v);
        return out;
    }

private:
    std::map<std::tuple<Link, Tier>, LinkProfile> links_;
    std::map<std::tuple<std::string, HostTier>, ComputeProfile> compute_;
    PriceModel price_;
};

/// Everything the cost functions need to know about one invocation.
struct InvocationContext
{
    CellId user_cell;
    HostTier host = HostTier::OnDevice;
    std::optional<CloudId> host_cloud;
    std::string service_class;
    Billing billing = Billing::Compute;
    /// Device-to-cloud link; unset for on-device execution.
    std::optional<Link> link;
    double data_kb = 0.0;
    /// Cloud of the preceding SEQ service, if it ran on a cloud.
    std::optional<CloudId> previous_cloud;
    double time_window_s = 0.0;

    [[nodiscard]] Tier cloud_tier() const { return host == HostTier::Public ? Tier::Public : Tier::Local; }
};

inline HostTier host_tier(const World& world, const Service& s)
{
    const auto c = s.cloud();
    if (!c)
        return HostTier::OnDevice;
    return world.cloud(*c).tier == Tier::Local ? HostTier::Local : HostTier::Public;
}

/// Link rule: a local cloud is reached over WiFi only inside its own access
/// point's coverage; the public cloud over WiFi from any covered cell;
/// 3G everywhere else.
inline std::optional<Link> link_for(const World& world, const Service& s, CellId user_cell)
{
    const auto c = s.cloud();
    if (!c)
        return std::nullopt;
    const CloudNode& node = world.cloud(*c);
    if (node.tier == Tier::Local)
        return node.covers(user_cell) ? Link::WiFi : Link::ThreeG;
    return world.map.cell(user_cell).wifi_covered_by ? Link::WiFi : Link::ThreeG;
}

inline InvocationContext make_context(const World& world, const Service& s, CellId user_cell, double data_kb,
                                      std::optional<ServiceId> previous, double time_window_s)
{
    InvocationContext ctx;
    ctx.user_cell = user_cell;
    ctx.host = host_tier(world, s);
    ctx.host_cloud = s.cloud();
    ctx.service_class = s.profile_class;
    ctx.billing = s.billing;
    ctx.link = link_for(world, s, user_cell);
    ctx.data_kb = data_kb;
    if (previous)
        ctx.previous_cloud = world.service(*previous).cloud();
    ctx.time_window_s = time_window_s;
    return ctx;
}

inline double processing_delay(const InvocationContext& ctx, const ProfileSet& p)
{
    return p.compute(ctx.service_class, ctx.host).proc_delay_per_100kb * ctx.data_kb / 100.0;
}

/// Link component of the delay: device transfer plus any cloud-to-cloud
/// hand-off from the previous SEQ service.
inline double link_delay(const InvocationContext& ctx, const ProfileSet& p)
{
    if (ctx.host == HostTier::OnDevice)
        return 0.0;
    double d = 0.0;
    if (ctx.link)
        d += p.link(*ctx.link, ctx.cloud_tier()).delay_per_100kb * ctx.data_kb / 100.0;
    if (ctx.previous_cloud && ctx.host_cloud && *ctx.previous_cloud != *ctx.host_cloud)
        d += p.link(Link::InterCloud, ctx.cloud_tier()).delay_per_100kb * ctx.data_kb / 100.0;
    return d;
}

/// Processing delay plus communication delay, ms.
inline double service_delay(const InvocationContext& ctx, const ProfileSet& p)
{
    return processing_delay(ctx, p) + link_delay(ctx, p);
}

inline double link_energy(const InvocationContext& ctx, const ProfileSet& p)
{
    if (ctx.host == HostTier::OnDevice || !ctx.link)
        return 0.0;
    return p.link(*ctx.link, ctx.cloud_tier()).energy_per_100kb * ctx.data_kb / 100.0;
}

/// Energy drawn from the device battery, mJ. Cloud-side energy is free to
/// the user.
inline double service_power(const InvocationContext& ctx, const ProfileSet& p)
{
    if (ctx.host == HostTier::OnDevice)
        return p.compute(ctx.service_class, ctx.host).device_power_per_100kb * ctx.data_kb / 100.0;
    return link_energy(ctx, p);
}

/// Price to the user, dollars. `exec_hours` is the billed compute time.
inline double service_price(const InvocationContext& ctx, const ProfileSet& p, double exec_hours)
{
    const PriceModel& m = p.price();
    if (ctx.host == HostTier::OnDevice)
        return 0.0;
    const double gb = ctx.data_kb / kKBPerGB;
    const double cellular = ctx.link == Link::ThreeG ? m.cellular_rate * gb : 0.0;
    if (ctx.host == HostTier::Local)
        return (ctx.link == Link::WiFi ? m.local_and_wifi_price : 0.0) + cellular;
    const double compute = ctx.billing == Billing::Streaming ? m.streaming_rate * ctx.time_window_s / 3600.0
                                                             : m.public_compute_rate * exec_hours;
    return compute + (m.storage_rate + m.transfer_rate) * gb + cellular;
}

inline QoSTriple invocation_qos(const InvocationContext& ctx, const ProfileSet& p)
{
    const double exec_hours = processing_delay(ctx, p) / 3'600'000.0;
    return {service_price(ctx, p, exec_hours), service_power(ctx, p), service_delay(ctx, p)};
}

/// Binds the profile tables to a world so workflows can be costed per entry.
class CostModel
{
public:
    CostModel(const World& world, const ProfileSet& profiles) : world_(&world), profiles_(&profiles) {}

    [[nodiscard]] QoSTriple operator()(ServiceId service, CellId user_cell, const FunctionNode& occurrence,
                                       std::optional<ServiceId> previous, double time_window_s) const
    {
        const Service& s = world_->service(service);
        return invocation_qos(make_context(*world_, s, user_cell, occurrence.input_kb, previous, time_window_s),
                              *profiles_);
    }

    /// Cost callable for every occurrence of an LTW.
    [[nodiscard]] auto for_ltw(const LocationTimeWorkflow& ltw) const
    {
        return [this, &ltw](std::size_t entry, ServiceId s, const FunctionNode& f, std::optional<ServiceId> prev) {
            const LtwEntry& e = ltw.entries[entry];
            return (*this)(s, e.cell, f, prev, e.time_window);
        };
    }

    [[nodiscard]] const World& world() const { return *world_; }
    [[nodiscard]] const ProfileSet& profiles() const { return *profiles_; }

private:
    const World* world_;
    const ProfileSet* profiles_;
};

} // namespace music

#endif // MUSIC_PROFILES_PROFILES_HPP
