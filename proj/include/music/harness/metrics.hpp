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

#ifndef MUSIC_HARNESS_METRICS_HPP
#define MUSIC_HARNESS_METRICS_HPP

#include <music/error.hpp>
#include <music/workflow/qos.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace music {

/// Heuristic utility as a percentage of the optimum.
inline double compute_throughput(double heuristic, double optimal)
{
    if (!(optimal > 0.0))
        throw UndefinedThroughput("optimal utility is " + std::to_string(optimal));
    return heuristic / optimal * 100.0;
}

/// (1 - two_tier / public_only) * 100.
inline double compute_two_tier_gain(double two_tier, double public_only)
{
    if (public_only == 0.0)
        throw UndefinedGain("public-only baseline is zero");
    return (1.0 - two_tier / public_only) * 100.0;
}

struct UserGains
{
    std::optional<double> price, power, delay;
    int undefined = 0; ///< users skipped for a zero baseline, summed over dimensions
};

/// Gain per free dimension, averaged over users with a non-zero baseline.
inline UserGains average_gains(std::span<const QoSTriple> two_tier, std::span<const QoSTriple> public_only,
                               std::optional<Dimension> fixed)
{
    UserGains g;
    for (const Dimension d : all_dimensions) {
        if (fixed && *fixed == d)
            continue;
        double sum = 0.0;
        int n = 0;
        for (std::size_t u = 0; u < two_tier.size(); ++u) {
            try {
                sum += compute_two_tier_gain(two_tier[u][d], public_only[u][d]);
                ++n;
            } catch (const UndefinedGain&) {
                ++g.undefined;
            }
        }
        if (n == 0)
            continue;
        const double mean = sum / n;
        (d == Dimension::Price ? g.price : d == Dimension::Power ? g.power : g.delay) = mean;
    }
    return g;
}

struct MetricsRow
{
    std::string scenario_id;
    std::string algorithm;
    int users = 0;
    int groups = 0;
    double uncertainty_pct = 0.0;
    int repetition = 0;
    double utility = 0.0;
    std::optional<double> throughput_pct;
    double mean_delay_ms = 0.0;
    double mean_power_mj = 0.0;
    double mean_price_usd = 0.0;
    std::optional<double> gain_price_pct;
    std::optional<double> gain_power_pct;
    std::optional<double> gain_delay_pct;
    std::string fixed_dimension = "none";
    std::uint64_t seed = 0;
    bool feasible = true;
};

inline constexpr const char* kCsvHeader =
    "scenario_id,algorithm,users,groups,uncertainty_pct,repetition,utility,throughput_pct,mean_delay_ms,"
    "mean_power_mj,mean_price_usd,gain_price_pct,gain_power_pct,gain_delay_pct,fixed_dimension,seed";

namespace detail {

inline std::string fmt(double v, int digits = 6)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

inline std::string fmt(const std::optional<double>& v, int digits = 6) { return v ? fmt(*v, digits) : ""; }

} // namespace detail

inline void write_csv(std::ostream& os, std::span<const MetricsRow> rows)
{
    using detail::fmt;
    os << kCsvHeader << '\n';
    for (const auto& r : rows)
        os << r.scenario_id << ',' << r.algorithm << ',' << r.users << ',' << r.groups << ','
           << fmt(r.uncertainty_pct, 1) << ',' << r.repetition << ',' << fmt(r.utility) << ','
           << fmt(r.throughput_pct, 3) << ',' << fmt(r.mean_delay_ms, 3) << ',' << fmt(r.mean_power_mj, 3) << ','
           << fmt(r.mean_price_usd, 8) << ',' << fmt(r.gain_price_pct, 3) << ',' << fmt(r.gain_power_pct, 3) << ','
           << fmt(r.gain_delay_pct, 3) << ',' << r.fixed_dimension << ',' << r.seed << '\n';
}

struct Stat
{
    double mean = 0.0;
    double stddev = 0.0; ///< sample standard deviation; 0 for one value
    int n = 0;
};

inline Stat summarize(std::span<const double> xs)
{
    Stat s;
    s.n = static_cast<int>(xs.size());
    if (xs.empty())
        return s;
    for (const double x : xs)
        s.mean += x;
    s.mean /= s.n;
    if (s.n > 1) {
        double ss = 0.0;
        for (const double x : xs)
            ss += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(ss / (s.n - 1));
    }
    return s;
}

struct SummaryRow
{
    std::string algorithm;
    double uncertainty_pct = 0.0;
    std::string fixed_dimension;
    Stat utility, throughput, delay, power, price, gain_price, gain_power, gain_delay;
    int infeasible = 0;
};

/// Mean and sample stddev over repetitions per (algorithm, uncertainty,
/// fixed dimension), in that sort order.
inline std::vector<SummaryRow> summarize_rows(std::span<const MetricsRow> rows)
{
    struct Acc
    {
        std::vector<double> u, t, d, w, p, gp, gw, gd;
        int infeasible = 0;
    };
    std::map<std::tuple<std::string, double, std::string>, Acc> acc;
    for (const auto& r : rows) {
        auto& a = acc[{r.algorithm, r.uncertainty_pct, r.fixed_dimension}];
        a.u.push_back(r.utility);
        if (r.throughput_pct)
            a.t.push_back(*r.throughput_pct);
        a.d.push_back(r.mean_delay_ms);
        a.w.push_back(r.mean_power_mj);
        a.p.push_back(r.mean_price_usd);
        if (r.gain_price_pct)
            a.gp.push_back(*r.gain_price_pct);
        if (r.gain_power_pct)
            a.gw.push_back(*r.gain_power_pct);
        if (r.gain_delay_pct)
            a.gd.push_back(*r.gain_delay_pct);
        a.infeasible += r.feasible ? 0 : 1;
    }
    std::vector<SummaryRow> out;
    for (const auto& [key, a] : acc) {
        SummaryRow s;
        std::tie(s.algorithm, s.uncertainty_pct, s.fixed_dimension) = key;
        s.utility = summarize(a.u);
        s.throughput = summarize(a.t);
        s.delay = summarize(a.d);
        s.power = summarize(a.w);
        s.price = summarize(a.p);
        s.gain_price = summarize(a.gp);
        s.gain_power = summarize(a.gw);
        s.gain_delay = summarize(a.gd);
        s.infeasible = a.infeasible;
        out.push_back(s);
    }
    return out;
}

/// Human-readable report: throughput per algorithm and uncertainty, then the
/// 2-tier gains as an algorithm x fixed-dimension table.
inline void write_table(std::ostream& os, std::span<const MetricsRow> rows)
{
    using detail::fmt;
    const auto summary = summarize_rows(rows);
    const auto pm = [](const Stat& s, int digits) {
        return s.n == 0 ? std::string("-") : fmt(s.mean, digits) + " +/- " + fmt(s.stddev, digits);
    };
    char line[512];
    os << "Throughput (% of optimum), mean +/- sample stddev over repetitions\n";
    std::snprintf(line, sizeof line, "%-12s %8s %22s %22s %5s\n", "algorithm", "uncert%", "throughput%", "utility",
                  "infeas");
    os << line;
    for (const auto& s : summary) {
        if (s.fixed_dimension != "none")
            continue;
        std::snprintf(line, sizeof line, "%-12s %8.1f %22s %22s %5d\n", s.algorithm.c_str(), s.uncertainty_pct,
                      pm(s.throughput, 2).c_str(), pm(s.utility, 4).c_str(), s.infeasible);
        os << line;
    }

    bool any_gain = false;
    for (const auto& s : summary)
        any_gain = any_gain || s.fixed_dimension != "none";
    if (!any_gain)
        return;
    os << "\n2-tier gain vs public-only (%), mean over repetitions\n";
    std::snprintf(line, sizeof line, "%-12s %8s | %-21s | %-21s | %-21s\n", "algorithm", "uncert%", "fixed delay",
                  "fixed power", "fixed price");
    os << line;
    std::snprintf(line, sizeof line, "%-12s %8s | %10s %10s | %10s %10s | %10s %10s\n", "", "", "price", "power",
                  "price", "delay", "power", "delay");
    os << line;
    std::map<std::pair<std::string, double>, std::map<std::string, const SummaryRow*>> table;
    for (const auto& s : summary)
        if (s.fixed_dimension != "none")
            table[{s.algorithm, s.uncertainty_pct}][s.fixed_dimension] = &s;
    const auto cell = [&](const std::map<std::string, const SummaryRow*>& m, const char* fixed, Dimension d) {
        const auto it = m.find(fixed);
        if (it == m.end())
            return std::string("-");
        const Stat& st = d == Dimension::Price ? it->second->gain_price
                         : d == Dimension::Power ? it->second->gain_power
                                                 : it->second->gain_delay;
        return st.n == 0 ? std::string("-") : fmt(st.mean, 2);
    };
    for (const auto& [key, m] : table) {
        std::snprintf(line, sizeof line, "%-12s %8.1f | %10s %10s | %10s %10s | %10s %10s\n", key.first.c_str(),
                      key.second, cell(m, "delay", Dimension::Price).c_str(), cell(m, "delay", Dimension::Power).c_str(),
                      cell(m, "power", Dimension::Price).c_str(), cell(m, "power", Dimension::Delay).c_str(),
                      cell(m, "price", Dimension::Power).c_str(), cell(m, "price", Dimension::Delay).c_str());
        os << line;
    }
}

} // namespace music

#endif // MUSIC_HARNESS_METRICS_HPP
