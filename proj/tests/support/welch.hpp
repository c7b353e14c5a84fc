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

#ifndef MUSIC_TESTS_WELCH_HPP
#define MUSIC_TESTS_WELCH_HPP

#include <cmath>
#include <limits>
#include <span>

namespace music::testing {

/// Continued fraction for the regularized incomplete beta (modified Lentz).
inline double beta_continued_fraction(double a, double b, double x)
{
    constexpr double tiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny)
        d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        d = std::abs(d) < tiny ? tiny : d;
        c = 1.0 + aa / c;
        c = std::abs(c) < tiny ? tiny : c;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        d = std::abs(d) < tiny ? tiny : d;
        c = 1.0 + aa / c;
        c = std::abs(c) < tiny ? tiny : c;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15)
            break;
    }
    return h;
}

/// I_x(a, b).
inline double incomplete_beta(double a, double b, double x)
{
    if (x <= 0.0)
        return 0.0;
    if (x >= 1.0)
        return 1.0;
    const double front =
        std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

/// Two-sided tail probability of Student's t with `df` degrees of freedom.
inline double student_t_two_sided(double t, double df)
{
    return incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

struct WelchResult
{
    double mean_a = 0.0;
    double mean_b = 0.0;
    double t = 0.0;
    double df = 0.0;
    double p = 1.0; ///< two-sided
};

inline WelchResult welch(std::span<const double> a, std::span<const double> b)
{
    const auto moments = [](std::span<const double> x, double& mean, double& var) {
        mean = 0.0;
        for (const double v : x)
            mean += v;
        mean /= static_cast<double>(x.size());
        var = 0.0;
        for (const double v : x)
            var += (v - mean) * (v - mean);
        var /= static_cast<double>(x.size() - 1);
    };
    WelchResult r;
    double va = 0.0, vb = 0.0;
    moments(a, r.mean_a, va);
    moments(b, r.mean_b, vb);
    const double sa = va / static_cast<double>(a.size());
    const double sb = vb / static_cast<double>(b.size());
    const double se2 = sa + sb;
    if (!(se2 > 0.0)) {
        r.p = r.mean_a == r.mean_b ? 1.0 : 0.0;
        r.t = r.mean_a == r.mean_b ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), r.mean_a - r.mean_b);
        return r;
    }
    r.t = (r.mean_a - r.mean_b) / std::sqrt(se2);
    r.df = se2 * se2 / (sa * sa / static_cast<double>(a.size() - 1) + sb * sb / static_cast<double>(b.size() - 1));
    r.p = student_t_two_sided(r.t, r.df);
    return r;
}

} // namespace music::testing

#endif // MUSIC_TESTS_WELCH_HPP
