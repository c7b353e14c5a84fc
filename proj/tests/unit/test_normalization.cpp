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

#include <music/random.hpp>
#include <music/workflow/normalization.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace music;

TEST(Normalization, HandValues)
{
    EXPECT_DOUBLE_EQ(normalize_value(10.0, 10.0, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(normalize_value(0.0, 10.0, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(normalize_value(8.0, 10.0, 0.0), 0.2);
    EXPECT_DOUBLE_EQ(normalize_value(5.0, 5.0, 5.0), 1.0);
}

TEST(Normalization, RejectsOutOfRange)
{
    EXPECT_THROW(normalize_value(1.0, 0.0, 2.0), ExtremaMismatch);
    EXPECT_THROW(normalize_value(11.0, 10.0, 0.0), ExtremaMismatch);
    EXPECT_THROW(service_extrema({}), NoRealizingService);
}

TEST(Normalization, TotalIsEuclideanNorm)
{
    NormalizedQoS n;
    n.value = {0.3, 0.4, 1.2};
    EXPECT_DOUBLE_EQ(n.total(), 1.3);
    EXPECT_DOUBLE_EQ(n.worst(), 0.3);
}

// Random candidate sets: every normalized component lies in [0,1], the
// cheapest candidate maps to 1 and the dearest to 0, lower raw cost never
// normalizes lower, and a degenerate dimension is 1.
TEST(Normalization, PropertiesOverRandomSets)
{
    Rng rng(2024);
    int cases = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t n = 1 + uniform_index(rng, 8);
        const bool flat = bernoulli(rng, 0.1);
        std::vector<QoSTriple> q(n);
        for (auto& t : q)
            t = {uniform(rng, 0, 5), flat ? 7.0 : uniform(rng, 0, 100), uniform(rng, 10, 1e4)};
        const Extrema e = service_extrema(q);
        std::vector<NormalizedQoS> z;
        for (const auto& t : q)
            z.push_back(normalize_service(t, e));
        for (std::size_t i = 0; i < n; ++i) {
            ++cases;
            for (const Dimension d : all_dimensions) {
                const double v = z[i].value[d];
                ASSERT_GE(v, 0.0);
                ASSERT_LE(v, 1.0);
                if (e.max[d] == e.min[d])
                    ASSERT_EQ(v, 1.0);
                else if (q[i][d] == e.min[d])
                    ASSERT_EQ(v, 1.0);
                else if (q[i][d] == e.max[d])
                    ASSERT_EQ(v, 0.0);
                for (std::size_t j = 0; j < n; ++j)
                    if (q[i][d] <= q[j][d])
                        ASSERT_GE(v, z[j].value[d]);
            }
            const auto& t = z[i].value;
            ASSERT_NEAR(z[i].total(), std::sqrt(t.price * t.price + t.power * t.power + t.delay * t.delay), 1e-12);
            ASSERT_LE(z[i].total(), std::sqrt(3.0) + 1e-12);
        }
        if (flat)
            for (const auto& zi : z)
                ASSERT_EQ(zi.value.power, 1.0);
    }
    EXPECT_GE(cases, 5000);
}

TEST(Normalization, ValuePropertiesOverTenThousandDraws)
{
    Rng rng(99);
    for (int i = 0; i < 10000; ++i) {
        double a = uniform(rng, -50, 50), b = uniform(rng, -50, 50);
        if (a < b)
            std::swap(a, b);
        const double v = uniform(rng, b, a);
        const double z = normalize_value(v, a, b);
        ASSERT_GE(z, 0.0);
        ASSERT_LE(z, 1.0);
        if (a > b)
            ASSERT_NEAR(z, (a - v) / (a - b), 1e-12);
    }
}
