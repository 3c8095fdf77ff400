// SPDX-License-Identifier: Apache-2.0
//
// rsma-linklab - link-level simulation toolkit for rate-splitting downlink transceivers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rsma/precoding.hpp"

using namespace rsma;

namespace {

cvec normalized(cvec v) {
    double n = norm2(v);
    for (auto &x : v)
        x /= n;
    return v;
}

ChannelRealization random_channels(SeededRng &rng, std::size_t k, std::size_t n_tx = 4) {
    ChannelRealization c;
    for (std::size_t i = 0; i < k; ++i)
        c.h.push_back(sample_complex_gaussian(rng, n_tx, 1.0));
    return c;
}

cvec unit_vector(std::size_t n, std::size_t i) {
    cvec v(n, cplx(0, 0));
    v[i] = cplx(1, 0);
    return v;
}

} // namespace

TEST_CASE("zero forcing of orthonormal channels returns the channels") {
    ChannelRealization c;
    c.h.push_back(unit_vector(4, 0));
    c.h.push_back(unit_vector(4, 2));
    std::vector<cvec> p = zf_directions(c);
    REQUIRE(p.size() == 2);
    CHECK(std::abs(inner_product(c.h[0], p[0])) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(inner_product(c.h[1], p[1])) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("zero forcing nulls cross-user leakage") {
    SeededRng rng(19, 0);
    for (int trial = 0; trial < 1000; ++trial) {
        ChannelRealization c = random_channels(rng, 2);
        std::vector<cvec> p;
        try {
            p = zf_directions(c);
        } catch (const SingularChannelError &) {
            continue; // ill-conditioned draw, rejected by contract
        }
        for (std::size_t k = 0; k < 2; ++k) {
            CHECK(norm2(p[k]) == doctest::Approx(1.0).epsilon(1e-10));
            cvec hb = normalized(c.h[1 - k]);
            CHECK(std::abs(inner_product(hb, p[k])) < 1e-7);
        }
    }
}

TEST_CASE("zero forcing rejects collinear channels") {
    ChannelRealization c;
    c.h.push_back(unit_vector(4, 0));
    c.h.push_back(unit_vector(4, 0));
    CHECK_THROWS_AS(zf_directions(c), SingularChannelError);
}

TEST_CASE("single-user common direction is the normalized channel") {
    ChannelRealization c;
    c.h.push_back({{2, 0}, {0, 0}, {0, 0}, {0, 0}});
    cvec p = common_direction(c);
    CHECK(std::abs(inner_product(normalized(c.h[0]), p)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two-user common direction balances orthogonal channels") {
    ChannelRealization c;
    c.h.push_back(unit_vector(4, 0));
    c.h.push_back(unit_vector(4, 1));
    cvec p = common_direction(c);
    CHECK(norm2(p) == doctest::Approx(1.0).epsilon(1e-10));
    double g0 = std::abs(inner_product(c.h[0], p));
    double g1 = std::abs(inner_product(c.h[1], p));
    CHECK(g0 == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
    CHECK(g1 == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("identical channels collapse the common direction onto them") {
    SeededRng rng(4, 0);
    cvec h = sample_complex_gaussian(rng, 4, 1.0);
    ChannelRealization c;
    c.h.push_back(h);
    c.h.push_back(h);
    cvec p = common_direction(c);
    CHECK(std::abs(inner_product(normalized(h), p)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("two-user common direction beats a dense span search") {
    SeededRng rng(31, 2);
    const double pi = std::numbers::pi;
    for (int trial = 0; trial < 100; ++trial) {
        ChannelRealization c = random_channels(rng, 2);
        cvec h1 = normalized(c.h[0]);
        cvec h2 = normalized(c.h[1]);
        cvec p = common_direction(c);
        CHECK(norm2(p) == doctest::Approx(1.0).epsilon(1e-10));

        double g1 = std::abs(inner_product(h1, p));
        double g2 = std::abs(inner_product(h2, p));
        CHECK(g1 == doctest::Approx(g2).epsilon(1e-8));

        // Exhaustive search over unit vectors a*h1 + b*h2: parameterize by
        // the mixing angle and the relative phase, 100 x 100 points.
        double best = 0.0;
        for (int ia = 0; ia < 100; ++ia) {
            const double mix = 0.5 * pi * (static_cast<double>(ia) + 0.5) / 100.0;
            for (int ip = 0; ip < 100; ++ip) {
                const double ph = 2.0 * pi * static_cast<double>(ip) / 100.0;
                cplx beta = std::polar(std::sin(mix), ph);
                cvec cand(4);
                for (std::size_t i = 0; i < 4; ++i)
                    cand[i] = std::cos(mix) * h1[i] + beta * h2[i];
                double n = norm2(cand);
                if (n < 1e-12)
                    continue;
                for (auto &x : cand)
                    x /= n;
                double m = std::min(std::abs(inner_product(h1, cand)),
                                    std::abs(inner_product(h2, cand)));
                best = std::max(best, m);
            }
        }
        CHECK(std::min(g1, g2) * std::min(g1, g2) >= best * best - 1e-6);
    }
}

TEST_CASE("three-user common direction is the dominant singular direction") {
    SeededRng rng(8, 0);
    ChannelRealization c = random_channels(rng, 3);
    ComplexMatrix hbar(4, 3);
    for (std::size_t k = 0; k < 3; ++k)
        hbar.set_column(k, normalized(c.h[k]));
    cvec expect = dominant_left_singular_vector(hbar);
    cvec p = common_direction(c);
    CHECK(std::abs(inner_product(expect, p)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("maximum ratio directions follow the channels") {
    SeededRng rng(12, 0);
    ChannelRealization c = random_channels(rng, 2);
    // Scale invariance: double one channel, directions unchanged.
    ChannelRealization scaled = c;
    for (auto &x : scaled.h[0])
        x *= 5.0;

    std::vector<cvec> p = mrt_directions(c);
    std::vector<cvec> q = mrt_directions(scaled);
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(norm2(p[k]) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(inner_product(normalized(c.h[k]), p[k])) ==
              doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(std::abs(p[k][i] - q[k][i]) < 1e-10);
    }

    ChannelRealization zero;
    zero.h.push_back(cvec(4, cplx(0, 0)));
    CHECK_THROWS_AS(mrt_directions(zero), std::invalid_argument);
}

TEST_CASE("assembled precoders split the power budget exactly") {
    SeededRng rng(14, 0);
    ChannelRealization c = random_channels(rng, 2);
    std::vector<cvec> dirs = zf_directions(c);
    cvec cdir = common_direction(c);

    PrecoderSet p0 = assemble(cdir, dirs, 0.0, 10.0);
    CHECK(p0.common_power() == doctest::Approx(0.0));
    CHECK(p0.private_power() == doctest::Approx(5.0));

    PrecoderSet p1 = assemble(cdir, dirs, 1.0, 10.0);
    CHECK(p1.common_power() == doctest::Approx(10.0));
    CHECK(p1.private_power() == doctest::Approx(0.0));

    PrecoderSet p = assemble(cdir, dirs, 0.4, 10.0);
    CHECK(p.common_power() == doctest::Approx(4.0));
    CHECK(p.private_power() == doctest::Approx(3.0));
    double total = p.common_power() + 2.0 * p.private_power();
    CHECK(total == doctest::Approx(10.0).epsilon(1e-10));

    // Effective gains include the power scaling.
    cplx g = p.common_gain(c.h[0]);
    cplx direct = inner_product(c.h[0], cdir) * std::sqrt(4.0);
    CHECK(std::abs(g - direct) < 1e-9);

    CHECK_THROWS_AS(assemble(cdir, dirs, -0.1, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(assemble(cdir, dirs, 1.1, 10.0), std::invalid_argument);
}
