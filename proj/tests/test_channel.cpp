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

#include "rsma/channel.hpp"

using namespace rsma;

namespace {

constexpr double kPi = std::numbers::pi;

OneRingSpec spec_with(double theta, double delta, std::size_t n_tx = 4,
                      std::size_t n_users = 2) {
    OneRingSpec s;
    s.n_tx = n_tx;
    s.theta = theta;
    s.delta = delta;
    s.n_users = n_users;
    return s;
}

} // namespace

TEST_CASE("spec validation rejects bad geometry") {
    CHECK_THROWS_AS(spec_with(kPi / 3, 0.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(spec_with(kPi / 3, kPi).validate(), std::invalid_argument);
    CHECK_THROWS_AS(spec_with(kPi / 3, kPi / 9, 2, 3).validate(), std::invalid_argument);
    CHECK_NOTHROW(spec_with(kPi / 3, kPi / 2).validate());
}

TEST_CASE("covariance is Hermitian PSD with unit diagonal") {
    for (double delta : {1e-9, kPi / 18, kPi / 9, kPi / 6}) {
        ComplexMatrix r = covariance_matrix(spec_with(kPi / 3, delta));
        CHECK(r.max_abs_difference(r.adjoint()) < 1e-12);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(r(i, i).real() == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(r(i, i).imag() == doctest::Approx(0.0));
        }
        EigenDecomposition e = hermitian_eigendecomposition(r);
        CHECK(e.eigenvalues.back() > -1e-10);
    }
}

TEST_CASE("vanishing angular spread collapses the covariance to rank 1") {
    ComplexMatrix r = covariance_matrix(spec_with(kPi / 3, 1e-9));
    EigenDecomposition e = hermitian_eigendecomposition(r);
    CHECK(e.eigenvalues[0] == doctest::Approx(4.0).epsilon(1e-6));
    for (std::size_t i = 1; i < 4; ++i)
        CHECK(std::abs(e.eigenvalues[i]) < 1e-6);

    // Limit entries are pure array phase terms.
    const double s = std::sin(kPi / 3);
    for (std::size_t m = 0; m < 4; ++m)
        for (std::size_t n = 0; n < 4; ++n) {
            const double arg = -kPi * (static_cast<double>(m) - static_cast<double>(n)) * s;
            CHECK(std::abs(r(m, n) - cplx(std::cos(arg), std::sin(arg))) < 1e-6);
        }
}

TEST_CASE("first off-diagonal entry matches a million-point Riemann oracle") {
    const double theta = kPi / 3;
    const double delta = kPi / 18;
    ComplexMatrix r = covariance_matrix(spec_with(theta, delta));

    const std::size_t n = 1000000;
    const double h = 2.0 * delta / static_cast<double>(n);
    cplx acc(0, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = theta - delta + (static_cast<double>(i) + 0.5) * h;
        const double arg = -kPi * std::sin(a);
        acc += cplx(std::cos(arg), std::sin(arg));
    }
    acc *= h / (2.0 * delta);

    CHECK(std::abs(r(1, 0) - acc) < 1e-8);
    CHECK(std::abs(r(0, 1) - std::conj(acc)) < 1e-8);
}

TEST_CASE("KL factor reconstructs the covariance") {
    for (double delta : {kPi / 18, kPi / 9, kPi / 6}) {
        ComplexMatrix r = covariance_matrix(spec_with(kPi / 3, delta));
        KLFactor f = kl_factor(r);
        ComplexMatrix rebuilt = f.factor * f.factor.adjoint();
        CHECK(rebuilt.max_abs_difference(r) / r.frobenius_norm() < 1e-8);
        CHECK(f.rank >= 1);
        CHECK(f.rank <= 4);
        CHECK(f.factor.cols() == f.rank);
    }
}

TEST_CASE("KL factor of the identity keeps full rank") {
    KLFactor f = kl_factor(ComplexMatrix::identity(4));
    CHECK(f.rank == 4);
    ComplexMatrix rebuilt = f.factor * f.factor.adjoint();
    CHECK(rebuilt.max_abs_difference(ComplexMatrix::identity(4)) < 1e-10);
}

TEST_CASE("rank-1 covariance gives a one-column factor and collinear draws") {
    ComplexMatrix r = covariance_matrix(spec_with(kPi / 3, 1e-9));
    KLFactor f = kl_factor(r);
    CHECK(f.rank == 1);

    SeededRng rng(3, 1);
    ChannelRealization c = sample_channel(f, 2, rng);
    REQUIRE(c.n_users() == 2);
    cvec u = f.factor.column(0);
    for (const cvec &h : c.h) {
        // h must be a complex multiple of the factor column.
        double cross = std::abs(inner_product(u, h));
        CHECK(cross == doctest::Approx(norm2(u) * norm2(h)).epsilon(1e-10));
    }
}

TEST_CASE("sampled channels reproduce the covariance empirically") {
    OneRingSpec spec = spec_with(kPi / 3, kPi / 9);
    ComplexMatrix r = covariance_matrix(spec);
    KLFactor f = kl_factor(r);

    ComplexMatrix acc(4, 4);
    const std::size_t n_draws = 100000;
    SeededRng rng(17, 0);
    for (std::size_t i = 0; i < n_draws; ++i) {
        ChannelRealization c = sample_channel(f, 1, rng);
        for (std::size_t a = 0; a < 4; ++a)
            for (std::size_t b = 0; b < 4; ++b)
                acc(a, b) += c.h[0][a] * std::conj(c.h[0][b]);
    }
    for (auto &x : acc.data())
        x /= static_cast<double>(n_draws);

    double trace = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        trace += acc(i, i).real();
    CHECK(trace == doctest::Approx(4.0).epsilon(0.02));
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b)
            CHECK(std::abs(acc(a, b) - r(a, b)) < 0.02);
}

TEST_CASE("zero users yields an empty realization") {
    KLFactor f = kl_factor(ComplexMatrix::identity(4));
    SeededRng rng(1, 0);
    ChannelRealization c = sample_channel(f, 0, rng);
    CHECK(c.n_users() == 0);
}
