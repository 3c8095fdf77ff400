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

#include "rsma/numerics.hpp"

using namespace rsma;

namespace {

ComplexMatrix random_hermitian_psd(SeededRng &rng, std::size_t n) {
    ComplexMatrix a(n, n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < n; ++r)
            a(r, c) = rng.next_complex_gaussian(1.0);
    return a * a.adjoint();
}

} // namespace

TEST_CASE("matrix multiply and adjoint agree with hand arithmetic") {
    ComplexMatrix a(2, 2);
    a(0, 0) = {1, 1};
    a(0, 1) = {2, 0};
    a(1, 0) = {0, -1};
    a(1, 1) = {1, 0};
    ComplexMatrix b = a.adjoint();
    CHECK(b(0, 0) == cplx(1, -1));
    CHECK(b(0, 1) == cplx(0, 1));
    CHECK(b(1, 0) == cplx(2, 0));

    ComplexMatrix p = a * ComplexMatrix::identity(2);
    CHECK(p.max_abs_difference(a) == doctest::Approx(0.0));
}

TEST_CASE("inner product conjugates its first argument") {
    cvec a = {{0, 1}, {1, 0}};
    cvec b = {{1, 0}, {0, 0}};
    // a^H b = conj(i) * 1 = -i
    CHECK(inner_product(a, b).real() == doctest::Approx(0.0));
    CHECK(inner_product(a, b).imag() == doctest::Approx(-1.0));
    CHECK(norm2(a) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("eigendecomposition of the identity") {
    EigenDecomposition e = hermitian_eigendecomposition(ComplexMatrix::identity(4));
    REQUIRE(e.eigenvalues.size() == 4);
    for (double v : e.eigenvalues)
        CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eigendecomposition of a rank-1 projector recovers the vector") {
    SeededRng rng(11, 0);
    cvec u = sample_complex_gaussian(rng, 4, 1.0);
    double nu = norm2(u);
    for (auto &x : u)
        x /= nu;
    ComplexMatrix m(4, 4);
    for (std::size_t c = 0; c < 4; ++c)
        for (std::size_t r = 0; r < 4; ++r)
            m(r, c) = u[r] * std::conj(u[c]);

    EigenDecomposition e = hermitian_eigendecomposition(m);
    CHECK(e.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-10));
    for (std::size_t i = 1; i < 4; ++i)
        CHECK(std::abs(e.eigenvalues[i]) < 1e-10);
    // First eigenvector matches u up to a global phase.
    cvec v = e.eigenvectors.column(0);
    CHECK(std::abs(inner_product(u, v)) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("eigendecomposition reconstructs random Hermitian inputs") {
    SeededRng rng(5, 3);
    for (int trial = 0; trial < 20; ++trial) {
        ComplexMatrix m = random_hermitian_psd(rng, 4);
        EigenDecomposition e = hermitian_eigendecomposition(m);

        // Eigenvalues descending.
        for (std::size_t i = 1; i < e.eigenvalues.size(); ++i)
            CHECK(e.eigenvalues[i - 1] >= e.eigenvalues[i]);

        // Orthonormal eigenvectors.
        ComplexMatrix g = e.eigenvectors.adjoint() * e.eigenvectors;
        CHECK(g.max_abs_difference(ComplexMatrix::identity(4)) < 1e-9);

        // V diag(lambda) V^H rebuilds m.
        ComplexMatrix scaled = e.eigenvectors;
        for (std::size_t c = 0; c < 4; ++c)
            for (std::size_t r = 0; r < 4; ++r)
                scaled(r, c) *= e.eigenvalues[c];
        ComplexMatrix rebuilt = scaled * e.eigenvectors.adjoint();
        CHECK(rebuilt.max_abs_difference(m) / m.frobenius_norm() < 1e-8);
    }
}

TEST_CASE("eigendecomposition rejects non-Hermitian input") {
    ComplexMatrix m(2, 2);
    m(0, 1) = {1, 0};
    m(1, 0) = {2, 0};
    CHECK_THROWS_AS(hermitian_eigendecomposition(m), std::invalid_argument);
}

TEST_CASE("dominant left singular vector of a rank-1 outer product") {
    SeededRng rng(21, 0);
    cvec u = sample_complex_gaussian(rng, 4, 1.0);
    double nu = norm2(u);
    for (auto &x : u)
        x /= nu;
    cvec w = sample_complex_gaussian(rng, 3, 1.0);
    ComplexMatrix m(4, 3);
    for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t r = 0; r < 4; ++r)
            m(r, c) = u[r] * std::conj(w[c]);

    cvec v = dominant_left_singular_vector(m);
    CHECK(norm2(v) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(inner_product(u, v)) == doctest::Approx(1.0).epsilon(1e-8));

    // Phase convention: first significant entry real positive.
    for (const cplx &x : v) {
        if (std::abs(x) > 1e-12) {
            CHECK(x.imag() == doctest::Approx(0.0).epsilon(1e-10));
            CHECK(x.real() > 0.0);
            break;
        }
    }
}

TEST_CASE("dominant left singular vector attains the top Gram eigenvalue") {
    SeededRng rng(33, 1);
    for (int trial = 0; trial < 20; ++trial) {
        ComplexMatrix m(4, 3);
        for (std::size_t c = 0; c < 3; ++c)
            for (std::size_t r = 0; r < 4; ++r)
                m(r, c) = rng.next_complex_gaussian(1.0);

        cvec v = dominant_left_singular_vector(m);
        ComplexMatrix gram = m * m.adjoint();
        EigenDecomposition e = hermitian_eigendecomposition(gram);

        // ||m^H v||^2 = v^H (m m^H) v should hit the top eigenvalue.
        cvec gv(4, cplx(0, 0));
        for (std::size_t c = 0; c < 4; ++c)
            for (std::size_t r = 0; r < 4; ++r)
                gv[r] += gram(r, c) * v[c];
        double quad = inner_product(v, gv).real();
        CHECK(quad == doctest::Approx(e.eigenvalues[0]).epsilon(1e-8));
    }
}

TEST_CASE("dominant left singular vector rejects the zero matrix") {
    ComplexMatrix m(3, 2);
    CHECK_THROWS_AS(dominant_left_singular_vector(m), std::invalid_argument);
}

TEST_CASE("quadrature integrates constants and complex exponentials") {
    const double pi = std::numbers::pi;
    cplx c = integrate_1d([](double) { return cplx(1.0, 0.0); }, 0.0, pi);
    CHECK(c.real() == doctest::Approx(pi).epsilon(1e-12));
    CHECK(c.imag() == doctest::Approx(0.0));

    const double d = pi / 9.0;
    cplx e = integrate_1d([](double a) { return cplx(std::cos(a), std::sin(a)); }, -d, d);
    CHECK(e.real() == doctest::Approx(2.0 * std::sin(d)).epsilon(1e-10));
    CHECK(std::abs(e.imag()) < 1e-10);
}

TEST_CASE("quadrature matches a brute-force Riemann sum on the array integrand") {
    const double pi = std::numbers::pi;
    const double theta = pi / 3.0;
    const double delta = pi / 18.0;
    auto f = [pi](double a) {
        const double arg = -pi * std::sin(a);
        return cplx(std::cos(arg), std::sin(arg));
    };

    cplx adaptive = integrate_1d(f, theta - delta, theta + delta, 1e-10);

    const std::size_t n = 1000000;
    const double h = 2.0 * delta / static_cast<double>(n);
    cplx riemann(0, 0);
    for (std::size_t i = 0; i < n; ++i)
        riemann += f(theta - delta + (static_cast<double>(i) + 0.5) * h);
    riemann *= h;

    CHECK(std::abs(adaptive - riemann) < 1e-8);
}

TEST_CASE("rng streams are reproducible and independent") {
    SeededRng a(42, 7);
    SeededRng b(42, 7);
    for (int i = 0; i < 100; ++i)
        CHECK(a.next_u64() == b.next_u64());

    SeededRng c(42, 8);
    bool differs = false;
    SeededRng a2(42, 7);
    for (int i = 0; i < 10; ++i)
        differs = differs || (a2.next_u64() != c.next_u64());
    CHECK(differs);
}

TEST_CASE("uniform draws stay inside (0, 1] and below the bound") {
    SeededRng rng(9, 0);
    for (int i = 0; i < 10000; ++i) {
        double u = rng.next_unit();
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
    }
    for (int i = 0; i < 10000; ++i)
        CHECK(rng.next_below(13) < 13);
}

TEST_CASE("complex gaussian samples have the requested moments") {
    SeededRng rng(123, 0);
    const std::size_t n = 1000000;
    cvec z = sample_complex_gaussian(rng, n, 1.0);
    REQUIRE(z.size() == n);

    cplx mean(0, 0);
    double power = 0.0;
    for (const cplx &x : z) {
        mean += x;
        power += std::norm(x);
    }
    mean /= static_cast<double>(n);
    power /= static_cast<double>(n);

    CHECK(std::abs(mean) < 5e-3);
    CHECK(power == doctest::Approx(1.0).epsilon(0.01));

    CHECK(sample_complex_gaussian(rng, 0, 1.0).empty());

    SeededRng r1(77, 2), r2(77, 2);
    cvec s1 = sample_complex_gaussian(r1, 16, 2.0);
    cvec s2 = sample_complex_gaussian(r2, 16, 2.0);
    CHECK(s1 == s2);
}
