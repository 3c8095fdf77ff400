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

#include "rsma/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rsma {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx(0.0, 0.0)) {}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t c = 0; c < cols_; ++c)
        for (std::size_t r = 0; r < rows_; ++r)
            out(c, r) = std::conj((*this)(r, c));
    return out;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix &rhs) const {
    if (cols_ != rhs.rows_)
        throw std::invalid_argument("ComplexMatrix multiply: inner dimensions differ");
    ComplexMatrix out(rows_, rhs.cols_);
    for (std::size_t c = 0; c < rhs.cols_; ++c)
        for (std::size_t k = 0; k < cols_; ++k) {
            const cplx f = rhs(k, c);
            if (f == cplx(0.0, 0.0))
                continue;
            for (std::size_t r = 0; r < rows_; ++r)
                out(r, c) += (*this)(r, k) * f;
        }
    return out;
}

cvec ComplexMatrix::column(std::size_t c) const {
    cvec v(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        v[r] = (*this)(r, c);
    return v;
}

void ComplexMatrix::set_column(std::size_t c, const cvec &v) {
    if (v.size() != rows_)
        throw std::invalid_argument("ComplexMatrix set_column: size mismatch");
    for (std::size_t r = 0; r < rows_; ++r)
        (*this)(r, c) = v[r];
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const cplx &z : data_)
        s += std::norm(z);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs_difference(const ComplexMatrix &other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("ComplexMatrix difference: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i)
        m = std::max(m, std::abs(data_[i] - other.data_[i]));
    return m;
}

cplx inner_product(const cvec &a, const cvec &b) {
    if (a.size() != b.size())
        throw std::invalid_argument("inner_product: size mismatch");
    cplx s(0.0, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        s += std::conj(a[i]) * b[i];
    return s;
}

double norm2(const cvec &v) {
    double s = 0.0;
    for (const cplx &z : v)
        s += std::norm(z);
    return std::sqrt(s);
}

namespace {

double off_diagonal_norm(const ComplexMatrix &a) {
    double s = 0.0;
    for (std::size_t c = 0; c < a.cols(); ++c)
        for (std::size_t r = 0; r < a.rows(); ++r)
            if (r != c)
                s += std::norm(a(r, c));
    return std::sqrt(s);
}

} // namespace

EigenDecomposition hermitian_eigendecomposition(const ComplexMatrix &m, double herm_tol) {
    const std::size_t n = m.rows();
    if (n == 0 || m.cols() != n)
        throw std::invalid_argument("hermitian_eigendecomposition: matrix must be square");
    double scale = std::max(1.0, m.frobenius_norm());
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < n; ++r)
            if (std::abs(m(r, c) - std::conj(m(c, r))) > herm_tol * scale)
                throw std::invalid_argument("hermitian_eigendecomposition: input is not Hermitian");

    // Work on the exactly symmetrized copy so roundoff in the input cannot
    // leak into the rotations.
    ComplexMatrix a(n, n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < n; ++r)
            a(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double frob = std::max(a.frobenius_norm(), 1e-300);
    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_norm(a) <= 1e-14 * frob)
            break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx g = a(p, q);
                const double absg = std::abs(g);
                if (absg <= 1e-300)
                    continue;
                // Strip the phase of a(p,q), then apply the classic real
                // rotation that zeroes the off-diagonal pair.
                const cplx phase = g / absg; // e^{j phi}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * absg);
                double t;
                if (tau >= 0.0)
                    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
                else
                    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // J(p,p)=c, J(p,q)=s, J(q,p)=-s*conj(phase), J(q,q)=c*conj(phase)
                const cplx jqp = -s * std::conj(phase);
                const cplx jqq = c * std::conj(phase);
                // B = A J on columns p and q
                for (std::size_t r = 0; r < n; ++r) {
                    const cplx arp = a(r, p);
                    const cplx arq = a(r, q);
                    a(r, p) = arp * c + arq * jqp;
                    a(r, q) = arp * s + arq * jqq;
                }
                // A <- J^H B on rows p and q
                for (std::size_t col = 0; col < n; ++col) {
                    const cplx apc = a(p, col);
                    const cplx aqc = a(q, col);
                    a(p, col) = c * apc + std::conj(jqp) * aqc;
                    a(q, col) = s * apc + std::conj(jqq) * aqc;
                }
                // Re-symmetrize the touched entries against roundoff drift.
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                a(q, p) = std::conj(a(p, q));
                // V <- V J
                for (std::size_t r = 0; r < n; ++r) {
                    const cplx vrp = v(r, p);
                    const cplx vrq = v(r, q);
                    v(r, p) = vrp * c + vrq * jqp;
                    v(r, q) = vrp * s + vrq * jqq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&a](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        out.eigenvalues[i] = a(order[i], order[i]).real();
        out.eigenvectors.set_column(i, v.column(order[i]));
    }
    return out;
}

cvec dominant_left_singular_vector(const ComplexMatrix &m) {
    const std::size_t rows = m.rows();
    if (rows == 0 || m.cols() == 0)
        throw std::invalid_argument("dominant_left_singular_vector: empty matrix");
    ComplexMatrix gram(rows, rows);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < rows; ++c) {
            cplx s(0.0, 0.0);
            for (std::size_t k = 0; k < m.cols(); ++k)
                s += m(r, k) * std::conj(m(c, k));
            gram(r, c) = s;
        }
    if (gram.frobenius_norm() <= 1e-300)
        throw std::invalid_argument("dominant_left_singular_vector: matrix is zero");

    EigenDecomposition eig = hermitian_eigendecomposition(gram, 1e-8);
    cvec u = eig.eigenvectors.column(0);
    const double nrm = norm2(u);
    for (cplx &z : u)
        z /= nrm;
    // Deterministic phase: first entry with non-negligible magnitude becomes
    // real positive.
    for (const cplx &z : u) {
        if (std::abs(z) > 1e-12) {
            const cplx rot = std::conj(z) / std::abs(z);
            for (cplx &w : u)
                w *= rot;
            break;
        }
    }
    return u;
}

namespace {

struct SimpsonInterval {
    double a, b;
    cplx fa, fm, fb;
    cplx whole;
    double tol;
    int depth;
};

cplx simpson_rule(double a, double b, cplx fa, cplx fm, cplx fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

} // namespace

cplx integrate_1d(const std::function<cplx(double)> &f, double lower, double upper, double tol) {
    if (!(tol > 0.0))
        throw std::invalid_argument("integrate_1d: tolerance must be positive");
    if (lower == upper)
        return cplx(0.0, 0.0);
    const double sign = lower < upper ? 1.0 : -1.0;
    const double a0 = std::min(lower, upper);
    const double b0 = std::max(lower, upper);

    const int max_depth = 48;
    cplx fa = f(a0);
    double m0 = 0.5 * (a0 + b0);
    cplx fm = f(m0);
    cplx fb = f(b0);

    std::vector<SimpsonInterval> stack;
    stack.push_back({a0, b0, fa, fm, fb, simpson_rule(a0, b0, fa, fm, fb), tol, 0});

    cplx total(0.0, 0.0);
    bool converged = true;
    while (!stack.empty()) {
        SimpsonInterval iv = stack.back();
        stack.pop_back();
        const double m = 0.5 * (iv.a + iv.b);
        const double lm = 0.5 * (iv.a + m);
        const double rm = 0.5 * (m + iv.b);
        const cplx flm = f(lm);
        const cplx frm = f(rm);
        const cplx left = simpson_rule(iv.a, m, iv.fa, flm, iv.fm);
        const cplx right = simpson_rule(m, iv.b, iv.fm, frm, iv.fb);
        const cplx delta = left + right - iv.whole;
        if (std::abs(delta) <= 15.0 * iv.tol || iv.depth >= max_depth) {
            total += left + right + delta / 15.0;
            if (iv.depth >= max_depth && std::abs(delta) > 15.0 * iv.tol)
                converged = false;
        } else {
            stack.push_back({iv.a, m, iv.fa, flm, iv.fm, left, 0.5 * iv.tol, iv.depth + 1});
            stack.push_back({m, iv.b, iv.fm, frm, iv.fb, right, 0.5 * iv.tol, iv.depth + 1});
        }
    }
    total *= sign;
    if (!converged)
        throw AccuracyError("integrate_1d: subdivision limit reached before tolerance", total);
    return total;
}

namespace {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

} // namespace

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
    // Key the walk on both identifiers so streams with equal seeds stay
    // statistically independent.
    std::uint64_t key = mix64(seed + kGamma);
    key = mix64(key ^ (stream * 0xD2B74407B1CE6E93ULL + kGamma));
    state_ = key;
}

std::uint64_t SeededRng::next_u64() {
    state_ += kGamma;
    return mix64(state_);
}

double SeededRng::next_unit() {
    // 53-bit mantissa, shifted into (0, 1] so log() is always finite.
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

std::uint64_t SeededRng::next_below(std::uint64_t bound) {
    if (bound == 0)
        throw std::invalid_argument("SeededRng::next_below: bound must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = next_u64();
    while (x >= limit)
        x = next_u64();
    return x % bound;
}

cplx SeededRng::next_complex_gaussian(double variance) {
    if (variance < 0.0)
        throw std::invalid_argument("SeededRng::next_complex_gaussian: negative variance");
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-variance * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    return cplx(r * std::cos(phi), r * std::sin(phi));
}

cvec sample_complex_gaussian(SeededRng &rng, std::size_t n, double variance) {
    cvec out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = rng.next_complex_gaussian(variance);
    return out;
}

} // namespace rsma
