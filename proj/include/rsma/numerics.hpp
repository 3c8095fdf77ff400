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

#ifndef RSMA_NUMERICS_HPP
#define RSMA_NUMERICS_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsma {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

// Dense complex matrix, column-major storage. Sizes in this project are tiny
// (antenna counts and user counts), so everything is plain O(n^3) code.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cplx &operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
    const cplx &operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

    std::vector<cplx> &data() { return data_; }
    const std::vector<cplx> &data() const { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix operator*(const ComplexMatrix &rhs) const;

    cvec column(std::size_t c) const;
    void set_column(std::size_t c, const cvec &v);

    double frobenius_norm() const;
    double max_abs_difference(const ComplexMatrix &other) const;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

cplx inner_product(const cvec &a, const cvec &b); // a^H b
double norm2(const cvec &v);                      // Euclidean norm

// Eigenvalues sorted descending; eigenvectors() column i pairs with eigenvalues[i].
struct EigenDecomposition {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;
};

// Cyclic Jacobi for Hermitian matrices. Throws std::invalid_argument if the
// input is not square or departs from Hermitian symmetry by more than herm_tol.
EigenDecomposition hermitian_eigendecomposition(const ComplexMatrix &m, double herm_tol = 1e-10);

// Unit-norm left singular vector of the largest singular value, computed from
// the Gram matrix m m^H. The phase is fixed so that the first entry with
// magnitude above 1e-12 is real positive. Throws on an all-zero matrix.
cvec dominant_left_singular_vector(const ComplexMatrix &m);

// Raised when an adaptive algorithm exhausts its subdivision budget. The best
// estimate accumulated so far is carried along for diagnostics.
class AccuracyError : public std::runtime_error {
  public:
    AccuracyError(const std::string &what, cplx best) : std::runtime_error(what), best_(best) {}
    cplx best_estimate() const { return best_; }

  private:
    cplx best_;
};

// Adaptive Simpson quadrature for complex-valued integrands on [lower, upper].
cplx integrate_1d(const std::function<cplx(double)> &f, double lower, double upper,
                  double tol = 1e-9);

// Counter-based deterministic RNG. Draw i of stream (seed, stream) depends
// only on (seed, stream, i), never on call interleaving, so simulation workers
// can consume disjoint streams in any schedule and still reproduce bit-exact
// results. The generator is a splitmix64 walk from a per-stream key.
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();
    double next_unit();                            // uniform on (0, 1]
    std::uint64_t next_below(std::uint64_t bound); // uniform on [0, bound), bound >= 1
    cplx next_complex_gaussian(double variance);   // circularly symmetric, E|z|^2 = variance

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

  private:
    std::uint64_t seed_ = 0;
    std::uint64_t stream_ = 0;
    std::uint64_t state_ = 0;
};

cvec sample_complex_gaussian(SeededRng &rng, std::size_t n, double variance);

} // namespace rsma

#endif
