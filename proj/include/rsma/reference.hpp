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

#ifndef RSMA_REFERENCE_HPP
#define RSMA_REFERENCE_HPP

#include "rsma/rates.hpp"

namespace rsma::ref {

// Plain serial twin of the parallel entropy estimator. Consumes the same
// draws and reduces in the same order, so results are bitwise identical to
// the parallel version at any worker count; kept for tests and benchmarks.
McEstimate cc_entropy_exact(const cvec &points, double noise_var, SeededRng &rng,
                            std::size_t n_noise);

} // namespace rsma::ref

#endif
