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

#include "rsma/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rsma {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kZfLeakTol = 1e-6;

void check_zero_forcing(const ChannelRealization &channels, const PrecoderSet &precoders) {
    const std::size_t k_users = channels.h.size();
    if (precoders.private_dirs.size() != k_users) {
        throw std::invalid_argument("rates: one private direction per user required");
    }
    for (std::size_t i = 0; i < k_users; ++i) {
        const double nrm = norm2(channels.h[i]);
        if (!(nrm > 0.0)) {
            throw std::invalid_argument("rates: zero channel vector");
        }
        for (std::size_t k = 0; k < k_users; ++k) {
            if (k == i) {
                continue;
            }
            const double leak =
                std::abs(inner_product(channels.h[i], precoders.private_dirs[k])) / nrm;
            if (leak > kZfLeakTol) {
                throw ContractViolationError(
                    "rates: private directions leak into other users' channels");
            }
        }
    }
}

double sum_rate_from_terms(const GaussianAllocationTerms &terms, double t) {
    double rate = std::log2(1.0 + terms.a[terms.k_prime] + terms.b * t);
    for (std::size_t i = 0; i < terms.a.size(); ++i) {
        if (i == terms.k_prime) {
            continue;
        }
        rate += std::log2(1.0 + terms.a[i] * (1.0 - t));
    }
    return rate;
}

// Derivative (up to the positive factor 1/ln 2) of the Gaussian sum rate.
double rate_derivative(const GaussianAllocationTerms &terms, double t) {
    double g = terms.b / (1.0 + terms.a[terms.k_prime] + terms.b * t);
    for (std::size_t i = 0; i < terms.a.size(); ++i) {
        if (i == terms.k_prime) {
            continue;
        }
        g -= terms.a[i] / (1.0 + terms.a[i] * (1.0 - t));
    }
    return g;
}

struct UserEntropies {
    McEstimate joint;
    McEstimate priv;
    McEstimate common; // only filled for non-SIC private rates
};

// Role offsets inside a user's stream block; SIC and non-SIC evaluations at
// the same settings share the joint/private noise draws.
constexpr std::uint64_t kRolesPerUser = 4;
constexpr std::uint64_t kRoleJoint = 0;
constexpr std::uint64_t kRolePrivate = 1;
constexpr std::uint64_t kRoleCommon = 2;

McEstimate entropy_by_method(const cvec &points, double noise_var, RateMethod method,
                             const EntropyMcSettings &mc, std::uint64_t stream) {
    if (method == RateMethod::approx) {
        return {cc_entropy_approx(points, noise_var), 0.0};
    }
    SeededRng rng(mc.seed, stream);
    return cc_entropy_exact(points, noise_var, rng, mc.n_noise);
}

} // namespace

std::size_t weakest_user(const ChannelRealization &channels, const PrecoderSet &precoders) {
    const GaussianAllocationTerms terms = gaussian_allocation_terms(channels, precoders);
    return terms.k_prime;
}

GaussianAllocationTerms gaussian_allocation_terms(const ChannelRealization &channels,
                                                  const PrecoderSet &precoders) {
    const std::size_t k_users = channels.h.size();
    if (k_users == 0 || precoders.private_dirs.size() != k_users) {
        throw std::invalid_argument("rates: one private direction per user required");
    }
    const double p_total = precoders.p_total;
    GaussianAllocationTerms terms;
    terms.a.resize(k_users);
    std::vector<double> common_gain2(k_users);
    for (std::size_t k = 0; k < k_users; ++k) {
        const double gp = std::abs(inner_product(channels.h[k], precoders.private_dirs[k]));
        const double gc = std::abs(inner_product(channels.h[k], precoders.common_dir));
        terms.a[k] = p_total / static_cast<double>(k_users) * gp * gp;
        common_gain2[k] = p_total * gc * gc;
    }
    std::size_t k_prime = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < k_users; ++k) {
        const double score = common_gain2[k] / (1.0 + terms.a[k]);
        if (score < best) {
            best = score;
            k_prime = k;
        }
    }
    terms.k_prime = k_prime;
    terms.b = common_gain2[k_prime] - terms.a[k_prime];
    return terms;
}

double gaussian_sum_rate(const ChannelRealization &channels, const PrecoderSet &precoders,
                         double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw std::invalid_argument("rates: power split t outside [0, 1]");
    }
    check_zero_forcing(channels, precoders);
    return sum_rate_from_terms(gaussian_allocation_terms(channels, precoders), t);
}

double closed_form_t_star(const GaussianAllocationTerms &terms) {
    if (terms.a.empty() || terms.k_prime >= terms.a.size()) {
        throw std::invalid_argument("rates: malformed allocation terms");
    }
    for (double ak : terms.a) {
        if (!(ak >= 0.0) || !std::isfinite(ak)) {
            throw std::invalid_argument("rates: private SNR terms must be non-negative");
        }
    }
    if (rate_derivative(terms, 0.0) <= 0.0) {
        return 0.0;
    }
    if (rate_derivative(terms, 1.0) >= 0.0) {
        return 1.0;
    }
    // Concave objective: the derivative crosses zero exactly once in (0, 1).
    double lo = 0.0;
    double hi = 1.0;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (rate_derivative(terms, mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

McEstimate cc_entropy_exact(const cvec &points, double noise_var, SeededRng &rng,
                            std::size_t n_noise) {
    const std::size_t m_points = points.size();
    if (m_points == 0) {
        throw std::invalid_argument("rates: empty point set");
    }
    if (!(noise_var > 0.0)) {
        throw std::invalid_argument("rates: noise variance must be positive");
    }
    if (n_noise == 0) {
        throw std::invalid_argument("rates: at least one noise draw required");
    }
    std::vector<cplx> diff(m_points * m_points);
    for (std::size_t m = 0; m < m_points; ++m) {
        for (std::size_t l = 0; l < m_points; ++l) {
            diff[m * m_points + l] = points[m] - points[l];
        }
    }
    const cvec noise = sample_complex_gaussian(rng, n_noise, noise_var);
    const double inv_var = 1.0 / noise_var;

    // One slot per draw; the final reduction is sequential so the result is
    // independent of the number of worker threads.
    std::vector<double> per_draw(n_noise);
    const std::int64_t n = static_cast<std::int64_t>(n_noise);
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < n; ++j) {
        const cplx nj = noise[static_cast<std::size_t>(j)];
        double lse_sum = 0.0;
        for (std::size_t m = 0; m < m_points; ++m) {
            const cplx *row = diff.data() + m * m_points;
            double mx = -std::numeric_limits<double>::infinity();
            double acc = 0.0;
            for (std::size_t l = 0; l < m_points; ++l) {
                const cplx z = row[l] + nj;
                const double w = -(z.real() * z.real() + z.imag() * z.imag()) * inv_var;
                if (w > mx) {
                    acc = acc * std::exp(mx - w) + 1.0;
                    mx = w;
                } else {
                    acc += std::exp(w - mx);
                }
            }
            lse_sum += mx + std::log(acc);
        }
        // The +|n|^2/sigma^2 term centers each draw: with a single point (or
        // all points equal) every draw evaluates to log2 M exactly.
        per_draw[static_cast<std::size_t>(j)] =
            lse_sum / static_cast<double>(m_points) / kLn2 +
            (nj.real() * nj.real() + nj.imag() * nj.imag()) * inv_var / kLn2;
    }

    double mean = 0.0;
    for (double v : per_draw) {
        mean += v;
    }
    mean /= static_cast<double>(n_noise);
    double var = 0.0;
    for (double v : per_draw) {
        var += (v - mean) * (v - mean);
    }
    McEstimate est;
    est.value = mean;
    if (n_noise > 1) {
        var /= static_cast<double>(n_noise - 1);
        est.std_error = std::sqrt(var / static_cast<double>(n_noise));
    }
    return est;
}

double cc_entropy_approx(const cvec &points, double noise_var) {
    const std::size_t m_points = points.size();
    if (m_points == 0) {
        throw std::invalid_argument("rates: empty point set");
    }
    if (!(noise_var > 0.0)) {
        throw std::invalid_argument("rates: noise variance must be positive");
    }
    const double inv_two_var = 1.0 / (2.0 * noise_var);
    double total = 0.0;
    for (std::size_t m = 0; m < m_points; ++m) {
        double s = 0.0;
        for (std::size_t l = 0; l < m_points; ++l) {
            const cplx z = points[m] - points[l];
            s += std::exp(-(z.real() * z.real() + z.imag() * z.imag()) * inv_two_var);
        }
        total += std::log2(s);
    }
    const double h = total / static_cast<double>(m_points);
    return std::clamp(h, 0.0, std::log2(static_cast<double>(m_points)));
}

CcRateReport cc_sum_rate_from_gains(const cvec &g_common, const cvec &g_private,
                                    const Constellation &xc,
                                    const std::vector<const Constellation *> &xk,
                                    double noise_var, SicMode mode, RateMethod method,
                                    const EntropyMcSettings &mc) {
    const std::size_t k_users = g_common.size();
    if (k_users == 0 || g_private.size() != k_users || xk.size() != k_users) {
        throw std::invalid_argument("rates: per-user gains and constellations required");
    }
    if (!(noise_var > 0.0)) {
        throw std::invalid_argument("rates: noise variance must be positive");
    }
    const double log2_mc = std::log2(static_cast<double>(xc.size()));

    CcRateReport report;
    report.mode = mode;
    report.method = method;
    report.private_rates.resize(k_users);
    report.private_std_errors.assign(k_users, 0.0);

    double common_rate = std::numeric_limits<double>::infinity();
    double common_se = 0.0;
    cvec joint;
    cvec priv;
    cvec comm;
    for (std::size_t k = 0; k < k_users; ++k) {
        if (xk[k] == nullptr) {
            throw std::invalid_argument("rates: null private constellation");
        }
        const Constellation &xp = *xk[k];
        const double log2_mk = std::log2(static_cast<double>(xp.size()));
        const cplx gc = g_common[k];
        const cplx gp = g_private[k];

        joint.resize(xc.size() * xp.size());
        for (std::size_t a = 0; a < xc.size(); ++a) {
            for (std::size_t u = 0; u < xp.size(); ++u) {
                joint[a * xp.size() + u] = gc * xc.point(a) + gp * xp.point(u);
            }
        }
        priv.resize(xp.size());
        for (std::size_t u = 0; u < xp.size(); ++u) {
            priv[u] = gp * xp.point(u);
        }

        const std::uint64_t base = mc.stream + static_cast<std::uint64_t>(k) * kRolesPerUser;
        UserEntropies ent;
        ent.joint = entropy_by_method(joint, noise_var, method, mc, base + kRoleJoint);
        ent.priv = entropy_by_method(priv, noise_var, method, mc, base + kRolePrivate);

        const double rc = std::max(0.0, log2_mc - ent.joint.value + ent.priv.value);
        const double rc_se =
            std::sqrt(ent.joint.std_error * ent.joint.std_error +
                      ent.priv.std_error * ent.priv.std_error);
        if (rc < common_rate) {
            common_rate = rc;
            common_se = rc_se;
        }

        if (mode == SicMode::sic) {
            report.private_rates[k] = std::max(0.0, log2_mk - ent.priv.value);
            report.private_std_errors[k] = ent.priv.std_error;
        } else {
            comm.resize(xc.size());
            for (std::size_t a = 0; a < xc.size(); ++a) {
                comm[a] = gc * xc.point(a);
            }
            ent.common = entropy_by_method(comm, noise_var, method, mc, base + kRoleCommon);
            report.private_rates[k] =
                std::max(0.0, log2_mk - ent.joint.value + ent.common.value);
            report.private_std_errors[k] =
                std::sqrt(ent.joint.std_error * ent.joint.std_error +
                          ent.common.std_error * ent.common.std_error);
        }
    }

    report.common_rate = common_rate;
    report.common_std_error = common_se;
    report.sum = common_rate;
    double var_sum = common_se * common_se;
    for (std::size_t k = 0; k < k_users; ++k) {
        report.sum += report.private_rates[k];
        var_sum += report.private_std_errors[k] * report.private_std_errors[k];
    }
    report.sum_std_error = std::sqrt(var_sum);
    return report;
}

CcRateReport cc_sum_rate(const ChannelRealization &channels, const PrecoderSet &precoders,
                         const Constellation &xc, const std::vector<const Constellation *> &xk,
                         SicMode mode, RateMethod method, const EntropyMcSettings &mc,
                         double noise_var) {
    check_zero_forcing(channels, precoders);
    const std::size_t k_users = channels.h.size();
    cvec g_common(k_users);
    cvec g_private(k_users);
    for (std::size_t k = 0; k < k_users; ++k) {
        g_common[k] = precoders.common_gain(channels.h[k]);
        g_private[k] = precoders.private_gain(channels.h[k], k);
    }
    return cc_sum_rate_from_gains(g_common, g_private, xc, xk, noise_var, mode, method, mc);
}

double power_allocation_search(const ChannelRealization &channels, const cvec &common_dir,
                               const std::vector<cvec> &private_dirs, double p_total,
                               AllocationObjective objective, const std::vector<double> &grid,
                               const Constellation *xc, const Constellation *xp) {
    const std::size_t k_users = channels.h.size();
    if (k_users == 0 || private_dirs.size() != k_users) {
        throw std::invalid_argument("rates: one private direction per user required");
    }
    if (grid.empty()) {
        throw std::invalid_argument("rates: empty search grid");
    }
    if (!(p_total >= 0.0) || !std::isfinite(p_total)) {
        throw std::invalid_argument("rates: total power must be non-negative");
    }
    std::vector<double> ts(grid);
    std::sort(ts.begin(), ts.end());
    if (ts.front() < 0.0 || ts.back() > 1.0) {
        throw std::invalid_argument("rates: search grid outside [0, 1]");
    }

    cvec raw_common(k_users);
    cvec raw_private(k_users);
    for (std::size_t k = 0; k < k_users; ++k) {
        raw_common[k] = inner_product(channels.h[k], common_dir);
        raw_private[k] = inner_product(channels.h[k], private_dirs[k]);
    }

    if (objective == AllocationObjective::gaussian) {
        GaussianAllocationTerms terms;
        terms.a.resize(k_users);
        std::vector<double> cg2(k_users);
        for (std::size_t k = 0; k < k_users; ++k) {
            const double gp = std::abs(raw_private[k]);
            const double gc = std::abs(raw_common[k]);
            terms.a[k] = p_total / static_cast<double>(k_users) * gp * gp;
            cg2[k] = p_total * gc * gc;
        }
        std::size_t k_prime = 0;
        double best_score = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < k_users; ++k) {
            const double score = cg2[k] / (1.0 + terms.a[k]);
            if (score < best_score) {
                best_score = score;
                k_prime = k;
            }
        }
        terms.k_prime = k_prime;
        terms.b = cg2[k_prime] - terms.a[k_prime];

        double best_t = ts.front();
        double best_val = -std::numeric_limits<double>::infinity();
        for (double t : ts) {
            const double val = sum_rate_from_terms(terms, t);
            if (val > best_val) {
                best_val = val;
                best_t = t;
            }
        }
        return best_t;
    }

    if (xc == nullptr || xp == nullptr) {
        throw std::invalid_argument(
            "rates: constellation-constrained search needs both constellations");
    }
    const SicMode mode =
        objective == AllocationObjective::cc_sic ? SicMode::sic : SicMode::non_sic;
    std::vector<const Constellation *> xk(k_users, xp);
    cvec g_common(k_users);
    cvec g_private(k_users);
    double best_t = ts.front();
    double best_val = -std::numeric_limits<double>::infinity();
    for (double t : ts) {
        const double sc = std::sqrt(p_total * t);
        const double sp = std::sqrt(p_total * (1.0 - t) / static_cast<double>(k_users));
        for (std::size_t k = 0; k < k_users; ++k) {
            g_common[k] = sc * raw_common[k];
            g_private[k] = sp * raw_private[k];
        }
        const CcRateReport report = cc_sum_rate_from_gains(
            g_common, g_private, *xc, xk, 1.0, mode, RateMethod::approx);
        if (report.sum > best_val) {
            best_val = report.sum;
            best_t = t;
        }
    }
    return best_t;
}

} // namespace rsma
