#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qdiv/pinching.hpp"
#include "qdiv/random.hpp"

namespace qdiv {

enum class SuiteKind {
    Nonnegativity,
    Pseudoadditivity,
    JointConvexity,
    LiebConcavity,
    Monotonicity,
    ExploreNoncommuting,
    PinchedTraceOracle,
    QLimit,
};

inline const char* suite_name(SuiteKind k) {
    switch (k) {
        case SuiteKind::Nonnegativity: return "nonneg";
        case SuiteKind::Pseudoadditivity: return "pseudoadd";
        case SuiteKind::JointConvexity: return "convexity";
        case SuiteKind::LiebConcavity: return "lieb";
        case SuiteKind::Monotonicity: return "monotonicity";
        case SuiteKind::ExploreNoncommuting: return "explore-noncommuting";
        case SuiteKind::PinchedTraceOracle: return "oracle-eq13";
        case SuiteKind::QLimit: return "qlimit";
    }
    return "unknown";
}

inline std::optional<SuiteKind> suite_from_name(const std::string& name) {
    for (SuiteKind k : {SuiteKind::Nonnegativity, SuiteKind::Pseudoadditivity,
                        SuiteKind::JointConvexity, SuiteKind::LiebConcavity,
                        SuiteKind::Monotonicity, SuiteKind::ExploreNoncommuting,
                        SuiteKind::PinchedTraceOracle, SuiteKind::QLimit})
        if (name == suite_name(k)) return k;
    return std::nullopt;
}

/// The qlimit suite requires the divergence gap at the top of its index
/// ladder to fall below this bound.
inline constexpr double qlimit_gap_bound = 1e-3;

/// Support floor for the qlimit ensemble: both states are mixed with I/d at
/// this weight.  The gap at index q is (1-q)/2 * Tr[rho (ln rho - ln sigma)^2]
/// to first order, and the floor caps every log-ratio at ln(33) for dims up
/// to 8, keeping the gap at the 0.9999 rung below qlimit_gap_bound for every
/// pair rather than for typical ones.
inline constexpr double qlimit_support_floor = 0.2;

struct TrialConfig {
    SuiteKind suite = SuiteKind::Nonnegativity;
    std::vector<int> dims;            // empty -> default 2..8
    std::vector<double> q_values;     // empty -> per-suite default grid
    std::uint64_t trials = 100;       // per (dim, q) cell
    std::uint64_t seed = 42;
};

inline std::vector<int> default_dims() { return {2, 3, 4, 5, 6, 7, 8}; }

inline std::vector<double> default_q_grid(SuiteKind k) {
    switch (k) {
        case SuiteKind::LiebConcavity: return {0.3, 0.5, 0.7};
        case SuiteKind::QLimit: return {0.9, 0.99, 0.999, 0.9999};
        default: return {0.1, 0.3, 0.5, 0.7, 0.9};
    }
}

/// Identifies one trial; enough to replay it in isolation.
struct TrialRecord {
    int dim = 0;
    double q = 0;  // the q (or exponent x) of the cell; first ladder entry for qlimit
    std::uint64_t trial = 0;
    double margin = 0;
};

/// Outcome of a suite run.  `margin` per trial is the slack of the property
/// being checked (equality checks record the negated absolute difference), a
/// violation is a trial with margin < -tol_div, and worst_margin is the
/// minimum margin over all trials.
struct PropertyReport {
    std::string suite;
    bool asserting = true;  // exploratory suites record violations but never fail a run
    std::uint64_t trials_run = 0;
    std::uint64_t violations = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;
    double elapsed_seconds = 0;
    std::uint64_t sampler_rejections = 0;
    std::vector<TrialRecord> sample_log;  // first trials of the run, for margin audits
    std::optional<TrialRecord> first_violation;
};

namespace detail {

inline constexpr int sampler_max_attempts = 100;

template <typename Fn>
auto sample_valid(Fn&& make, std::uint64_t& rejections) {
    for (int attempt = 0; attempt + 1 < sampler_max_attempts; ++attempt) {
        try {
            return make();
        } catch (const Error&) {
            ++rejections;
        }
    }
    return make();  // final attempt propagates the failure
}

template <typename Scalar>
double nonneg_trial(int dim, const EntropicIndex<double>& q, std::mt19937_64& eng,
                    const Tolerances<double>& tol, std::uint64_t& rejections) {
    auto rho = sample_valid([&] { return random_density<Scalar>(dim, dim, eng, tol); }, rejections);
    auto sigma = sample_valid([&] { return random_density<Scalar>(dim, dim, eng, tol); }, rejections);
    double cross = q_divergence(rho, sigma, q).value;
    double self = q_divergence(rho, rho, q).value;
    // cross must stay >= -tol_div, self must stay <= tol_div
    return std::min(cross, -self);
}

template <typename Scalar>
double pseudoadd_trial(int dim, const EntropicIndex<double>& q, std::mt19937_64& eng,
                       const Tolerances<double>& tol, std::uint64_t& rejections) {
    auto draw = [&] { return random_density<Scalar>(dim, dim, eng, tol); };
    auto rho1 = sample_valid(draw, rejections);
    auto sigma1 = sample_valid(draw, rejections);
    auto rho2 = sample_valid(draw, rejections);
    auto sigma2 = sample_valid(draw, rejections);
    auto k1 = q_divergence(rho1, sigma1, q);
    auto k2 = q_divergence(rho2, sigma2, q);
    double composed = pseudoadditivity_compose(k1, k2);
    double joint =
        q_divergence(tensor_product(rho1, rho2, tol), tensor_product(sigma1, sigma2, tol), q).value;
    return -std::abs(joint - composed);
}

template <typename Scalar>
double convexity_trial(int dim, const EntropicIndex<double>& q, std::mt19937_64& eng,
                       const Tolerances<double>& tol, std::uint64_t& rejections) {
    std::uniform_int_distribution<int> n_dist(2, 4);
    int n = n_dist(eng);
    auto weights = random_simplex_weights<double>(static_cast<std::size_t>(n), eng);

    MatrixX<Scalar> rho_mix = MatrixX<Scalar>::Zero(dim, dim);
    MatrixX<Scalar> sigma_mix = MatrixX<Scalar>::Zero(dim, dim);
    double weighted_sum = 0;
    for (int i = 0; i < n; ++i) {
        auto rho = sample_valid([&] { return random_density<Scalar>(dim, dim, eng, tol); }, rejections);
        auto sigma =
            sample_valid([&] { return random_density<Scalar>(dim, dim, eng, tol); }, rejections);
        weighted_sum += weights[static_cast<std::size_t>(i)] * q_divergence(rho, sigma, q).value;
        rho_mix += weights[static_cast<std::size_t>(i)] * rho.matrix();
        sigma_mix += weights[static_cast<std::size_t>(i)] * sigma.matrix();
    }
    double mixed = q_divergence(DensityMatrix<Scalar>(rho_mix, tol),
                                DensityMatrix<Scalar>(sigma_mix, tol), q)
                       .value;
    return weighted_sum - mixed;
}

template <typename Scalar>
double lieb_trial(int dim, const EntropicIndex<double>& x, std::mt19937_64& eng,
                  const Tolerances<double>& tol, std::uint64_t& rejections) {
    (void)rejections;  // unnormalized positive samples cannot fail validation
    auto term = [&](const MatrixX<Scalar>& l, const MatrixX<Scalar>& m) {
        MatrixX<Scalar> lp = psd_power(spectral_decompose(l, tol.herm), x.one_minus(), tol.psd);
        MatrixX<Scalar> mp = psd_power(spectral_decompose(m, tol.herm), x.value(), tol.psd);
        return real_trace_product(lp, mp);
    };
    MatrixX<Scalar> l1 = random_positive<Scalar>(dim, eng);
    MatrixX<Scalar> m1 = random_positive<Scalar>(dim, eng);
    MatrixX<Scalar> l2 = random_positive<Scalar>(dim, eng);
    MatrixX<Scalar> m2 = random_positive<Scalar>(dim, eng);
    MatrixX<Scalar> lbar = (l1 + l2) / 2.0;
    MatrixX<Scalar> mbar = (m1 + m2) / 2.0;
    return term(lbar, mbar) - 0.5 * term(l1, m1) - 0.5 * term(l2, m2);
}

// Shared body of the monotonicity and exploratory suites: the slack is the
// smaller of the divergence drop and the pinched-trace increase.
template <typename Scalar>
double measurement_trial(int dim, const EntropicIndex<double>& q, std::mt19937_64& eng,
                         const Tolerances<double>& tol, std::uint64_t& rejections,
                         bool commuting_family) {
    auto sigma = sample_valid([&] { return random_density<Scalar>(dim, dim, eng, tol); }, rejections);
    auto parts = random_composition(dim, eng);
    auto family = commuting_family
                      ? sample_valid(
                            [&] {
                                return family_from_basis_groups(
                                    sigma.decomposition().eigenvectors, parts, tol);
                            },
                            rejections)
                      : sample_valid(
                            [&] { return random_projector_family<Scalar>(dim, parts, eng, tol); },
                            rejections);
    auto rho = sample_valid([&] { return random_density<Scalar>(dim, dim, eng, tol); }, rejections);

    double gap = monotonicity_gap(rho, sigma, family, q, tol);
    double t_before = real_trace_product(matrix_power(rho, q.value()),
                                         matrix_power(sigma, q.one_minus()));
    auto rho_p = pinch(rho, family, tol);
    auto sigma_p = pinch(sigma, family, tol);
    double t_after = real_trace_product(matrix_power(rho_p, q.value()),
                                        matrix_power(sigma_p, q.one_minus()));
    return std::min(gap, t_after - t_before);
}

template <typename Scalar>
double pinched_oracle_trial(int dim, const EntropicIndex<double>& q, std::mt19937_64& eng,
                            const Tolerances<double>& tol, std::uint64_t& rejections) {
    auto rho = sample_valid([&] { return random_density<Scalar>(dim, dim, eng, tol); }, rejections);
    auto sigma = sample_valid([&] { return random_density<Scalar>(dim, dim, eng, tol); }, rejections);
    std::vector<Eigen::Index> ones(static_cast<std::size_t>(dim), 1);
    auto family = sample_valid(
        [&] { return random_projector_family<Scalar>(dim, ones, eng, tol); }, rejections);

    double classical = pinched_trace_classical(rho, sigma, family, q, tol);
    auto rho_p = pinch(rho, family, tol);
    auto sigma_p = pinch(sigma, family, tol);
    double direct = real_trace_product(matrix_power(rho_p, q.value()),
                                       matrix_power(sigma_p, q.one_minus()));
    return -std::abs(classical - direct);
}

template <typename Scalar>
double qlimit_trial(int dim, const std::vector<double>& ladder, std::mt19937_64& eng,
                    const Tolerances<double>& tol, std::uint64_t& rejections) {
    auto floored = [&] {
        auto raw = random_density<Scalar>(dim, dim, eng, tol);
        MatrixX<Scalar> flat = MatrixX<Scalar>::Identity(dim, dim) / double(dim);
        return DensityMatrix<Scalar>(
            MatrixX<Scalar>((1.0 - qlimit_support_floor) * raw.matrix() +
                            qlimit_support_floor * flat),
            tol);
    };
    auto rho = sample_valid(floored, rejections);
    auto sigma = sample_valid(floored, rejections);
    std::vector<EntropicIndex<double>> qs;
    qs.reserve(ladder.size());
    for (double q : ladder) qs.emplace_back(q);
    auto gaps = q_limit_check(rho, sigma, qs, tol);

    double margin = qlimit_gap_bound - gaps.back();
    for (std::size_t i = 0; i + 1 < gaps.size(); ++i)
        if (ladder[i] >= 0.9 && ladder[i + 1] >= 0.9)
            margin = std::min(margin, gaps[i] - gaps[i + 1]);
    return margin;
}

}  // namespace detail

/// Replays a single trial and returns its margin.  The suites are built out
/// of this function, so any (seed, dim, q-index, trial) reported by a run can
/// be reproduced on its own.
template <typename Scalar = cxd>
double run_trial(SuiteKind kind, int dim, const std::vector<double>& q_values, std::size_t q_index,
                 std::uint64_t seed, std::uint64_t trial, const Tolerances<double>& tol,
                 std::uint64_t& rejections) {
    auto eng = trial_engine(seed, static_cast<std::uint32_t>(kind), static_cast<std::uint32_t>(dim),
                            static_cast<std::uint32_t>(q_index), trial);
    switch (kind) {
        case SuiteKind::Nonnegativity:
            return detail::nonneg_trial<Scalar>(dim, EntropicIndex<double>(q_values[q_index]), eng,
                                                tol, rejections);
        case SuiteKind::Pseudoadditivity:
            return detail::pseudoadd_trial<Scalar>(dim, EntropicIndex<double>(q_values[q_index]),
                                                   eng, tol, rejections);
        case SuiteKind::JointConvexity:
            return detail::convexity_trial<Scalar>(dim, EntropicIndex<double>(q_values[q_index]),
                                                   eng, tol, rejections);
        case SuiteKind::LiebConcavity:
            return detail::lieb_trial<Scalar>(dim, EntropicIndex<double>(q_values[q_index]), eng,
                                              tol, rejections);
        case SuiteKind::Monotonicity:
            return detail::measurement_trial<Scalar>(
                dim, EntropicIndex<double>(q_values[q_index]), eng, tol, rejections, true);
        case SuiteKind::ExploreNoncommuting:
            return detail::measurement_trial<Scalar>(
                dim, EntropicIndex<double>(q_values[q_index]), eng, tol, rejections, false);
        case SuiteKind::PinchedTraceOracle:
            return detail::pinched_oracle_trial<Scalar>(
                dim, EntropicIndex<double>(q_values[q_index]), eng, tol, rejections);
        case SuiteKind::QLimit:
            return detail::qlimit_trial<Scalar>(dim, q_values, eng, tol, rejections);
    }
    throw Error(ErrorCode::BadTrialConfig, "unknown suite");
}

inline void validate_config(const TrialConfig& cfg) {
    if (cfg.trials < 1) throw Error(ErrorCode::BadTrialConfig, "trials must be at least 1");
    for (int d : cfg.dims)
        if (d < 2) throw Error(ErrorCode::BadTrialConfig, "dims must be at least 2");
    for (double q : cfg.q_values)
        if (!(q > 0.0 && q < 1.0))
            throw Error(ErrorCode::BadTrialConfig, "q values must lie strictly inside (0,1)");
    if (cfg.suite == SuiteKind::QLimit)
        for (std::size_t i = 1; i < cfg.q_values.size(); ++i)
            if (!(cfg.q_values[i] > cfg.q_values[i - 1]))
                throw Error(ErrorCode::BadTrialConfig, "qlimit ladder must be strictly increasing");
}

/// Runs one suite over the (dim, q, trial) grid.  Aggregation is a count and
/// a minimum, so the result does not depend on trial order.
template <typename Scalar = cxd>
PropertyReport run_suite(TrialConfig cfg, const Tolerances<double>& tol = Tolerances<double>{}) {
    if (cfg.dims.empty()) cfg.dims = default_dims();
    if (cfg.q_values.empty()) cfg.q_values = default_q_grid(cfg.suite);
    validate_config(cfg);

    PropertyReport report;
    report.suite = suite_name(cfg.suite);
    report.asserting = cfg.suite != SuiteKind::ExploreNoncommuting;
    report.seed = cfg.seed;

    // qlimit consumes its whole ladder inside each trial; other suites visit
    // the q grid cell by cell.
    const std::size_t q_cells = cfg.suite == SuiteKind::QLimit ? 1 : cfg.q_values.size();

    auto start = std::chrono::steady_clock::now();
    for (int dim : cfg.dims) {
        for (std::size_t qi = 0; qi < q_cells; ++qi) {
            for (std::uint64_t t = 0; t < cfg.trials; ++t) {
                double margin = run_trial<Scalar>(cfg.suite, dim, cfg.q_values, qi, cfg.seed, t,
                                                  tol, report.sampler_rejections);
                ++report.trials_run;
                TrialRecord rec{dim, cfg.q_values[qi], t, margin};
                if (report.sample_log.size() < 10) report.sample_log.push_back(rec);
                report.worst_margin = std::min(report.worst_margin, margin);
                if (margin < -tol.div) {
                    ++report.violations;
                    if (!report.first_violation) report.first_violation = rec;
                }
            }
        }
    }
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace qdiv
