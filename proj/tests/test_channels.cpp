#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "qdiv/pinching.hpp"
#include "qdiv/random.hpp"
#include "test_helpers.hpp"

using namespace qdiv;
using qdiv_test::error_code_of;

namespace {

const Tolerances<double> tol{};

MatrixX<cxd> diag2(double a, double b) {
    MatrixX<cxd> m = MatrixX<cxd>::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

MatrixX<cxd> plus_state() { return MatrixX<cxd>::Constant(2, 2, cxd(0.5, 0.0)); }

ProjectorFamily<cxd> identity_family(Eigen::Index dim) {
    std::vector<MatrixX<cxd>> ps{MatrixX<cxd>::Identity(dim, dim)};
    return ProjectorFamily<cxd>(dim, std::move(ps));
}

// mu(k,a) = |<k|a>|^2 for a rank-1 family against a state's eigenbasis,
// computed here from scratch for the stochasticity and concavity checks.
MatrixX<double> overlap_matrix(const ProjectorFamily<cxd>& family, const DensityMatrix<cxd>& state) {
    Eigen::Index d = family.dim();
    MatrixX<double> mu(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
        // rank-1 projector: the column with the largest diagonal entry is |k> up to scale
        Eigen::Index best = 0;
        for (Eigen::Index j = 1; j < d; ++j)
            if (family[static_cast<std::size_t>(k)](j, j).real() >
                family[static_cast<std::size_t>(k)](best, best).real())
                best = j;
        VectorX<cxd> kvec = family[static_cast<std::size_t>(k)].col(best);
        kvec /= kvec.norm();
        for (Eigen::Index a = 0; a < d; ++a)
            mu(k, a) = std::norm(
                static_cast<cxd>(kvec.adjoint() * state.decomposition().eigenvectors.col(a)));
    }
    return mu;
}

}  // namespace

TEST_CASE("measure reads off a diagonal state in its own basis") {
    auto rho = validate_density(diag2(0.25, 0.75));
    auto outcomes = measure(rho, computational_basis_family<cxd>(2));
    REQUIRE(outcomes.size() == 2);
    CHECK(outcomes[0].probability == doctest::Approx(0.25));
    CHECK(outcomes[1].probability == doctest::Approx(0.75));
    REQUIRE(outcomes[0].post_state.has_value());
    CHECK((outcomes[0].post_state->matrix() - diag2(1.0, 0.0)).norm() < 1e-12);
    CHECK((outcomes[1].post_state->matrix() - diag2(0.0, 1.0)).norm() < 1e-12);
}

TEST_CASE("measure splits the plus state evenly") {
    auto rho = validate_density(plus_state());
    auto outcomes = measure(rho, computational_basis_family<cxd>(2));
    CHECK(outcomes[0].probability == doctest::Approx(0.5));
    CHECK(outcomes[1].probability == doctest::Approx(0.5));
}

TEST_CASE("measuring with the identity family is a no-op") {
    auto eng = trial_engine(31, 2, 3, 0, 0);
    auto rho = random_density<cxd>(3, 3, eng);
    auto outcomes = measure(rho, identity_family(3));
    REQUIRE(outcomes.size() == 1);
    CHECK(outcomes[0].probability == doctest::Approx(1.0));
    REQUIRE(outcomes[0].post_state.has_value());
    CHECK((outcomes[0].post_state->matrix() - rho.matrix()).norm() < 1e-12);
}

TEST_CASE("zero-probability outcomes carry no post state") {
    auto rho = validate_density(diag2(1.0, 0.0));
    auto outcomes = measure(rho, computational_basis_family<cxd>(2));
    CHECK(outcomes[0].post_state.has_value());
    CHECK_FALSE(outcomes[1].post_state.has_value());
    CHECK(outcomes[1].probability <= tol.prob);
}

TEST_CASE("measurement probabilities sum to one and post states sit in range") {
    for (std::uint64_t t = 0; t < 25; ++t) {
        auto eng = trial_engine(33, 2, 5, 0, t);
        auto rho = random_density<cxd>(5, 5, eng);
        auto parts = random_composition(5, eng);
        auto family = random_projector_family<cxd>(5, parts, eng);

        auto outcomes = measure(rho, family);
        double total = 0;
        for (const auto& out : outcomes) {
            total += out.probability;
            if (out.post_state) {
                const auto& p = family[out.index];
                // compressing again changes nothing
                REQUIRE((p * out.post_state->matrix() * p - out.post_state->matrix()).norm() <=
                        tol.recon);
            }
        }
        REQUIRE(std::abs(total - 1.0) <= tol.trace);
    }
}

TEST_CASE("pinch leaves commuting states alone and dephases the plus state") {
    auto cb = computational_basis_family<cxd>(2);

    auto diag = validate_density(diag2(0.25, 0.75));
    CHECK((pinch(diag, cb).matrix() - diag.matrix()).norm() < 1e-14);

    auto plus = validate_density(plus_state());
    CHECK((pinch(plus, cb).matrix() - MatrixX<cxd>::Identity(2, 2) / 2.0).norm() < 1e-14);

    auto eng = trial_engine(35, 2, 4, 0, 0);
    auto rho = random_density<cxd>(4, 4, eng);
    CHECK((pinch(rho, identity_family(4)).matrix() - rho.matrix()).norm() < 1e-14);
}

TEST_CASE("pinching preserves trace, is idempotent, and equals its mixture form") {
    for (std::uint64_t t = 0; t < 25; ++t) {
        auto eng = trial_engine(37, 2, 6, 0, t);
        auto rho = random_density<cxd>(6, 6, eng);
        auto parts = random_composition(6, eng);
        auto family = random_projector_family<cxd>(6, parts, eng);

        auto pinched = pinch(rho, family);
        REQUIRE(std::abs(pinched.matrix().trace().real() - 1.0) <= tol.trace);
        REQUIRE((pinch(pinched, family).matrix() - pinched.matrix()).norm() <= tol.recon);

        MatrixX<cxd> mixture = MatrixX<cxd>::Zero(6, 6);
        for (const auto& out : measure(rho, family))
            if (out.post_state) mixture += out.probability * out.post_state->matrix();
        REQUIRE((mixture - pinched.matrix()).norm() <= tol.recon);
    }
}

TEST_CASE("PinchingMap applies its family") {
    auto plus = validate_density(plus_state());
    PinchingMap<cxd> channel{computational_basis_family<cxd>(2)};
    CHECK((channel(plus).matrix() - MatrixX<cxd>::Identity(2, 2) / 2.0).norm() < 1e-14);
}

TEST_CASE("is_expectation_for detects commutation") {
    auto cb = computational_basis_family<cxd>(2);
    CHECK(is_expectation_for(cb, validate_density(diag2(0.25, 0.75))));

    auto plus = validate_density(plus_state());
    CHECK_FALSE(is_expectation_for(cb, plus));
    // the commutator of a basis projector with the plus state has norm 1/sqrt(2)
    CHECK(commutator_norm(cb[0], plus.matrix()) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

    CHECK(is_expectation_for(identity_family(2), plus));
}

TEST_CASE("pinched trace, classical route: diagonal case reduces to the scalar sum") {
    auto rho = validate_density(diag2(0.5, 0.5));
    auto sigma = validate_density(diag2(0.25, 0.75));
    EntropicIndex<double> q(0.5);
    double got = pinched_trace_classical(rho, sigma, computational_basis_family<cxd>(2), q);
    double expected = std::pow(0.5, 0.5) * std::pow(0.25, 0.5) +
                      std::pow(0.5, 0.5) * std::pow(0.75, 0.5);
    CHECK(std::abs(got - expected) <= tol.div);
}

TEST_CASE("pinched trace, classical route: equal states give one") {
    auto eng = trial_engine(41, 2, 4, 0, 0);
    auto rho = random_density<cxd>(4, 4, eng);
    std::vector<Eigen::Index> ones(4, 1);
    auto family = random_projector_family<cxd>(4, ones, eng);
    for (double qv : {0.2, 0.5, 0.8}) {
        double got = pinched_trace_classical(rho, rho, family, EntropicIndex<double>(qv));
        CHECK(std::abs(got - 1.0) <= tol.div);
    }
}

TEST_CASE("pinched trace, classical route: agrees with the dense matrix path") {
    auto eng = trial_engine(5, 2, 3, 0, 0);
    auto rho = random_density<cxd>(3, 3, eng);
    auto sigma = random_density<cxd>(3, 3, eng);
    std::vector<Eigen::Index> ones(3, 1);
    auto family = random_projector_family<cxd>(3, ones, eng);

    for (double qv : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        EntropicIndex<double> q(qv);
        double classical = pinched_trace_classical(rho, sigma, family, q);
        auto rho_p = pinch(rho, family);
        auto sigma_p = pinch(sigma, family);
        double direct = real_trace_product(matrix_power(rho_p, q.value()),
                                           matrix_power(sigma_p, q.one_minus()));
        REQUIRE(std::abs(classical - direct) <= tol.div);
    }
}

TEST_CASE("pinched trace rejects families with higher-rank projectors") {
    auto rho = validate_density(diag2(0.5, 0.5));
    CHECK(error_code_of([&] {
              pinched_trace_classical(rho, rho, identity_family(2), EntropicIndex<double>(0.5));
          }) == ErrorCode::NotRankOneFamily);
}

TEST_CASE("overlap matrices are doubly stochastic") {
    for (std::uint64_t t = 0; t < 25; ++t) {
        auto eng = trial_engine(43, 2, 5, 0, t);
        auto rho = random_density<cxd>(5, 5, eng);
        std::vector<Eigen::Index> ones(5, 1);
        auto family = random_projector_family<cxd>(5, ones, eng);
        MatrixX<double> mu = overlap_matrix(family, rho);
        for (Eigen::Index i = 0; i < 5; ++i) {
            REQUIRE(std::abs(mu.row(i).sum() - 1.0) <= tol.trace);
            REQUIRE(std::abs(mu.col(i).sum() - 1.0) <= tol.trace);
        }
    }
}

TEST_CASE("power concavity bounds the pinched trace from below") {
    // sum_k [sum_a r mu]^q [sum_b s nu]^{1-q}
    //   >= sum_k (sum_a mu r^q)(sum_b nu s^{1-q})
    for (std::uint64_t t = 0; t < 25; ++t) {
        auto eng = trial_engine(47, 2, 4, 0, t);
        auto rho = random_density<cxd>(4, 4, eng);
        auto sigma = random_density<cxd>(4, 4, eng);
        std::vector<Eigen::Index> ones(4, 1);
        auto family = random_projector_family<cxd>(4, ones, eng);

        MatrixX<double> mu = overlap_matrix(family, rho);
        MatrixX<double> nu = overlap_matrix(family, sigma);
        for (double qv : {0.2, 0.5, 0.8}) {
            EntropicIndex<double> q(qv);
            double lhs = pinched_trace_classical(rho, sigma, family, q);
            double rhs = 0;
            for (Eigen::Index k = 0; k < 4; ++k) {
                double r_part = 0, s_part = 0;
                for (Eigen::Index a = 0; a < 4; ++a)
                    r_part += mu(k, a) * std::pow(rho.eigenvalues()[a], qv);
                for (Eigen::Index b = 0; b < 4; ++b)
                    s_part += nu(k, b) * std::pow(sigma.eigenvalues()[b], 1.0 - qv);
                rhs += r_part * s_part;
            }
            REQUIRE(lhs >= rhs - tol.div);
        }
    }
}

TEST_CASE("monotonicity gap vanishes at equal arguments") {
    auto eng = trial_engine(51, 2, 3, 0, 0);
    auto rho = random_density<cxd>(3, 3, eng);
    auto parts = random_composition(3, eng);
    auto family = random_projector_family<cxd>(3, parts, eng);
    CHECK(std::abs(monotonicity_gap(rho, rho, family, EntropicIndex<double>(0.5))) <= tol.div);
}

TEST_CASE("monotonicity gap on the worked 2x2 example") {
    auto rho = validate_density(plus_state());
    auto sigma = validate_density(diag2(0.25, 0.75));
    auto cb = computational_basis_family<cxd>(2);
    EntropicIndex<double> q(0.5);

    REQUIRE(is_expectation_for(cb, sigma));
    double gap = monotonicity_gap(rho, sigma, cb, q);
    CHECK(gap >= -tol.div);

    // the channel sends rho to I/2 and fixes sigma, so the after-value is the
    // frozen anchor of the divergences suite
    double after = q_divergence(pinch(rho, cb), pinch(sigma, cb), q).value;
    CHECK(std::abs(after - 0.06814834742186315) <= tol.div);
    double before = q_divergence(rho, sigma, q).value;
    CHECK(gap == doctest::Approx(before - after).epsilon(1e-12));
}

TEST_CASE("divergence never increases under commuting measurements") {
    for (int dim : {2, 4, 7}) {
        for (std::uint64_t t = 0; t < 40; ++t) {
            auto eng = trial_engine(53, 2, static_cast<std::uint32_t>(dim), 0, t);
            auto sigma = random_density<cxd>(dim, dim, eng);
            auto parts = random_composition(dim, eng);
            auto family = family_from_basis_groups(sigma.decomposition().eigenvectors, parts);
            auto rho = random_density<cxd>(dim, dim, eng);

            REQUIRE(is_expectation_for(family, sigma));
            for (double qv : {0.1, 0.5, 0.9})
                REQUIRE(monotonicity_gap(rho, sigma, family, EntropicIndex<double>(qv)) >=
                        -tol.div);
        }
    }
}

TEST_CASE("dimension mismatches are rejected across the module") {
    auto rho2 = validate_density(diag2(0.5, 0.5));
    auto cb3 = computational_basis_family<cxd>(3);
    CHECK(error_code_of([&] { measure(rho2, cb3); }) == ErrorCode::DimensionMismatch);
    CHECK(error_code_of([&] { pinch(rho2, cb3); }) == ErrorCode::DimensionMismatch);
    CHECK(error_code_of([&] { is_expectation_for(cb3, rho2); }) == ErrorCode::DimensionMismatch);
    CHECK(error_code_of([&] {
              monotonicity_gap(rho2, rho2, cb3, EntropicIndex<double>(0.5));
          }) == ErrorCode::DimensionMismatch);
}
