#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "qdiv/density.hpp"
#include "qdiv/divergence.hpp"
#include "qdiv/projectors.hpp"

namespace qdiv {

/// One outcome of a projective measurement: its index, probability, and the
/// normalized post-measurement state.  Outcomes whose probability falls at or
/// below tol_prob carry no post state (the normalization is undefined there).
template <typename Scalar>
struct MeasurementOutcome {
    std::size_t index;
    RealOf<Scalar> probability;
    std::optional<DensityMatrix<Scalar>> post_state;
};

template <typename Scalar>
void require_matching_dim(const DensityMatrix<Scalar>& rho, const ProjectorFamily<Scalar>& family) {
    if (rho.dim() != family.dim())
        throw Error(ErrorCode::DimensionMismatch, "state and projector family dimensions differ");
}

/// Projective measurement of rho: outcome k occurs with probability
/// Tr(rho P_k) and leaves the state P_k rho P_k / p_k.
template <typename Scalar>
std::vector<MeasurementOutcome<Scalar>> measure(const DensityMatrix<Scalar>& rho,
                                                const ProjectorFamily<Scalar>& family,
                                                const Tolerances<RealOf<Scalar>>& tol =
                                                    Tolerances<RealOf<Scalar>>{}) {
    using Real = RealOf<Scalar>;
    require_matching_dim(rho, family);

    std::vector<MeasurementOutcome<Scalar>> outcomes;
    outcomes.reserve(family.size());
    for (std::size_t k = 0; k < family.size(); ++k) {
        MatrixX<Scalar> compressed = family[k] * rho.matrix() * family[k];
        Real p = std::real(compressed.trace());
        if (p < Real(0)) p = Real(0);
        MeasurementOutcome<Scalar> out{k, p, std::nullopt};
        if (p > tol.prob)
            out.post_state.emplace(MatrixX<Scalar>(compressed / p), tol);
        outcomes.push_back(std::move(out));
    }
    return outcomes;
}

/// The pinching channel sum_k P_k rho P_k; positive and trace preserving.
template <typename Scalar>
DensityMatrix<Scalar> pinch(const DensityMatrix<Scalar>& rho, const ProjectorFamily<Scalar>& family,
                            const Tolerances<RealOf<Scalar>>& tol = Tolerances<RealOf<Scalar>>{}) {
    require_matching_dim(rho, family);
    MatrixX<Scalar> out = MatrixX<Scalar>::Zero(rho.dim(), rho.dim());
    for (std::size_t k = 0; k < family.size(); ++k)
        out += family[k] * rho.matrix() * family[k];
    return DensityMatrix<Scalar>(out, tol);
}

/// A projector family viewed as the channel it induces.
template <typename Scalar>
struct PinchingMap {
    ProjectorFamily<Scalar> family;

    DensityMatrix<Scalar> operator()(const DensityMatrix<Scalar>& rho,
                                     const Tolerances<RealOf<Scalar>>& tol =
                                         Tolerances<RealOf<Scalar>>{}) const {
        return pinch(rho, family, tol);
    }
};

/// True iff every projector commutes with sigma (Frobenius norm of each
/// commutator at most tol_comm).  This is the hypothesis under which the
/// divergence is guaranteed not to increase.
template <typename Scalar>
bool is_expectation_for(const ProjectorFamily<Scalar>& family, const DensityMatrix<Scalar>& sigma,
                        const Tolerances<RealOf<Scalar>>& tol = Tolerances<RealOf<Scalar>>{}) {
    if (family.dim() != sigma.dim())
        throw Error(ErrorCode::DimensionMismatch, "state and projector family dimensions differ");
    for (std::size_t k = 0; k < family.size(); ++k)
        if (commutator_norm(family[k], sigma.matrix()) > tol.comm) return false;
    return true;
}

namespace detail {

// Unit vector |k> of a rank-1 projector |k><k|: the column holding the
// largest diagonal entry, normalized.
template <typename Scalar>
VectorX<Scalar> rank_one_vector(const MatrixX<Scalar>& p) {
    using Real = RealOf<Scalar>;
    Eigen::Index best = 0;
    Real best_val = Real(-1);
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
        Real d = std::real(p(j, j));
        if (d > best_val) {
            best_val = d;
            best = j;
        }
    }
    VectorX<Scalar> v = p.col(best);
    return v / v.norm();
}

}  // namespace detail

/// Tr{ [Pi(rho)]^q [Pi(sigma)]^{1-q} } for a rank-1 family, evaluated from
/// spectral data alone: with overlaps mu(k,a) = |<k|a>|^2 and
/// nu(k,b) = |<k|b>|^2 this equals
///   sum_k [sum_a r(a) mu(k,a)]^q [sum_b s(b) nu(k,b)]^{1-q}.
/// Serves as a classical cross-check of the dense matrix path.
template <typename Scalar>
RealOf<Scalar> pinched_trace_classical(const DensityMatrix<Scalar>& rho,
                                       const DensityMatrix<Scalar>& sigma,
                                       const ProjectorFamily<Scalar>& family,
                                       const EntropicIndex<RealOf<Scalar>>& q,
                                       const Tolerances<RealOf<Scalar>>& tol =
                                           Tolerances<RealOf<Scalar>>{}) {
    using Real = RealOf<Scalar>;
    require_matching_dim(rho, family);
    require_matching_dim(sigma, family);

    for (std::size_t k = 0; k < family.size(); ++k) {
        Real rank = std::real(family[k].trace());
        if (std::abs(rank - Real(1)) > tol.proj)
            throw Error(ErrorCode::NotRankOneFamily,
                        "projector " + std::to_string(k) + " has rank " +
                            std::to_string(static_cast<double>(rank)));
    }

    const auto& r = rho.eigenvalues();
    const auto& s = sigma.eigenvalues();
    Real total = Real(0);
    for (std::size_t k = 0; k < family.size(); ++k) {
        VectorX<Scalar> basis_vec = detail::rank_one_vector(family[k]);
        Real p_rho = Real(0), p_sigma = Real(0);
        for (Eigen::Index a = 0; a < r.size(); ++a) {
            Real mu = std::norm(static_cast<Scalar>(basis_vec.adjoint() *
                                                    rho.decomposition().eigenvectors.col(a)));
            p_rho += r[a] * mu;
        }
        for (Eigen::Index b = 0; b < s.size(); ++b) {
            Real nu = std::norm(static_cast<Scalar>(basis_vec.adjoint() *
                                                    sigma.decomposition().eigenvectors.col(b)));
            p_sigma += s[b] * nu;
        }
        Real term_rho = p_rho > Real(0) ? std::pow(p_rho, q.value()) : Real(0);
        Real term_sigma = p_sigma > Real(0) ? std::pow(p_sigma, q.one_minus()) : Real(0);
        total += term_rho * term_sigma;
    }
    return total;
}

/// K_q[rho||sigma] - K_q[Pi(rho)||Pi(sigma)].  Nonnegative (within tol_div)
/// whenever the family commutes with sigma; computed, not asserted, for
/// arbitrary families.
template <typename Scalar>
RealOf<Scalar> monotonicity_gap(const DensityMatrix<Scalar>& rho, const DensityMatrix<Scalar>& sigma,
                                const ProjectorFamily<Scalar>& family,
                                const EntropicIndex<RealOf<Scalar>>& q,
                                const Tolerances<RealOf<Scalar>>& tol = Tolerances<RealOf<Scalar>>{}) {
    if (rho.dim() != sigma.dim())
        throw Error(ErrorCode::DimensionMismatch, "monotonicity gap on mismatched dimensions");
    require_matching_dim(rho, family);
    auto before = q_divergence(rho, sigma, q);
    auto after = q_divergence(pinch(rho, family, tol), pinch(sigma, family, tol), q);
    return before.value - after.value;
}

}  // namespace qdiv
