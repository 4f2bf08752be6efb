#pragma once

#include <cmath>
#include <vector>

#include "qdiv/density.hpp"
#include "qdiv/entropic.hpp"
#include "qdiv/hermitian.hpp"

namespace qdiv {

/// A divergence evaluation tagged with the index it was computed at.  The raw
/// value is kept as computed; reporting layers may clamp [-tol_div, 0) to 0,
/// the library never does.
template <typename Real = double>
struct DivergenceValue {
    Real value;
    EntropicIndex<Real> q;
};

/// Tsallis entropy (Tr rho^q - 1) / (1 - q); zero on pure states.
template <typename Scalar>
RealOf<Scalar> tsallis_entropy(const DensityMatrix<Scalar>& rho,
                               const EntropicIndex<RealOf<Scalar>>& q) {
    using Real = RealOf<Scalar>;
    Real power_sum = Real(0);
    for (Eigen::Index i = 0; i < rho.eigenvalues().size(); ++i) {
        Real w = rho.eigenvalues()[i];
        if (w > Real(0)) power_sum += std::pow(w, q.value());
    }
    return (power_sum - Real(1)) / q.one_minus();
}

/// q-divergence in the power-trace form [1 - Tr(rho^q sigma^{1-q})] / (1-q).
/// Finite for any pair of states by the 0^p = 0 convention, including pairs
/// whose supports are not nested.
template <typename Scalar>
DivergenceValue<RealOf<Scalar>> q_divergence(const DensityMatrix<Scalar>& rho,
                                             const DensityMatrix<Scalar>& sigma,
                                             const EntropicIndex<RealOf<Scalar>>& q) {
    using Real = RealOf<Scalar>;
    if (rho.dim() != sigma.dim())
        throw Error(ErrorCode::DimensionMismatch, "q_divergence on mismatched dimensions");
    MatrixX<Scalar> rq = matrix_power(rho, q.value());
    MatrixX<Scalar> s1q = matrix_power(sigma, q.one_minus());
    Real t = real_trace_product(rq, s1q);
    return {(Real(1) - t) / q.one_minus(), q};
}

/// Same divergence through the deformed-log route Tr[rho^q (ln_q rho - ln_q sigma)],
/// with ln_q applied eigenvalue-wise and ln_q(0) taken as its finite limit.
/// Agrees with q_divergence to within tol_div; kept as an independent path.
template <typename Scalar>
DivergenceValue<RealOf<Scalar>> q_divergence_qlog(const DensityMatrix<Scalar>& rho,
                                                  const DensityMatrix<Scalar>& sigma,
                                                  const EntropicIndex<RealOf<Scalar>>& q) {
    using Real = RealOf<Scalar>;
    if (rho.dim() != sigma.dim())
        throw Error(ErrorCode::DimensionMismatch, "q_divergence on mismatched dimensions");
    MatrixX<Scalar> rq = matrix_power(rho, q.value());
    MatrixX<Scalar> log_rho = rho.decomposition().apply([&](Real w) { return q_log_or_limit(w, q); });
    MatrixX<Scalar> log_sigma =
        sigma.decomposition().apply([&](Real w) { return q_log_or_limit(w, q); });
    Real value = real_trace_product(rq, MatrixX<Scalar>(log_rho - log_sigma));
    return {value, q};
}

/// Umegaki relative entropy Tr[rho (ln rho - ln sigma)], evaluated on sigma's
/// support.  Requires the support of rho to sit inside the support of sigma;
/// otherwise the quantity is singular and SupportViolation is thrown.
template <typename Scalar>
RealOf<Scalar> umegaki_divergence(const DensityMatrix<Scalar>& rho,
                                  const DensityMatrix<Scalar>& sigma,
                                  const Tolerances<RealOf<Scalar>>& tol = Tolerances<RealOf<Scalar>>{}) {
    using Real = RealOf<Scalar>;
    if (rho.dim() != sigma.dim())
        throw Error(ErrorCode::DimensionMismatch, "umegaki_divergence on mismatched dimensions");
    if (!support_contained(rho, sigma, tol))
        throw Error(ErrorCode::SupportViolation,
                    "support of rho is not contained in the support of sigma");

    // Tr(rho ln rho) over rho's spectrum, with x ln x -> 0 at x = 0.
    Real value = Real(0);
    for (Eigen::Index i = 0; i < rho.eigenvalues().size(); ++i) {
        Real w = rho.eigenvalues()[i];
        if (w > Real(0)) value += w * std::log(w);
    }

    // Tr(rho ln sigma) restricted to sigma's supported eigenvectors; the
    // kernel contributes nothing by the containment precondition.
    Eigen::Index rank_sigma = support_rank(sigma, tol);
    for (Eigen::Index b = 0; b < rank_sigma; ++b) {
        VectorX<Scalar> vb = sigma.decomposition().eigenvectors.col(b);
        Real weight = std::real(static_cast<Scalar>(vb.adjoint() * rho.matrix() * vb));
        value -= weight * std::log(sigma.eigenvalues()[b]);
    }
    return value;
}

/// |K_q - K_Umegaki| along an increasing sequence of indices approaching 1.
template <typename Scalar>
std::vector<RealOf<Scalar>> q_limit_check(const DensityMatrix<Scalar>& rho,
                                          const DensityMatrix<Scalar>& sigma,
                                          const std::vector<EntropicIndex<RealOf<Scalar>>>& q_sequence,
                                          const Tolerances<RealOf<Scalar>>& tol =
                                              Tolerances<RealOf<Scalar>>{}) {
    using Real = RealOf<Scalar>;
    for (std::size_t i = 1; i < q_sequence.size(); ++i)
        if (!(q_sequence[i].value() > q_sequence[i - 1].value()))
            throw Error(ErrorCode::BadArgument, "q sequence must be strictly increasing");

    Real limit = umegaki_divergence(rho, sigma, tol);  // throws SupportViolation if singular
    std::vector<Real> gaps;
    gaps.reserve(q_sequence.size());
    for (const auto& q : q_sequence)
        gaps.push_back(std::abs(q_divergence(rho, sigma, q).value - limit));
    return gaps;
}

/// Composition law for divergences of product states:
/// k1 + k2 + (q - 1) k1 k2.  Both operands must carry the same index.
template <typename Real>
Real pseudoadditivity_compose(const DivergenceValue<Real>& k1, const DivergenceValue<Real>& k2) {
    if (k1.q != k2.q)
        throw Error(ErrorCode::IndexMismatch, "composed divergences carry different indices");
    return k1.value + k2.value + (k1.q.value() - Real(1)) * k1.value * k2.value;
}

}  // namespace qdiv
