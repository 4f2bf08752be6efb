#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "qdiv/errors.hpp"
#include "qdiv/hermitian.hpp"
#include "qdiv/types.hpp"

namespace qdiv {

/// Eigenvalues (descending) and matching orthonormal eigenvector columns of a
/// Hermitian matrix.  Reconstruction V diag(w) V^dag reproduces the source.
template <typename Scalar>
struct SpectralDecomposition {
    using Real = RealOf<Scalar>;

    VectorX<Real> eigenvalues;    // descending
    MatrixX<Scalar> eigenvectors; // column i pairs with eigenvalues[i]

    Eigen::Index dim() const { return eigenvalues.size(); }

    MatrixX<Scalar> reconstruct() const {
        return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.adjoint();
    }

    /// V f(w) V^dag with f applied to each eigenvalue.
    template <typename Fn>
    MatrixX<Scalar> apply(Fn&& f) const {
        VectorX<Real> mapped(eigenvalues.size());
        for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) mapped[i] = f(eigenvalues[i]);
        return eigenvectors * mapped.asDiagonal() * eigenvectors.adjoint();
    }
};

namespace detail {

// Index of the first component of v attaining the largest modulus.
template <typename Scalar>
Eigen::Index leading_component(const VectorX<Scalar>& v) {
    using Real = RealOf<Scalar>;
    Real best = Real(-1);
    Eigen::Index at = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        Real a = std::abs(v[i]);
        if (a > best) {
            best = a;
            at = i;
        }
    }
    return at;
}

}  // namespace detail

/// Spectral decomposition of a Hermitian matrix.  Eigenvalues come out
/// descending; exact ties are ordered by the index of each eigenvector's
/// leading component, and each eigenvector's leading component is rotated to
/// the positive real axis so repeated runs print identically.
template <typename Derived>
SpectralDecomposition<typename Derived::Scalar> spectral_decompose(
    const Eigen::MatrixBase<Derived>& m,
    RealOf<typename Derived::Scalar> tol_herm = Tolerances<RealOf<typename Derived::Scalar>>{}.herm) {
    using Scalar = typename Derived::Scalar;
    using Real = RealOf<Scalar>;

    require_hermitian(m, tol_herm);

    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(m);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorCode::ConvergenceFailure, "eigensolver did not converge");

    const Eigen::Index n = m.rows();
    VectorX<Real> w = solver.eigenvalues();
    MatrixX<Scalar> v = solver.eigenvectors();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index(0));
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (w[a] != w[b]) return w[a] > w[b];
        VectorX<Scalar> va = v.col(a), vb = v.col(b);
        return detail::leading_component(va) < detail::leading_component(vb);
    });

    SpectralDecomposition<Scalar> out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.eigenvalues[i] = w[order[static_cast<std::size_t>(i)]];
        VectorX<Scalar> col = v.col(order[static_cast<std::size_t>(i)]);
        Scalar lead = col[detail::leading_component(col)];
        Real mod = std::abs(lead);
        if (mod > Real(0)) col *= std::conj(lead) / mod;
        out.eigenvectors.col(i) = col;
    }
    return out;
}

/// m^p for a positive-semidefinite decomposition, with 0^p = 0.  Eigenvalues
/// inside [-tol_psd, 0] count as zero; anything more negative is rejected.
template <typename Scalar>
MatrixX<Scalar> psd_power(const SpectralDecomposition<Scalar>& dec, RealOf<Scalar> p,
                          RealOf<Scalar> tol_psd = Tolerances<RealOf<Scalar>>{}.psd) {
    using Real = RealOf<Scalar>;
    if (dec.eigenvalues.size() > 0 && dec.eigenvalues.minCoeff() < -tol_psd)
        throw Error(ErrorCode::NotPositive, "fractional power of an indefinite matrix");
    return dec.apply([p](Real w) { return w > Real(0) ? std::pow(w, p) : Real(0); });
}

}  // namespace qdiv
