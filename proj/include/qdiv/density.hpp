#pragma once

#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "qdiv/spectral.hpp"

namespace qdiv {

/// Trace-one positive-semidefinite Hermitian matrix.  Construction validates
/// all three invariants and caches the spectral decomposition; eigenvalues in
/// [-tol_psd, 0] are clamped to zero at that point.  Immutable afterwards.
template <typename Scalar>
class DensityMatrix {
public:
    using Real = RealOf<Scalar>;

    template <typename Derived>
    explicit DensityMatrix(const Eigen::MatrixBase<Derived>& m,
                           const Tolerances<Real>& tol = Tolerances<Real>{})
        : mat_(m) {
        require_hermitian(mat_, tol.herm);

        Real tr = std::real(mat_.trace());
        if (std::abs(tr - Real(1)) > tol.trace)
            throw Error(ErrorCode::TraceNotOne, "trace is " + std::to_string(static_cast<double>(tr)));

        dec_ = spectral_decompose(mat_, tol.herm);
        clamp_spectrum(tol);
    }

    /// Construction from known spectral data.  Lets samplers hand over exact
    /// zero eigenvalues for rank-deficient states, which a round trip through
    /// the dense matrix would smear into solver noise.  The decomposition is
    /// still checked: orthonormal vectors, clamped spectrum, unit trace.
    DensityMatrix(SpectralDecomposition<Scalar> dec, const Tolerances<Real>& tol = Tolerances<Real>{})
        : dec_(std::move(dec)) {
        const Eigen::Index n = dec_.dim();
        if (n < 1 || dec_.eigenvectors.rows() != n || dec_.eigenvectors.cols() != n)
            throw Error(ErrorCode::BadArgument, "malformed spectral decomposition");
        Real ortho = (dec_.eigenvectors.adjoint() * dec_.eigenvectors -
                      MatrixX<Scalar>::Identity(n, n))
                         .norm();
        if (ortho > tol.recon)
            throw Error(ErrorCode::BadArgument,
                        "eigenvectors not orthonormal, residual " +
                            std::to_string(static_cast<double>(ortho)));
        for (Eigen::Index i = 0; i + 1 < n; ++i)
            if (dec_.eigenvalues[i] < dec_.eigenvalues[i + 1])
                throw Error(ErrorCode::BadArgument, "eigenvalues must be descending");
        clamp_spectrum(tol);
        Real tr = dec_.eigenvalues.sum();
        if (std::abs(tr - Real(1)) > tol.trace)
            throw Error(ErrorCode::TraceNotOne, "trace is " + std::to_string(static_cast<double>(tr)));
        mat_ = dec_.reconstruct();
    }

    Eigen::Index dim() const { return mat_.rows(); }
    const MatrixX<Scalar>& matrix() const { return mat_; }

    /// Cached decomposition; eigenvalues descending, clamped nonnegative.
    const SpectralDecomposition<Scalar>& decomposition() const { return dec_; }
    const VectorX<Real>& eigenvalues() const { return dec_.eigenvalues; }

private:
    void clamp_spectrum(const Tolerances<Real>& tol) {
        for (Eigen::Index i = 0; i < dec_.eigenvalues.size(); ++i) {
            Real w = dec_.eigenvalues[i];
            if (w < -tol.psd)
                throw Error(ErrorCode::NotPositive,
                            "eigenvalue " + std::to_string(static_cast<double>(w)));
            if (w < Real(0)) dec_.eigenvalues[i] = Real(0);
        }
    }

    MatrixX<Scalar> mat_;
    SpectralDecomposition<Scalar> dec_;
};

using DensityMatrixXcd = DensityMatrix<cxd>;

/// Checks the density-matrix contract and wraps m.  Throws NotHermitian,
/// NotPositive or TraceNotOne.
template <typename Derived>
DensityMatrix<typename Derived::Scalar> validate_density(
    const Eigen::MatrixBase<Derived>& m,
    const Tolerances<RealOf<typename Derived::Scalar>>& tol =
        Tolerances<RealOf<typename Derived::Scalar>>{}) {
    return DensityMatrix<typename Derived::Scalar>(m, tol);
}

/// m^p via the cached spectrum, 0^p = 0.  Requires p in (0, 1].
template <typename Scalar>
MatrixX<Scalar> matrix_power(const DensityMatrix<Scalar>& m, RealOf<Scalar> p) {
    using Real = RealOf<Scalar>;
    if (!(p > Real(0) && p <= Real(1)))
        throw Error(ErrorCode::BadArgument, "power must lie in (0, 1]");
    return m.decomposition().apply([p](Real w) { return w > Real(0) ? std::pow(w, p) : Real(0); });
}

/// Matrix logarithm; defined only on full support.
template <typename Scalar>
MatrixX<Scalar> matrix_log(const DensityMatrix<Scalar>& m,
                           const Tolerances<RealOf<Scalar>>& tol = Tolerances<RealOf<Scalar>>{}) {
    using Real = RealOf<Scalar>;
    const auto& w = m.eigenvalues();
    Real cutoff = tol.support * w[0];
    if (w[w.size() - 1] <= cutoff)
        throw Error(ErrorCode::SingularSupport,
                    "smallest eigenvalue " + std::to_string(static_cast<double>(w[w.size() - 1])));
    return m.decomposition().apply([](Real x) { return std::log(x); });
}

/// Number of eigenvalues above the relative support cutoff.
template <typename Scalar>
Eigen::Index support_rank(const DensityMatrix<Scalar>& m,
                          const Tolerances<RealOf<Scalar>>& tol = Tolerances<RealOf<Scalar>>{}) {
    using Real = RealOf<Scalar>;
    const auto& w = m.eigenvalues();
    Real cutoff = tol.support * w[0];
    Eigen::Index r = 0;
    while (r < w.size() && w[r] > cutoff) ++r;
    return r;
}

/// True iff the support of rho lies inside the support of sigma: the
/// projector onto sigma's kernel must annihilate every supported eigenvector
/// of rho, i.e. <v|K|v> <= tol_support for each of them.
template <typename Scalar>
bool support_contained(const DensityMatrix<Scalar>& rho, const DensityMatrix<Scalar>& sigma,
                       const Tolerances<RealOf<Scalar>>& tol = Tolerances<RealOf<Scalar>>{}) {
    using Real = RealOf<Scalar>;
    if (rho.dim() != sigma.dim())
        throw Error(ErrorCode::DimensionMismatch, "support check on mismatched dimensions");

    Eigen::Index rank_sigma = support_rank(sigma, tol);
    if (rank_sigma == sigma.dim()) return true;

    // Columns of sigma's eigenvector matrix past rank_sigma span the kernel.
    MatrixX<Scalar> kernel = sigma.decomposition().eigenvectors.rightCols(sigma.dim() - rank_sigma);

    Eigen::Index rank_rho = support_rank(rho, tol);
    for (Eigen::Index i = 0; i < rank_rho; ++i) {
        VectorX<Scalar> v = rho.decomposition().eigenvectors.col(i);
        Real leak = (kernel.adjoint() * v).squaredNorm();
        if (leak > tol.support) return false;
    }
    return true;
}

/// Kronecker product of two states; a valid state on the composite space.
template <typename Scalar>
DensityMatrix<Scalar> tensor_product(const DensityMatrix<Scalar>& a, const DensityMatrix<Scalar>& b,
                                     const Tolerances<RealOf<Scalar>>& tol = Tolerances<RealOf<Scalar>>{}) {
    MatrixX<Scalar> prod = Eigen::kroneckerProduct(a.matrix(), b.matrix());
    return DensityMatrix<Scalar>(prod, tol);
}

}  // namespace qdiv
