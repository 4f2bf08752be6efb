#pragma once

#include <cmath>

#include "qdiv/errors.hpp"
#include "qdiv/types.hpp"

namespace qdiv {

/// Largest entrywise deviation of m from its own adjoint.
template <typename Derived>
RealOf<typename Derived::Scalar> hermiticity_residual(const Eigen::MatrixBase<Derived>& m) {
    if (m.rows() != m.cols())
        throw Error(ErrorCode::NotHermitian, "matrix is not square");
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m,
                  RealOf<typename Derived::Scalar> tol) {
    return m.rows() == m.cols() && hermiticity_residual(m) <= tol;
}

template <typename Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& m,
                       RealOf<typename Derived::Scalar> tol) {
    if (m.rows() != m.cols())
        throw Error(ErrorCode::NotHermitian, "matrix is not square");
    auto res = hermiticity_residual(m);
    if (res > tol)
        throw Error(ErrorCode::NotHermitian,
                    "hermiticity residual " + std::to_string(static_cast<double>(res)));
}

/// Frobenius norm of the commutator [a, b] = ab - ba.
template <typename DerivedA, typename DerivedB>
RealOf<typename DerivedA::Scalar> commutator_norm(const Eigen::MatrixBase<DerivedA>& a,
                                                  const Eigen::MatrixBase<DerivedB>& b) {
    return (a * b - b * a).norm();
}

/// Re Tr(a b) for Hermitian a, b, accumulated entrywise (avoids forming the product).
template <typename DerivedA, typename DerivedB>
RealOf<typename DerivedA::Scalar> real_trace_product(const Eigen::MatrixBase<DerivedA>& a,
                                                     const Eigen::MatrixBase<DerivedB>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error(ErrorCode::DimensionMismatch, "trace product of mismatched matrices");
    using Scalar = typename DerivedA::Scalar;
    Scalar acc{};
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) acc += a(i, j) * b(j, i);
    return std::real(acc);
}

}  // namespace qdiv
