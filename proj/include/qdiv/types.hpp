#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qdiv {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using RealOf = typename Eigen::NumTraits<Scalar>::Real;

using cxd = std::complex<double>;

/// Numerical tolerances shared across the library.  Every comparison in the
/// library goes through one of these fields; `scaled` multiplies them all by
/// a single factor (diagnostic use).
template <typename Real = double>
struct Tolerances {
    Real herm    = Real(1e-10);  // max-abs hermiticity residual
    Real trace   = Real(1e-10);  // |trace - expected|
    Real proj    = Real(1e-10);  // projector idempotence / orthogonality / completeness
    Real psd     = Real(1e-10);  // eigenvalue clamping window [-psd, 0]
    Real recon   = Real(1e-9);   // spectral reconstruction residual (Frobenius)
    Real support = Real(1e-10);  // support cutoff, relative to the largest eigenvalue
    Real div     = Real(1e-9);   // divergence slack
    Real comm    = Real(1e-10);  // commutator Frobenius norm
    Real prob    = Real(1e-12);  // outcomes below this probability carry no post state

    static Tolerances scaled(Real factor) {
        Tolerances t;
        t.herm *= factor;
        t.trace *= factor;
        t.proj *= factor;
        t.psd *= factor;
        t.recon *= factor;
        t.support *= factor;
        t.div *= factor;
        t.comm *= factor;
        t.prob *= factor;
        return t;
    }
};

}  // namespace qdiv
