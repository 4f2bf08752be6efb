#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/QR>

#include "qdiv/density.hpp"
#include "qdiv/projectors.hpp"

namespace qdiv {

/// Engine for one trial of one suite: the stream is a pure function of
/// (seed, suite tag, dim, q index, trial index), so any trial can be replayed
/// in isolation.
inline std::mt19937_64 trial_engine(std::uint64_t seed, std::uint32_t suite_tag, std::uint32_t dim,
                                    std::uint32_t q_index, std::uint64_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      suite_tag, dim, q_index, static_cast<std::uint32_t>(trial),
                      static_cast<std::uint32_t>(trial >> 32)};
    return std::mt19937_64(seq);
}

/// Matrix with independent standard complex normal entries.
template <typename Scalar, typename Engine>
MatrixX<Scalar> ginibre(Eigen::Index rows, Eigen::Index cols, Engine& eng) {
    using Real = RealOf<Scalar>;
    std::normal_distribution<Real> normal(Real(0), Real(1));
    MatrixX<Scalar> g(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) {
            Real re = normal(eng);
            Real im = normal(eng);
            g(i, j) = Scalar(re, im);
        }
    return g;
}

/// Random state of the given rank: G G^dag / Tr(G G^dag) with G a dim x rank
/// complex normal matrix.  Rank-deficient draws are rebuilt from their top
/// eigenvalues so the kernel modes are exactly zero rather than solver noise.
template <typename Scalar, typename Engine>
DensityMatrix<Scalar> random_density(Eigen::Index dim, Eigen::Index rank, Engine& eng,
                                     const Tolerances<RealOf<Scalar>>& tol =
                                         Tolerances<RealOf<Scalar>>{}) {
    using Real = RealOf<Scalar>;
    if (rank < 1 || rank > dim)
        throw Error(ErrorCode::BadRank, "rank must lie in [1, dim]");
    MatrixX<Scalar> g = ginibre<Scalar>(dim, rank, eng);
    MatrixX<Scalar> gram = g * g.adjoint();
    // Symmetrize away the last-bit asymmetry of the product before validation.
    gram = ((gram + gram.adjoint()) / Real(2)).eval();
    if (rank == dim) {
        gram /= gram.trace();
        return DensityMatrix<Scalar>(gram, tol);
    }
    auto dec = spectral_decompose(gram, tol.herm);
    dec.eigenvalues.tail(dim - rank).setZero();
    dec.eigenvalues /= dec.eigenvalues.sum();
    return DensityMatrix<Scalar>(std::move(dec), tol);
}

/// Random unnormalized positive operator G G^dag (full rank almost surely).
template <typename Scalar, typename Engine>
MatrixX<Scalar> random_positive(Eigen::Index dim, Engine& eng) {
    using Real = RealOf<Scalar>;
    MatrixX<Scalar> g = ginibre<Scalar>(dim, dim, eng);
    MatrixX<Scalar> gram = g * g.adjoint();
    return ((gram + gram.adjoint()) / Real(2)).eval();
}

/// Random Hermitian matrix (A + A^dag)/2 with A complex normal.
template <typename Scalar, typename Engine>
MatrixX<Scalar> random_hermitian(Eigen::Index dim, Engine& eng) {
    using Real = RealOf<Scalar>;
    MatrixX<Scalar> a = ginibre<Scalar>(dim, dim, eng);
    return ((a + a.adjoint()) / Real(2)).eval();
}

/// Haar-like random unitary: QR of a complex normal matrix with the phases
/// fixed so the triangular factor has positive diagonal.
template <typename Scalar, typename Engine>
MatrixX<Scalar> random_unitary(Eigen::Index dim, Engine& eng) {
    using Real = RealOf<Scalar>;
    MatrixX<Scalar> g = ginibre<Scalar>(dim, dim, eng);
    Eigen::HouseholderQR<MatrixX<Scalar>> qr(g);
    MatrixX<Scalar> q = qr.householderQ();
    MatrixX<Scalar> r = qr.matrixQR().template triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < dim; ++j) {
        Scalar d = r(j, j);
        Real mod = std::abs(d);
        if (mod > Real(0)) q.col(j) *= d / mod;
    }
    return q;
}

/// Random projector family: groups the columns of a random unitary by
/// part_sizes.  part_sizes must be positive and sum to dim.
template <typename Scalar, typename Engine>
ProjectorFamily<Scalar> random_projector_family(Eigen::Index dim,
                                                const std::vector<Eigen::Index>& part_sizes,
                                                Engine& eng,
                                                const Tolerances<RealOf<Scalar>>& tol =
                                                    Tolerances<RealOf<Scalar>>{}) {
    Eigen::Index total = 0;
    for (Eigen::Index s : part_sizes) {
        if (s < 1) throw Error(ErrorCode::BadPartition, "part sizes must be positive");
        total += s;
    }
    if (total != dim) throw Error(ErrorCode::BadPartition, "part sizes must sum to the dimension");
    MatrixX<Scalar> u = random_unitary<Scalar>(dim, eng);
    return family_from_basis_groups(u, part_sizes, tol);
}

/// Uniformly random composition of dim: each of the dim-1 gaps is cut
/// independently with probability 1/2.
template <typename Engine>
std::vector<Eigen::Index> random_composition(Eigen::Index dim, Engine& eng) {
    std::bernoulli_distribution cut(0.5);
    std::vector<Eigen::Index> sizes;
    Eigen::Index run = 1;
    for (Eigen::Index i = 1; i < dim; ++i) {
        if (cut(eng)) {
            sizes.push_back(run);
            run = 1;
        } else {
            ++run;
        }
    }
    sizes.push_back(run);
    return sizes;
}

/// Weights on the open simplex via normalized exponential draws.
template <typename Real, typename Engine>
std::vector<Real> random_simplex_weights(std::size_t n, Engine& eng) {
    std::exponential_distribution<Real> expo(Real(1));
    std::vector<Real> w(n);
    Real sum = Real(0);
    for (auto& x : w) {
        x = expo(eng);
        sum += x;
    }
    for (auto& x : w) x /= sum;
    return w;
}

}  // namespace qdiv
