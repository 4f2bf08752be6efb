#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qdiv/hermitian.hpp"
#include "qdiv/types.hpp"

namespace qdiv {

/// Finite family {P_k} of mutually orthogonal projectors summing to the
/// identity.  Construction verifies P_k P_l = delta_kl P_k and sum_k P_k = I;
/// the error message names the first failing pair or the completeness residual.
template <typename Scalar>
class ProjectorFamily {
public:
    using Real = RealOf<Scalar>;

    ProjectorFamily(Eigen::Index dim, std::vector<MatrixX<Scalar>> projectors,
                    const Tolerances<Real>& tol = Tolerances<Real>{})
        : dim_(dim), projectors_(std::move(projectors)) {
        if (dim_ < 1 || projectors_.empty())
            throw Error(ErrorCode::InvalidProjectorFamily, "empty family");

        for (std::size_t k = 0; k < projectors_.size(); ++k) {
            const auto& p = projectors_[k];
            if (p.rows() != dim_ || p.cols() != dim_)
                throw Error(ErrorCode::InvalidProjectorFamily,
                            "projector " + std::to_string(k) + " has wrong dimension");
            require_hermitian(p, tol.herm);
            Real idem = (p * p - p).cwiseAbs().maxCoeff();
            if (idem > tol.proj)
                throw Error(ErrorCode::InvalidProjectorFamily,
                            "projector " + std::to_string(k) + " not idempotent, residual " +
                                std::to_string(static_cast<double>(idem)));
        }
        for (std::size_t k = 0; k < projectors_.size(); ++k)
            for (std::size_t l = k + 1; l < projectors_.size(); ++l) {
                Real cross = (projectors_[k] * projectors_[l]).cwiseAbs().maxCoeff();
                if (cross > tol.proj)
                    throw Error(ErrorCode::InvalidProjectorFamily,
                                "projectors " + std::to_string(k) + " and " + std::to_string(l) +
                                    " not orthogonal, residual " +
                                    std::to_string(static_cast<double>(cross)));
            }
        MatrixX<Scalar> sum = MatrixX<Scalar>::Zero(dim_, dim_);
        for (const auto& p : projectors_) sum += p;
        Real complete = (sum - MatrixX<Scalar>::Identity(dim_, dim_)).cwiseAbs().maxCoeff();
        if (complete > tol.proj)
            throw Error(ErrorCode::InvalidProjectorFamily,
                        "sum-to-identity residual " + std::to_string(static_cast<double>(complete)));
    }

    Eigen::Index dim() const { return dim_; }
    std::size_t size() const { return projectors_.size(); }
    const MatrixX<Scalar>& operator[](std::size_t k) const { return projectors_[k]; }
    const std::vector<MatrixX<Scalar>>& projectors() const { return projectors_; }

private:
    Eigen::Index dim_;
    std::vector<MatrixX<Scalar>> projectors_;
};

using ProjectorFamilyXcd = ProjectorFamily<cxd>;

/// Rank-1 projectors onto the standard basis vectors.
template <typename Scalar>
ProjectorFamily<Scalar> computational_basis_family(Eigen::Index dim) {
    std::vector<MatrixX<Scalar>> ps;
    ps.reserve(static_cast<std::size_t>(dim));
    for (Eigen::Index k = 0; k < dim; ++k) {
        MatrixX<Scalar> p = MatrixX<Scalar>::Zero(dim, dim);
        p(k, k) = Scalar(1);
        ps.push_back(std::move(p));
    }
    return ProjectorFamily<Scalar>(dim, std::move(ps));
}

/// Projectors built by grouping orthonormal columns of `basis`; group k takes
/// part_sizes[k] consecutive columns.
template <typename Scalar>
ProjectorFamily<Scalar> family_from_basis_groups(const MatrixX<Scalar>& basis,
                                                 const std::vector<Eigen::Index>& part_sizes,
                                                 const Tolerances<RealOf<Scalar>>& tol =
                                                     Tolerances<RealOf<Scalar>>{}) {
    Eigen::Index dim = basis.rows();
    Eigen::Index total = 0;
    for (Eigen::Index s : part_sizes) {
        if (s < 1) throw Error(ErrorCode::BadPartition, "part sizes must be positive");
        total += s;
    }
    if (total != dim) throw Error(ErrorCode::BadPartition, "part sizes must sum to the dimension");

    std::vector<MatrixX<Scalar>> ps;
    ps.reserve(part_sizes.size());
    Eigen::Index col = 0;
    for (Eigen::Index s : part_sizes) {
        auto block = basis.middleCols(col, s);
        ps.push_back(block * block.adjoint());
        col += s;
    }
    return ProjectorFamily<Scalar>(dim, std::move(ps), tol);
}

}  // namespace qdiv
