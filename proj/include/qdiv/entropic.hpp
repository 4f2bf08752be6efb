#pragma once

#include <cmath>
#include <string>

#include "qdiv/errors.hpp"

namespace qdiv {

/// Entropic index q, restricted to the open interval (0, 1).
template <typename Real = double>
class EntropicIndex {
public:
    explicit EntropicIndex(Real q) : q_(q) {
        if (!(q > Real(0)) || !(q < Real(1)))
            throw Error(ErrorCode::InvalidEntropicIndex,
                        "q = " + std::to_string(static_cast<double>(q)) +
                            " outside the valid range (0,1)");
    }

    Real value() const { return q_; }
    Real one_minus() const { return Real(1) - q_; }

    friend bool operator==(const EntropicIndex& a, const EntropicIndex& b) { return a.q_ == b.q_; }
    friend bool operator!=(const EntropicIndex& a, const EntropicIndex& b) { return !(a == b); }

private:
    Real q_;
};

/// Deformed logarithm ln_q x = (x^{1-q} - 1) / (1 - q), x > 0.  Recovers the
/// natural log as q -> 1.
template <typename Real>
Real q_log(Real x, const EntropicIndex<Real>& q) {
    if (!(x > Real(0)))
        throw Error(ErrorCode::NonPositiveArgument, "q_log requires a positive argument");
    return (std::pow(x, q.one_minus()) - Real(1)) / q.one_minus();
}

/// ln_q extended to x = 0 by its finite limit -1/(1-q); used when the
/// deformed log is applied eigenvalue-wise to rank-deficient states.
template <typename Real>
Real q_log_or_limit(Real x, const EntropicIndex<Real>& q) {
    if (x > Real(0)) return q_log(x, q);
    return Real(-1) / q.one_minus();
}

}  // namespace qdiv
