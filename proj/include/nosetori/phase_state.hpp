#pragma once

#include <Eigen/Core>

namespace nosetori {

/// Full phase point (r, p_r, theta, p_theta, s, S).
///
/// One-degree-of-freedom homogeneous systems reuse the layout with
/// (x, p_x) in the (r, p_r) slots and theta = p_theta = 0.
template <typename Scalar>
using PhaseState = Eigen::Matrix<Scalar, 6, 1>;

/// Time derivative of a PhaseState.
template <typename Scalar>
using PhaseTangent = Eigen::Matrix<Scalar, 6, 1>;

namespace idx {
inline constexpr Eigen::Index r = 0;
inline constexpr Eigen::Index p_r = 1;
inline constexpr Eigen::Index theta = 2;
inline constexpr Eigen::Index p_theta = 3;
inline constexpr Eigen::Index s = 4;
inline constexpr Eigen::Index S = 5;
}  // namespace idx

template <typename Scalar>
PhaseState<Scalar> make_state(Scalar r, Scalar p_r, Scalar theta, Scalar p_theta, Scalar s, Scalar S) {
    PhaseState<Scalar> x;
    x << r, p_r, theta, p_theta, s, S;
    return x;
}

}  // namespace nosetori
