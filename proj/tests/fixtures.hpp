#pragma once

#include <cmath>

#include "aakmin/wfa.hpp"

namespace aakmin::fixtures {

// f(t) = 3/4 * 2^-t for even t, 0 for odd t
inline Wfa two_state_parity()
{
    Wfa w;
    w.alpha = Eigen::Vector2d(std::sqrt(3.0) / 2.0, 0.0);
    w.beta = w.alpha;
    w.trans = Eigen::Matrix2d{{0.0, 0.5}, {0.5, 0.0}};
    return w;
}

// three-state model, already close to balanced coordinates
inline Wfa three_state_demo()
{
    Wfa w;
    w.alpha = Eigen::Vector3d(1.650, -0.851, 0.038);
    w.beta = Eigen::Vector3d(1.650, 0.851, 0.038);
    w.trans = Eigen::Matrix3d{{0.579, 0.461, 0.046},
                              {-0.461, -0.192, 0.225},
                              {0.046, -0.225, -0.387}};
    return w;
}

inline Eigen::MatrixXd circulant3()
{
    return Eigen::Matrix3d{{1, 2, 3}, {2, 3, 1}, {3, 1, 2}};
}

// rank-2 truncation of circulant3 constrained only by optimality, not by
// the Hankel pattern
inline Eigen::MatrixXd circulant3_truncated()
{
    return Eigen::Matrix3d{{1, 2, 3}, {2.5, 2, 1.5}, {2.5, 2, 1.5}};
}

} // namespace aakmin::fixtures
