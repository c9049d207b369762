// Copyright 2026 The nlg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace nlg {

using cdouble = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Mat16 = Eigen::Matrix<cdouble, 16, 16>;
using Vec16 = Eigen::Matrix<cdouble, 16, 1>;
using RealMat4 = Eigen::Matrix4d;

/// ||U^dagger U - I||_F.
template <typename M>
double unitarity_error(const M &u) {
    return (u.adjoint() * u - M::Identity(u.rows(), u.cols())).norm();
}

/// min over theta of ||a - e^{i theta} b||_F.
template <typename M>
double phase_distance(const M &a, const M &b) {
    cdouble overlap = (b.adjoint() * a).trace();
    cdouble phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cdouble(1, 0);
    return (a - phase * b).norm();
}

}  // namespace nlg
