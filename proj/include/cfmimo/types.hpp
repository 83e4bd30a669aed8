// SPDX-License-Identifier: Apache-2.0
//
// cfmimo - uplink simulator for cell-free massive MIMO over radio stripes
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace cfmimo
{

using cdouble = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;
using rmat = Eigen::MatrixXd;
using rvec = Eigen::VectorXd;

// Raised when a numerical routine cannot produce a trustworthy result
// (quadrature non-convergence, indefinite covariance, eigensolver failure).
class NumericError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

enum class Scheme
{
    MRC,
    LMMSE,
    NLMMSE,
    QLMMSE
};

std::string_view scheme_name(Scheme s);
Scheme parse_scheme(std::string_view name);

} // namespace cfmimo
