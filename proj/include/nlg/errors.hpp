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

#include <stdexcept>
#include <string>

namespace nlg {

/// Input outside an operation's domain (bad color, non-edge, invalid noise...).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Instance too large for exhaustive enumeration without an explicit override.
struct SizeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or incomplete data (parse failures, missing circuits).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An iterative solver failed to converge; carries the last residual.
struct NumericError : std::runtime_error {
    NumericError(const std::string &what, double residual)
        : std::runtime_error(what), last_residual(residual) {
    }
    double last_residual;
};

}  // namespace nlg
