/*
 * Copyright 2026 The dp-ocp Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DPOCP_ERRORS_H_
#define DPOCP_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dpocp {

// Raised when inputs violate a documented precondition (bad dimensions,
// out-of-range privacy parameters, norm bounds exceeded). The CLI maps this
// to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Raised when a numerical routine cannot produce an answer for valid input,
// e.g. an inner solver that fails to converge. The CLI maps this to exit
// code 3.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dpocp

#endif  // DPOCP_ERRORS_H_
