// Copyright 2026 The InPipe Authors
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

#ifndef INPIPE_ERROR_HPP_
#define INPIPE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace inpipe {

// Bad input or configuration. The CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical failure detected while computing. The CLI maps this to exit
// code 2.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularPitchError : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

class NotPositiveDefiniteError : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

class LqrError : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

}  // namespace inpipe

#endif  // INPIPE_ERROR_HPP_
