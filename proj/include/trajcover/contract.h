// Copyright 2026 The TrajCover Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TRAJCOVER_CONTRACT_H_
#define TRAJCOVER_CONTRACT_H_

#include <stdexcept>
#include <string>

namespace trajcover {

// Raised when a caller breaks an operation's precondition (shape mismatch,
// wrong frame, non-finite input, ...).
class ContractViolation : public std::invalid_argument {
 public:
  explicit ContractViolation(const std::string& what)
      : std::invalid_argument(what) {}
};

// Raised when a file or dataset cannot be parsed or is internally
// inconsistent.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

inline void Require(bool condition, const char* message) {
  if (!condition) throw ContractViolation(message);
}

inline void Require(bool condition, const std::string& message) {
  if (!condition) throw ContractViolation(message);
}

}  // namespace trajcover

#endif  // TRAJCOVER_CONTRACT_H_
