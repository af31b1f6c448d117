// Copyright 2026 The Halo Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace halo {

enum class ErrorCode {
  invalid_graph,
  invalid_param,
  zero_state,
  parse_error,
  duplicate_ket,
  shape_mismatch,
  no_solution,
  not_a_halo,
  arity_mismatch,
  missing_template,
  unassigned_input,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_graph: return "InvalidGraph";
    case ErrorCode::invalid_param: return "InvalidParam";
    case ErrorCode::zero_state: return "ZeroState";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::duplicate_ket: return "DuplicateKet";
    case ErrorCode::shape_mismatch: return "ShapeMismatch";
    case ErrorCode::no_solution: return "NoSolution";
    case ErrorCode::not_a_halo: return "NotAHalo";
    case ErrorCode::arity_mismatch: return "ArityMismatch";
    case ErrorCode::missing_template: return "MissingTemplate";
    case ErrorCode::unassigned_input: return "UnassignedInput";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace halo
