// Copyright 2026 The chronalign Authors.
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

namespace chronalign {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A dataset file is missing or unreadable, or a line fails to parse.
class IngestionError : public Error {
 public:
  using Error::Error;
};

// Loaded data violates a structural invariant (id bounds, split overlap).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A caller broke a function precondition (shape mismatch, bad parameter).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace chronalign
