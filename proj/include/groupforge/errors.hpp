// Copyright 2026 The Groupforge Authors
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

#ifndef GROUPFORGE_ERRORS_HPP
#define GROUPFORGE_ERRORS_HPP

#include <stdexcept>

namespace groupforge {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input/file errors.
class MissingFile : public Error { public: using Error::Error; };
class MalformedRow : public Error { public: using Error::Error; };
class MarkOutOfRange : public Error { public: using Error::Error; };
class DuplicateId : public Error { public: using Error::Error; };
class NonBinaryValue : public Error { public: using Error::Error; };
class IdMismatch : public Error { public: using Error::Error; };
class UnknownAttribute : public Error { public: using Error::Error; };
class ProfileLengthMismatch : public Error { public: using Error::Error; };
class EmptySpec : public Error { public: using Error::Error; };

// Numeric/shape errors.
class LengthMismatch : public Error { public: using Error::Error; };
class DimensionMismatch : public Error { public: using Error::Error; };
class NotSymmetric : public Error { public: using Error::Error; };
class NoConvergence : public Error { public: using Error::Error; };
class MTooLarge : public Error { public: using Error::Error; };
class WrongDimension : public Error { public: using Error::Error; };
class EmptyGroup : public Error { public: using Error::Error; };

// Solver errors.
class InfeasibleProblem : public Error { public: using Error::Error; };
class TooLarge : public Error { public: using Error::Error; };
class TimeoutBudgetExceeded : public Error { public: using Error::Error; };

// Configuration and construction-invariant violations.
class InvalidConfig : public Error { public: using Error::Error; };
class InvalidData : public Error { public: using Error::Error; };

}  // namespace groupforge

#endif  // GROUPFORGE_ERRORS_HPP
