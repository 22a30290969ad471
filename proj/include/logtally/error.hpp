// Copyright 2026 the logtally authors
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

#ifndef LOGTALLY_ERROR_HPP_
#define LOGTALLY_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace logtally {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a caller violates a documented precondition
/// (mismatched dimensions, out-of-range parameters, and so on).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Raised when an image file or byte stream cannot be decoded.
class DecodeError : public Error {
public:
    using Error::Error;
};

/// Raised when the synthetic scene generator cannot satisfy the
/// requested constraints within its attempt budget.
class GenerationFailed : public Error {
public:
    using Error::Error;
};

}  // namespace logtally

#endif  // LOGTALLY_ERROR_HPP_
