/*
 *   Copyright 2026 The LogicENN Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LOGICENN_ERRORS_HPP
#define LOGICENN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace logicenn {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Bad caller input: out-of-range ids, empty vectors, invalid counts.
class ArgumentError : public Error {
   public:
    using Error::Error;
};

/// Malformed triple/rule/config text or unreadable files.
class DataError : public Error {
   public:
    using Error::Error;
};

/// Checkpoint binary that fails magic, version, or length checks.
class FormatError : public DataError {
   public:
    using DataError::DataError;
};

/// Inconsistent hyperparameters or architecture.
class ConfigError : public Error {
   public:
    using Error::Error;
};

/// Non-finite loss or gradient during optimization.
class TrainingError : public Error {
   public:
    using Error::Error;
};

/// Broken internal invariant (shape mismatch, kind/grounding mismatch).
class InternalError : public Error {
   public:
    using Error::Error;
};

}  // namespace logicenn

#endif  // LOGICENN_ERRORS_HPP
