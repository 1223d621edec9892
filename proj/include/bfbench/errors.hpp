// Copyright 2026 The bfbench Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace bfbench {

/// Base class for every error raised by the library. The category maps onto
/// the CLI exit codes.
class Error : public std::runtime_error {
 public:
    enum class Category { usage = 2, validation = 3, resource = 4 };

    Error(Category category, const std::string& what)
            : std::runtime_error(what), category_(category) {}

    Category category() const noexcept { return category_; }
    int exit_code() const noexcept { return static_cast<int>(category_); }

 private:
    Category category_;
};

/// Bad or inconsistent arguments (wrong flavor, unknown preset, ...).
class UsageError : public Error {
 public:
    explicit UsageError(const std::string& what) : Error(Category::usage, what) {}
};

/// Input that violates a documented precondition or invariant.
class ValidationError : public Error {
 public:
    explicit ValidationError(const std::string& what) : Error(Category::validation, what) {}
};

/// Length/shape mismatch between two objects that must agree.
class DimensionError : public ValidationError {
 public:
    explicit DimensionError(const std::string& what) : ValidationError(what) {}
};

/// Malformed file content. Carries the 1-based line number when known.
class ParseError : public ValidationError {
 public:
    ParseError(const std::string& what, std::size_t line = 0)
            : ValidationError(line ? "line " + std::to_string(line) + ": " + what : what),
              line_(line) {}

    std::size_t line() const noexcept { return line_; }

 private:
    std::size_t line_;
};

/// A size or width guard was exceeded.
class ResourceError : public Error {
 public:
    explicit ResourceError(const std::string& what) : Error(Category::resource, what) {}
};

}  // namespace bfbench
