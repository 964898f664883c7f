// Copyright 2026 The cbiou Authors.
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

#ifndef CBIOU_ERRORS_H_
#define CBIOU_ERRORS_H_

#include <stdexcept>
#include <string>

namespace cbiou {

// Base of every exception thrown by the library. The command-line tool maps
// each concrete subclass onto a distinct exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller passed a value outside an operation's domain (negative buffer
// scale, zero-extent box, non-finite similarity, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Frames fed to a tracker out of order.
class SequencingError : public Error {
 public:
  using Error::Error;
};

// Well-formed input whose content violates a data invariant (duplicate
// identity in a frame, non-positive extents read from a file, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

// Malformed text input. Always carries the 1-based line number.
class ParseError : public DataError {
 public:
  ParseError(const std::string& what, long line)
      : DataError(what), line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Randomized generation gave up (e.g. no room left for a distractor box).
class GenerationError : public Error {
 public:
  using Error::Error;
};

}  // namespace cbiou

#endif  // CBIOU_ERRORS_H_
