// Copyright 2026 The Tabschema Authors
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

#ifndef TABSCHEMA_ERRORS_H_
#define TABSCHEMA_ERRORS_H_

#include <stdexcept>
#include <string>

namespace tabschema {

// Bad user input: unreadable paths, malformed files, mismatched ids.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A contract violated by the caller (e.g. FET rendering without FET types).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The completion provider could not be reached or kept failing.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The replay transcript has no record for a request key.
class ReplayMissError : public std::runtime_error {
 public:
  ReplayMissError(std::string key, const std::string& template_id)
      : std::runtime_error("replay transcript has no entry for key " + key +
                           " (template " + template_id + ")"),
        key_(std::move(key)) {}

  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// A completion that could not be interpreted.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Path parse succeeded but some path exceeds the depth cap.
class DepthError : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace tabschema

#endif  // TABSCHEMA_ERRORS_H_
