/*
 * Copyright 2026 The Panolift Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace panolift {

// Precondition violated by the caller (bad dimensions, invalid camera, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A file or serialized payload could not be parsed or failed validation.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Masked metric requested over an empty region.
class EmptyMaskError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace panolift
