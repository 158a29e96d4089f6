// -*-c++-*---------------------------------------------------------------------------------------
// Copyright 2026 The lisens authors
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

#ifndef LISENS_ERROR_HPP
#define LISENS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lisens
{
// Each category maps to its own CLI exit status.
enum class ErrorKind { invalid_argument, dimension_mismatch, rank_deficient, io, config };

class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string & what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string & what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string & what)
{
  if (!condition) {
    fail(kind, what);
  }
}

inline const char * to_string(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::invalid_argument:
      return "invalid argument";
    case ErrorKind::dimension_mismatch:
      return "dimension mismatch";
    case ErrorKind::rank_deficient:
      return "rank deficient";
    case ErrorKind::io:
      return "i/o error";
    case ErrorKind::config:
      return "configuration error";
  }
  return "error";
}
}  // namespace lisens

#endif  // LISENS_ERROR_HPP
