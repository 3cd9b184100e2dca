/**
 * Copyright 2026 The excolor Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef EXCOLOR_ERROR_HPP
#define EXCOLOR_ERROR_HPP

#include <stdexcept>
#include <string>

namespace excolor {

enum class ErrorKind {
  kArgument,
  kIo,
  kFormat,
  kNumerical,
  kConfig,
  kCorruptFile,
  kVersion,
};

const char* to_string(ErrorKind kind);

// Base of every exception thrown by the core. The C API maps `kind()` onto
// its status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define EXCOLOR_DEFINE_ERROR(Name, Kind)                                   \
  class Name : public Error {                                              \
   public:                                                                 \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

EXCOLOR_DEFINE_ERROR(ArgumentError, kArgument)
EXCOLOR_DEFINE_ERROR(IoError, kIo)
EXCOLOR_DEFINE_ERROR(FormatError, kFormat)
EXCOLOR_DEFINE_ERROR(NumericalError, kNumerical)
EXCOLOR_DEFINE_ERROR(ConfigError, kConfig)
EXCOLOR_DEFINE_ERROR(CorruptFileError, kCorruptFile)
EXCOLOR_DEFINE_ERROR(VersionError, kVersion)

#undef EXCOLOR_DEFINE_ERROR

}  // namespace excolor

#endif  // EXCOLOR_ERROR_HPP
