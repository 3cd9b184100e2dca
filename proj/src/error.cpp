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
#include "excolor/error.hpp"

namespace excolor {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kArgument:
      return "argument error";
    case ErrorKind::kIo:
      return "I/O error";
    case ErrorKind::kFormat:
      return "format error";
    case ErrorKind::kNumerical:
      return "numerical error";
    case ErrorKind::kConfig:
      return "config error";
    case ErrorKind::kCorruptFile:
      return "corrupt file";
    case ErrorKind::kVersion:
      return "version mismatch";
  }
  return "unknown error";
}

}  // namespace excolor
