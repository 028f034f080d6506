// Copyright 2026 The SDL Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SDL_STATUS_MACROS_H_
#define SDL_STATUS_MACROS_H_

#include <utility>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define SDL_STATUS_CONCAT_INNER(a, b) a##b
#define SDL_STATUS_CONCAT(a, b) SDL_STATUS_CONCAT_INNER(a, b)

// Evaluates an absl::Status and returns it from the caller when not ok.
#define SDL_RETURN_IF_ERROR(expr)                          \
  do {                                                     \
    if (absl::Status sdl_status = (expr); !sdl_status.ok()) \
      return sdl_status;                                   \
  } while (0)

// `lhs = *expr` for an absl::StatusOr, returning the status on error.
#define SDL_ASSIGN_OR_RETURN(lhs, expr)                                   \
  SDL_ASSIGN_OR_RETURN_IMPL(SDL_STATUS_CONCAT(sdl_status_or_, __LINE__), \
                            lhs, expr)
#define SDL_ASSIGN_OR_RETURN_IMPL(tmp, lhs, expr) \
  auto tmp = (expr);                              \
  if (!tmp.ok()) return tmp.status();             \
  lhs = *std::move(tmp)

#endif  // SDL_STATUS_MACROS_H_
