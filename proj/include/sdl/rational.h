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

#ifndef SDL_RATIONAL_H_
#define SDL_RATIONAL_H_

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "absl/status/statusor.h"

namespace sdl {

// Every probability in the library is an exact rational. Floating point only
// appears when rendering reports.
using Rational = mpq_class;

Rational MakeRational(long numerator, long denominator = 1);

// Accepts "p/q", "p" and "-p/q". The result is canonical.
absl::StatusOr<Rational> ParseRational(std::string_view text);

// Always renders "p/q", including integers ("3/1").
std::string FormatRational(const Rational& value);

Rational Pow(const Rational& base, unsigned long exponent);

inline double ToDouble(const Rational& value) { return value.get_d(); }

}  // namespace sdl

#endif  // SDL_RATIONAL_H_
