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

#include "sdl/rational.h"

#include "absl/strings/str_cat.h"

namespace sdl {

Rational MakeRational(long numerator, long denominator) {
  Rational value(numerator, denominator);
  value.canonicalize();
  return value;
}

absl::StatusOr<Rational> ParseRational(std::string_view text) {
  if (text.empty()) {
    return absl::InvalidArgumentError("empty rational literal");
  }
  std::string literal(text);
  Rational value;
  if (value.set_str(literal, 10) != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed rational literal '", literal, "'"));
  }
  if (value.get_den() == 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("zero denominator in '", literal, "'"));
  }
  value.canonicalize();
  return value;
}

std::string FormatRational(const Rational& value) {
  return absl::StrCat(value.get_num().get_str(), "/",
                      value.get_den().get_str());
}

Rational Pow(const Rational& base, unsigned long exponent) {
  Rational result;
  mpz_pow_ui(result.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(result.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
  result.canonicalize();
  return result;
}

}  // namespace sdl
