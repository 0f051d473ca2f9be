// Copyright 2026 The axtract Authors.
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


#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace axtract {

struct NumericValue {
  double value = 0.0;
  // The cell held several numbers ("47.6/48.1"); value is the first one.
  bool multiple = false;
};

// Numeric-cell rule: after dropping markup commands and braces, an error
// suffix ("± 0.1", "\pm 0.1", "+- 0.1"), percent signs, decoration marks
// (†, ‡, *, §, ¶) and surrounding parentheses, the text must be a decimal
// number, optionally with thousands separators, or several such numbers
// separated by '/'.
std::optional<NumericValue> parse_numeric(std::string_view text);

inline bool is_numeric(std::string_view text) { return parse_numeric(text).has_value(); }

}  // namespace axtract
