// Copyright 2026 The ctrace Authors
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

#include "ctrace/format.h"

#include <charconv>
#include <cmath>
#include <system_error>

namespace ctrace {

std::string FormatFixed5(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0.0
  char buf[64];
  auto [end, ec] =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, 5);
  if (ec != std::errc()) return std::isnan(value) ? "nan" : "inf";
  std::string out(buf, end);
  if (out == "-0.00000") out = "0.00000";
  return out;
}

}  // namespace ctrace
