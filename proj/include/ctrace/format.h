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

#ifndef CTRACE_FORMAT_H_
#define CTRACE_FORMAT_H_

#include <string>

namespace ctrace {

// Fixed 5-decimal rendering used by every numeric CSV column. Exact binary
// ties round half to even; negative zero prints as "0.00000".
std::string FormatFixed5(double value);

}  // namespace ctrace

#endif  // CTRACE_FORMAT_H_
