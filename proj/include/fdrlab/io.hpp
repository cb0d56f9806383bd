/*
   Copyright 2026 The fdrlab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#pragma once

#include <string>

namespace fdrlab::io {

// Shortest digit string that round-trips the double ('.' decimal separator,
// locale independent).
std::string format_double(double v);

// Write the full contents through a temporary file and rename, so a failed
// run never leaves a partial output behind.
void atomic_write(const std::string& path, const std::string& contents);

} // namespace fdrlab::io
