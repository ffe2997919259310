/*
 * Copyright (C) 2026 The cpsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
*/

#ifndef CPSIM__LOG_HPP
#define CPSIM__LOG_HPP

#include <string_view>

namespace cpsim {

enum class LogLevel
{
  Error = 0,
  Info = 1,
  Debug = 2
};

/// Level taken from the CP_SIM_LOG environment variable (error, info or
/// debug). Defaults to error; unrecognised values also mean error.
LogLevel log_level();

/// Writes one line to stderr if `level` is enabled. Thread-safe.
void log(LogLevel level, std::string_view message);

} // namespace cpsim

#endif // CPSIM__LOG_HPP
