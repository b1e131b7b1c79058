/* Copyright 2026 The trlc Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef TRLC_CLI_HPP_
#define TRLC_CLI_HPP_

#include <iosfwd>

namespace trlc {

// Exit codes.
inline constexpr int kExitOk = 0;       // success / query true
inline constexpr int kExitFalse = 1;    // query false, no plan
inline constexpr int kExitUsage = 2;    // bad flags, unreadable or malformed input
inline constexpr int kExitUnknown = 3;  // search bounds exhausted

// The `trlc` command line. Streams are parameters so tests can drive it.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
            std::istream& in);

}  // namespace trlc

#endif  // TRLC_CLI_HPP_
