// Copyright 2026 The parseval Authors
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

#pragma once

#include <chrono>
#include <string>
#include <string_view>

#include "parseval/expected.hpp"

namespace parseval::harness {

struct ProcessResult {
  // Exit code, or 128 + signal number when the child was killed by a signal.
  int exit_status = 0;
  bool timed_out = false;
  std::string output;  // everything the child wrote to stdout
};

// Runs `/bin/sh -c command`, feeds `input` on stdin, then closes it. stderr is
// inherited. On timeout the child is killed with SIGKILL.
Expected<ProcessResult, std::string> run_process(const std::string& command, std::string_view input,
                                                 std::chrono::milliseconds timeout);

}  // namespace parseval::harness
