// Copyright 2026 The csgd-lab Authors. All Rights Reserved.
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
// =============================================================================

// Runs the twelve acceptance criteria and prints one line per criterion.
// Exit status is nonzero when any criterion fails.

#include <cstdio>
#include <cstring>

#include "csgd/verify.h"

int main(int argc, char** argv) {
  csgd::SuiteOptions o;
  o.golden_dir = CSGD_GOLDEN_DIR;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--quick") == 0) o.quick = true;
  int failed = 0;
  for (const auto& r : csgd::RunSuite(o)) {
    std::printf("criterion %2d %s: %s [%s] (%.2fs)\n", r.id,
                r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str(),
                r.seconds);
    std::fflush(stdout);
    if (!r.pass) ++failed;
  }
  std::printf("%d of 12 criteria passed\n", 12 - failed);
  return failed ? 1 : 0;
}
