// Copyright 2026 The TrajCover Authors
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

#ifndef TRAJCOVER_TOOLS_COMMANDS_H_
#define TRAJCOVER_TOOLS_COMMANDS_H_

namespace trajcover {

// Exit codes: 0 success, 2 usage or configuration error, 3 data error,
// 4 at least one sweep cell failed.
int RunCli(int argc, char** argv);

}  // namespace trajcover

#endif  // TRAJCOVER_TOOLS_COMMANDS_H_
