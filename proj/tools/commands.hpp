// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef NFBT_TOOLS_COMMANDS_HPP
#define NFBT_TOOLS_COMMANDS_HPP

#include "nfbt/config.hpp"

#include <iosfwd>
#include <string>

namespace nfbt::cli
{
    struct Invocation
    {
        CliConfig config; // seed and thread overrides already applied
        std::string out_dir = ".";
    };

    // Each command writes its artifacts under out_dir (estimate prints JSON to
    // out) and returns the process exit code. Errors propagate as exceptions.
    int cmd_pattern(const Invocation &inv, std::ostream &out, std::ostream &err);
    int cmd_estimate(const Invocation &inv, std::ostream &out, std::ostream &err);
    int cmd_mc(const Invocation &inv, std::ostream &out, std::ostream &err);
    int cmd_codebook_cache(const Invocation &inv, std::ostream &out, std::ostream &err);
} // namespace nfbt::cli

#endif
