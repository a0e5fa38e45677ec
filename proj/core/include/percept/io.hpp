// Copyright 2026 The Percept Authors
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

#ifndef PERCEPT_IO_HPP_
#define PERCEPT_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace percept {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view data);
void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& data);

// ISO-8601 UTC timestamp, e.g. "2026-08-10T12:34:56Z".
std::string utc_timestamp();

}  // namespace percept

#endif  // PERCEPT_IO_HPP_
