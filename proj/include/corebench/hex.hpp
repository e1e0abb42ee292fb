// Copyright 2026 The corebench Authors.
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

#ifndef COREBENCH_HEX_HPP_
#define COREBENCH_HEX_HPP_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace corebench {

/// Lowercase hex, two characters per byte.
std::string hex_encode(std::span<const std::uint8_t> bytes);

/// Inverse of hex_encode. Throws std::invalid_argument on odd length or
/// characters outside [0-9a-fA-F].
std::vector<std::uint8_t> hex_decode(std::string_view hex);

}  // namespace corebench

#endif  // COREBENCH_HEX_HPP_
