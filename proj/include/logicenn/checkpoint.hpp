/*
 *   Copyright 2026 The LogicENN Authors
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
 */

#ifndef LOGICENN_CHECKPOINT_HPP
#define LOGICENN_CHECKPOINT_HPP

#include <cstdint>
#include <filesystem>
#include <string>

#include "logicenn/model.hpp"

namespace logicenn {

inline constexpr char kCheckpointMagic[4] = {'L', 'E', 'N', 'N'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

// Layout, all integers and floats little-endian:
//   "LENN" | u32 version | u32 d | u32 layer count K | K x u32 widths
//   | K x u8 activation tags | u64 N_e | u64 N_r
//   | f64 payload: entities, (weight, bias) per layer, relations; row-major
std::string encode_checkpoint(const ModelParameters& params);
ModelParameters decode_checkpoint(const std::string& bytes);

void save_checkpoint(const ModelParameters& params, const std::filesystem::path& path);
ModelParameters load_checkpoint(const std::filesystem::path& path);

}  // namespace logicenn

#endif  // LOGICENN_CHECKPOINT_HPP
