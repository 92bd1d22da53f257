/*
 * Copyright 2026 The PPDT Level-Site Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PPDT_WIRE_FILES_HPP_
#define PPDT_WIRE_FILES_HPP_

#include <filesystem>

#include "ppdt/he/keys.hpp"
#include "ppdt/tree/slice.hpp"

namespace ppdt::wire {

// Public key file: one KEY_MATERIAL frame.
void WriteKeyMaterialFile(const std::filesystem::path& path, const he::KeyMaterial& keys);
he::KeyMaterial ReadKeyMaterialFile(const std::filesystem::path& path);

// Slice file: one SETUP frame, exactly what a level-site is sent.
void WriteSliceFile(const std::filesystem::path& path, const tree::LevelSlice& slice);
tree::LevelSlice ReadSliceFile(const std::filesystem::path& path);

}  // namespace ppdt::wire

#endif  // PPDT_WIRE_FILES_HPP_
