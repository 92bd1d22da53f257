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

#include "ppdt/wire/files.hpp"

#include "ppdt/file_io.hpp"
#include "ppdt/wire/message.hpp"

namespace ppdt::wire {
namespace {

template <class T>
T ReadFrameFile(const std::filesystem::path& path) {
  Message msg = DecodeFrame(ReadFileBytes(path));
  auto* m = std::get_if<T>(&msg);
  if (!m) {
    throw Error(ErrorCode::kDecode, path.string() + ": holds a " +
                                        std::string(MsgTypeName(TypeOf(msg))) + " frame");
  }
  return std::move(*m);
}

}  // namespace

void WriteKeyMaterialFile(const std::filesystem::path& path, const he::KeyMaterial& keys) {
  WriteFileBytes(path, EncodeFrame(KeyMaterialMsg{keys}));
}

he::KeyMaterial ReadKeyMaterialFile(const std::filesystem::path& path) {
  return ReadFrameFile<KeyMaterialMsg>(path).keys;
}

void WriteSliceFile(const std::filesystem::path& path, const tree::LevelSlice& slice) {
  WriteFileBytes(path, EncodeFrame(SetupMsg{slice}));
}

tree::LevelSlice ReadSliceFile(const std::filesystem::path& path) {
  return ReadFrameFile<SetupMsg>(path).slice;
}

}  // namespace ppdt::wire
