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

#ifndef PPDT_LEVELSITE_TOKEN_HPP_
#define PPDT_LEVELSITE_TOKEN_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "ppdt/compare/messages.hpp"
#include "ppdt/he/ciphertext.hpp"

namespace ppdt::levelsite {

// What travels from one level-site to the next. next_index is plaintext: the
// receiving site has to dereference it.
struct TraversalToken {
  compare::SessionId session{};
  std::uint64_t next_index = 0;
  std::vector<he::Ciphertext> enc_features;  // Paillier, one per attribute
  std::string client_endpoint;
  bool bogus = false;

  friend bool operator==(const TraversalToken&, const TraversalToken&) = default;
};

}  // namespace ppdt::levelsite

#endif  // PPDT_LEVELSITE_TOKEN_HPP_
