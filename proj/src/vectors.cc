// Copyright 2026 The PBoS Authors
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

#include "pbos/vectors.h"

#include <stdexcept>
#include <utility>

namespace pbos {

bool EmbeddingTable::Insert(std::string token, Vector v) {
  if (static_cast<std::size_t>(v.size()) != dim_) {
    throw std::invalid_argument("vector for '" + token + "' has dimension " +
                                std::to_string(v.size()) + ", expected " +
                                std::to_string(dim_));
  }
  if (index_.contains(token)) return false;
  index_.emplace(token, tokens_.size());
  tokens_.push_back(std::move(token));
  vectors_.push_back(std::move(v));
  return true;
}

std::size_t EmbeddingTable::Touch(std::string_view token) {
  if (auto it = index_.find(token); it != index_.end()) return it->second;
  const std::size_t id = tokens_.size();
  index_.emplace(std::string(token), id);
  tokens_.emplace_back(token);
  vectors_.push_back(Vector::Zero(static_cast<Eigen::Index>(dim_)));
  return id;
}

std::optional<std::size_t> EmbeddingTable::IndexOf(
    std::string_view token) const {
  if (auto it = index_.find(token); it != index_.end()) return it->second;
  return std::nullopt;
}

const Vector* EmbeddingTable::Find(std::string_view token) const {
  if (auto it = index_.find(token); it != index_.end()) {
    return &vectors_[it->second];
  }
  return nullptr;
}

}  // namespace pbos
