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

#ifndef PBOS_VECTORS_H_
#define PBOS_VECTORS_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "pbos/subword_stats.h"

namespace pbos {

using Vector = Eigen::VectorXd;

// Insertion-ordered token -> vector table of fixed dimension. Used both for
// target word vectors and for trainable subword vectors.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }

  // Adds token -> v. Returns false, leaving the table unchanged, if the token
  // is already present. Throws std::invalid_argument on a dimension mismatch.
  bool Insert(std::string token, Vector v);

  // Index of token, appending a zero vector on first touch.
  std::size_t Touch(std::string_view token);

  std::optional<std::size_t> IndexOf(std::string_view token) const;
  const Vector* Find(std::string_view token) const;

  const std::string& token(std::size_t i) const { return tokens_[i]; }
  const Vector& vector(std::size_t i) const { return vectors_[i]; }
  Vector& vector(std::size_t i) { return vectors_[i]; }
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::size_t dim_;
  std::vector<std::string> tokens_;
  std::vector<Vector> vectors_;
  StringMap<std::size_t> index_;
};

using TargetEmbeddings = EmbeddingTable;
using SubwordEmbeddings = EmbeddingTable;

}  // namespace pbos

#endif  // PBOS_VECTORS_H_
