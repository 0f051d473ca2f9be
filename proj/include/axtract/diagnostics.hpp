// Copyright 2026 The axtract Authors.
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


#pragma once

#include <string>
#include <vector>

namespace axtract {

// Non-fatal findings reported while processing a paper. Serialized as
// line-delimited JSON (one object per diagnostic).
struct Diagnostic {
  std::string kind;
  std::string message;
  std::string paper_id;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

class Diagnostics {
 public:
  void add(std::string kind, std::string message) {
    items_.push_back({std::move(kind), std::move(message), paper_id_});
  }
  void set_paper_id(std::string id) { paper_id_ = std::move(id); }
  void append(const Diagnostics& other) {
    items_.insert(items_.end(), other.items_.begin(), other.items_.end());
  }

  const std::vector<Diagnostic>& items() const { return items_; }
  std::size_t count(const std::string& kind) const;
  bool empty() const { return items_.empty(); }

  std::string to_jsonl() const;

 private:
  std::vector<Diagnostic> items_;
  std::string paper_id_;
};

}  // namespace axtract
