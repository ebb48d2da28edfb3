// Copyright 2026 The Brier Authors
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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace brier::csv {

/// Reads RFC-4180 records (quoted fields, doubled quotes, CRLF or LF).
class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  /// Next record into `fields`; false at end of input. Throws DataError on
  /// an unterminated quote.
  bool next(std::vector<std::string>& fields);

  /// 1-based line on which the last returned record started.
  std::size_t record_line() const noexcept { return record_line_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
};

/// Quotes a field when it holds a comma, quote or line break.
std::string quote(std::string_view field);

}  // namespace brier::csv
