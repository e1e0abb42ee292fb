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

#ifndef COREBENCH_CSV_HPP_
#define COREBENCH_CSV_HPP_

#include <map>
#include <string>
#include <vector>

namespace corebench {

// None of the harness's fields contain commas or quotes, so this is a plain
// split/join CSV, not an RFC 4180 parser.

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws std::out_of_range for unknown names.
  std::size_t col(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

std::vector<std::string> split_csv_line(const std::string& line);

std::string join_csv(const std::vector<std::string>& fields);

}  // namespace corebench

#endif  // COREBENCH_CSV_HPP_
