// Copyright 2026 The qem-lab Authors
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

#include <filesystem>
#include <string>
#include <vector>

namespace qem {

/// Numeric table written as CSV with 17 significant digits.
class Table {
 public:
  Table(std::string name, std::vector<std::string> columns);

  const std::string &name() const noexcept { return name_; }
  const std::vector<std::string> &columns() const noexcept { return columns_; }
  const std::vector<std::vector<double>> &rows() const noexcept { return rows_; }

  void add_row(std::vector<double> row);
  /// Column index by name. Throws if absent.
  std::size_t column(const std::string &name) const;
  std::vector<double> column_values(const std::string &name) const;

  std::string to_csv() const;
  void write(const std::filesystem::path &path) const;

 private:
  std::string name_;
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

/// "%.17g", with "nan", "inf" and "-inf" for non-finite values.
std::string format_double(double x);

}  // namespace qem
