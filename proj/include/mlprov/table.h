/* Copyright 2026 The mlprov Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Tab-separated tables. Every table starts with a format line
// "# mlprov <name> v<version>" followed by a header row.

#ifndef MLPROV_TABLE_H_
#define MLPROV_TABLE_H_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace mlprov {

inline constexpr int kTableVersion = 1;

// Shortest representation that parses back to the same double.
std::string FormatDouble(double v);

class TableWriter {
 public:
  TableWriter(std::ostream& out, std::string_view name, std::vector<std::string> header);

  void Row(const std::vector<std::string>& cells);
  std::size_t width() const { return width_; }

 private:
  std::ostream& out_;
  std::size_t width_;
};

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index of `name`; throws if absent.
  std::size_t column(std::string_view name) const;
};

// Reads one table, stopping before the next format line so that
// concatenated tables can be read in turn. Throws unless the format line
// names `expected_name` at kTableVersion and every row matches the header
// width.
Table ReadTable(std::istream& in, std::string_view expected_name);

double ParseDouble(std::string_view s);

}  // namespace mlprov

#endif  // MLPROV_TABLE_H_
