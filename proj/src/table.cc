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

#include "mlprov/table.h"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "mlprov/types.h"

namespace mlprov {
namespace {

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) return out;
    start = tab + 1;
  }
}

}  // namespace

std::string FormatDouble(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buf, end);
}

double ParseDouble(std::string_view s) {
  double v = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size())
    throw Error("not a number: '" + std::string(s) + "'");
  return v;
}

TableWriter::TableWriter(std::ostream& out, std::string_view name, std::vector<std::string> header)
    : out_(out), width_(header.size()) {
  out_ << "# mlprov " << name << " v" << kTableVersion << '\n';
  Row(header);
}

void TableWriter::Row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw Error("table row width does not match header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].find_first_of("\t\n") != std::string::npos)
      throw Error("table cell contains a tab or newline");
    if (i) out_ << '\t';
    out_ << cells[i];
  }
  out_ << '\n';
}

std::size_t Table::column(std::string_view col) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == col) return i;
  throw Error("table " + name + " has no column '" + std::string(col) + "'");
}

Table ReadTable(std::istream& in, std::string_view expected_name) {
  std::string line;
  if (!std::getline(in, line)) throw Error("empty table");
  const std::string want = "# mlprov " + std::string(expected_name) + " v" + std::to_string(kTableVersion);
  if (line != want) throw Error("expected table header '" + want + "', got '" + line + "'");
  Table t;
  t.name = std::string(expected_name);
  if (!std::getline(in, line)) throw Error("table " + t.name + " has no header row");
  t.header = SplitTabs(line);
  std::size_t n = 2;
  // The next format line starts another table; leave it in the stream.
  while (in.peek() != '#' && std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    auto cells = SplitTabs(line);
    if (cells.size() != t.header.size())
      throw Error("table " + t.name + " line " + std::to_string(n) + ": expected " +
                  std::to_string(t.header.size()) + " cells, got " + std::to_string(cells.size()));
    t.rows.push_back(std::move(cells));
  }
  return t;
}

}  // namespace mlprov
