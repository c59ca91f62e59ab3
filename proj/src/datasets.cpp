#include "choiceapprox/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "choiceapprox/error.hpp"

namespace choiceapprox {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto end = line.find(sep, start);
    out.push_back(trim(std::string_view(line).substr(start, end == std::string::npos ? std::string::npos : end - start)));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

[[noreturn]] void fail(const std::string& source, std::size_t line, std::size_t column, const std::string& what) {
  throw DataError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what);
}

double parse_number(const std::string& cell, const std::string& source, std::size_t line, std::size_t column) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (cell.empty() || ec != std::errc() || ptr != last)
    fail(source, line, column, "non-numeric cell '" + cell + "'");
  if (!std::isfinite(v)) fail(source, line, column, "non-finite value '" + cell + "'");
  return v;
}

bool skip(const std::string& line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

}  // namespace

Dataset parse_dataset(std::istream& in, const std::string& source) {
  Dataset ds;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::unordered_set<std::string> ids;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip(line)) continue;
    const auto cells = split(line, ',');
    if (!have_header) {
      if (cells.front() != "id") fail(source, lineno, 1, "header must start with 'id'");
      if (cells.size() < 2) fail(source, lineno, 1, "header declares no characteristics");
      ds.characteristic_names.assign(cells.begin() + 1, cells.end());
      have_header = true;
      continue;
    }
    if (cells.size() != ds.characteristic_names.size() + 1)
      fail(source, lineno, std::min(cells.size(), ds.characteristic_names.size() + 2),
           "ragged row: expected " + std::to_string(ds.characteristic_names.size() + 1) + " cells, found " +
               std::to_string(cells.size()));
    if (cells.front().empty()) fail(source, lineno, 1, "empty id");
    if (!ids.insert(cells.front()).second) fail(source, lineno, 1, "duplicate id '" + cells.front() + "'");
    Alternative alt{cells.front(), {}};
    for (std::size_t c = 1; c < cells.size(); ++c) alt.chars.push_back(parse_number(cells[c], source, lineno, c + 1));
    ds.alternatives.push_back(std::move(alt));
  }
  if (!have_header) throw DataError(source + ": missing header");
  if (ds.alternatives.empty()) throw DataError(source + ": no alternatives");
  return ds;
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return parse_dataset(in, path);
}

void save_dataset(std::ostream& out, const Dataset& dataset) {
  out << "id";
  for (const auto& n : dataset.characteristic_names) out << ',' << n;
  out << '\n';
  const auto old = out.precision(17);
  for (const auto& alt : dataset.alternatives) {
    out << alt.id;
    for (double v : alt.chars) out << ',' << v;
    out << '\n';
  }
  out.precision(old);
}

Dataset builtin_fishing() {
  return Dataset{{"price", "catch_rate"},
                 {{"beach", {103.422, 0.2410113}},
                  {"boat", {55.256, 0.1712146}},
                  {"charter", {84.379, 0.6293679}},
                  {"pier", {103.422, 0.1622237}}}};
}

StochasticChoice parse_choice(std::istream& in, const SpacePtr& space, const std::string& source) {
  std::vector<double> values(space->entry_count(), 0.0);
  std::vector<bool> seen(space->entry_count(), false);
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip(line)) continue;
    const auto cells = split(line, ',');
    if (!have_header) {
      if (cells.size() != 3 || cells[0] != "menu" || cells[1] != "alternative" || cells[2] != "probability")
        fail(source, lineno, 1, "header must be 'menu,alternative,probability'");
      have_header = true;
      continue;
    }
    if (cells.size() != 3) fail(source, lineno, std::min<std::size_t>(cells.size(), 4), "ragged row");
    std::vector<std::size_t> members;
    for (const auto& id : split(cells[0], '|')) {
      try {
        members.push_back(space->index_of(id));
      } catch (const DataError& e) {
        fail(source, lineno, 1, e.what());
      }
    }
    const auto menu = space->find_menu(members);
    if (!menu) fail(source, lineno, 1, "menu {" + cells[0] + "} is not in the space");
    std::size_t alt = 0;
    try {
      alt = space->index_of(cells[1]);
    } catch (const DataError& e) {
      fail(source, lineno, 2, e.what());
    }
    const auto& m = space->menus()[*menu];
    const auto it = std::find(m.begin(), m.end(), alt);
    if (it == m.end()) fail(source, lineno, 2, "'" + cells[1] + "' is not a member of the menu");
    const std::size_t entry = space->offset(*menu) + static_cast<std::size_t>(it - m.begin());
    if (seen[entry]) fail(source, lineno, 1, "duplicate entry");
    seen[entry] = true;
    values[entry] = parse_number(cells[2], source, lineno, 3);
  }
  for (std::size_t m = 0; m < space->menus().size(); ++m)
    for (std::size_t i = 0; i < space->menus()[m].size(); ++i)
      if (!seen[space->offset(m) + i])
        throw DataError(source + ": missing probability for '" + space->alternative(space->menus()[m][i]).id +
                        "' in menu {" + space->menu_label(m) + "}");
  return ingest_choice(space, std::move(values));
}

StochasticChoice load_choice(const std::string& path, const SpacePtr& space) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return parse_choice(in, space, path);
}

void save_choice(std::ostream& out, const StochasticChoice& rho) {
  const auto& space = *rho.space();
  out << "menu,alternative,probability\n";
  const auto old = out.precision(17);
  for (std::size_t m = 0; m < space.menus().size(); ++m) {
    const auto row = rho.row(m);
    for (std::size_t i = 0; i < row.size(); ++i)
      out << space.menu_label(m) << ',' << space.alternative(space.menus()[m][i]).id << ',' << row[i] << '\n';
  }
  out.precision(old);
}

}  // namespace choiceapprox
