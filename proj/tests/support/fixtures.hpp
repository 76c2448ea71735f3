#pragma once

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dea::testing {

// One row of a reference-result fixture: printed two-decimal scores, the
// peer-weight sum and the printed returns-to-scale status abbreviation.
struct FixtureRow {
  int professor = 0;
  double theta_crs = 0.0;
  double theta_vrs = 0.0;
  double se = 0.0;
  double sum_lambda = 0.0;
  std::string status;
};

inline std::vector<FixtureRow> load_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fixture " + path);
  std::string line;
  if (!std::getline(in, line) ||
      line != "professor,theta_crs,theta_vrs,se,sum_lambda,status")
    throw std::runtime_error("unexpected fixture header in " + path);

  std::vector<FixtureRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        cells.push_back(line.substr(start));
        break;
      }
      cells.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (cells.size() != 6)
      throw std::runtime_error("bad fixture row in " + path + ": " + line);
    FixtureRow row;
    row.professor = std::stoi(cells[0]);
    row.theta_crs = std::stod(cells[1]);
    row.theta_vrs = std::stod(cells[2]);
    row.se = std::stod(cells[3]);
    row.sum_lambda = std::stod(cells[4]);
    row.status = cells[5];
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string fixture_path(const std::string& name) {
  return std::string(DEA_DATA_DIR) + "/fixtures/" + name;
}

}  // namespace dea::testing
