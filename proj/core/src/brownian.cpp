#include "airyproc/brownian.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "airyproc/format.hpp"

namespace airyproc {

double BrownianGrid::value_at(std::size_t c) const {
  if (c > increments.size()) throw std::out_of_range("BrownianGrid::value_at");
  double b = 0.0;
  for (std::size_t i = 0; i < c; ++i) b += increments[i];
  return b;
}

BrownianGrid BrownianGrid::coarsened(std::size_t factor) const {
  if (factor == 0 || increments.size() % factor != 0) {
    throw std::invalid_argument("BrownianGrid::coarsened: factor must divide the cell count");
  }
  BrownianGrid out;
  out.mesh = mesh * static_cast<double>(factor);
  out.origin = origin;
  out.increments.assign(increments.size() / factor, 0.0);
  for (std::size_t i = 0; i < increments.size(); ++i) out.increments[i / factor] += increments[i];
  return out;
}

BrownianGrid sample_brownian_grid(RngStream& stream, double mesh, std::size_t num_cells) {
  if (!(mesh > 0.0) || !std::isfinite(mesh)) {
    throw std::invalid_argument("sample_brownian_grid: mesh must be positive");
  }
  if (num_cells == 0) throw std::invalid_argument("sample_brownian_grid: num_cells must be >= 1");
  BrownianGrid path;
  path.mesh = mesh;
  path.increments.resize(num_cells);
  const double sd = std::sqrt(mesh);
  for (auto& db : path.increments) db = sd * stream.normal();
  return path;
}

void write_brownian_csv(std::ostream& out, const BrownianGrid& path) {
  out << "# mesh=" << format_double(path.mesh) << " origin=" << format_double(path.origin)
      << " cells=" << path.increments.size() << '\n';
  out << "increment\n";
  for (double db : path.increments) out << format_double(db) << '\n';
}

BrownianGrid read_brownian_csv(std::istream& in) {
  BrownianGrid path;
  std::string line;
  std::size_t cells = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream fields(line.substr(1));
      std::string field;
      while (fields >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "mesh") path.mesh = parse_double(value);
        if (key == "origin") path.origin = parse_double(value);
        if (key == "cells") cells = std::stoull(value);
      }
      have_header = true;
      continue;
    }
    if (line == "increment") continue;
    path.increments.push_back(parse_double(line));
  }
  if (!have_header || !(path.mesh > 0.0)) {
    throw std::runtime_error("read_brownian_csv: missing or invalid mesh header");
  }
  if (path.increments.size() != cells) {
    throw std::runtime_error("read_brownian_csv: cell count does not match header");
  }
  return path;
}

}  // namespace airyproc
