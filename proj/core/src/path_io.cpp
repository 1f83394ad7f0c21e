#include "pathqv/path_io.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "pathqv/error.hpp"

namespace pathqv {

std::string format_double(double x) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  double out = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ConfigError("not a number: '" + std::string(text) + "'");
  }
  return out;
}

void write_path_csv(std::ostream& os, const CadlagPath& path) {
  os << "[horizon]\n" << format_double(path.horizon()) << '\n';
  os << "[grid]\ntime,value\n";
  for (std::size_t i = 0; i < path.grid().size(); ++i) {
    os << format_double(path.grid()[i]) << ',' << format_double(path.cont_values()[i]) << '\n';
  }
  os << "[jumps]\ntime,size,fixed_time\n";
  for (const auto& j : path.jumps()) {
    os << format_double(j.time) << ',' << format_double(j.size) << ',' << (j.fixed_time ? 1 : 0)
       << '\n';
  }
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

CadlagPath read_path_csv(std::istream& is) {
  enum class Section { None, Horizon, Grid, Jumps } section = Section::None;
  double horizon = 0.0;
  bool have_horizon = false;
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<JumpEvent> jumps;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (line == "[horizon]") { section = Section::Horizon; continue; }
    if (line == "[grid]") { section = Section::Grid; continue; }
    if (line == "[jumps]") { section = Section::Jumps; continue; }
    if (line == "time,value" || line == "time,size,fixed_time") continue;
    const auto cells = split_commas(line);
    switch (section) {
      case Section::Horizon:
        if (cells.size() != 1) throw ConfigError("bad horizon line: " + line);
        horizon = parse_double(cells[0]);
        have_horizon = true;
        break;
      case Section::Grid:
        if (cells.size() != 2) throw ConfigError("bad grid line: " + line);
        grid.push_back(parse_double(cells[0]));
        values.push_back(parse_double(cells[1]));
        break;
      case Section::Jumps: {
        if (cells.size() != 3) throw ConfigError("bad jump line: " + line);
        const double flag = parse_double(cells[2]);
        if (flag != 0.0 && flag != 1.0) throw ConfigError("fixed_time must be 0 or 1");
        jumps.push_back({parse_double(cells[0]), parse_double(cells[1]), flag == 1.0});
        break;
      }
      case Section::None:
        throw ConfigError("data before any section header: " + line);
    }
  }
  if (!have_horizon) throw ConfigError("path file has no horizon");
  return CadlagPath(horizon, std::move(grid), std::move(values), std::move(jumps));
}

std::string path_to_json(const CadlagPath& path) {
  nlohmann::json j;
  j["horizon"] = path.horizon();
  j["grid"] = nlohmann::json::array();
  for (std::size_t i = 0; i < path.grid().size(); ++i) {
    j["grid"].push_back({path.grid()[i], path.cont_values()[i]});
  }
  j["jumps"] = nlohmann::json::array();
  for (const auto& e : path.jumps()) {
    j["jumps"].push_back({{"time", e.time}, {"size", e.size}, {"fixed_time", e.fixed_time}});
  }
  return j.dump();
}

CadlagPath path_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    std::vector<double> grid;
    std::vector<double> values;
    for (const auto& row : j.at("grid")) {
      grid.push_back(row.at(0).get<double>());
      values.push_back(row.at(1).get<double>());
    }
    std::vector<JumpEvent> jumps;
    for (const auto& e : j.at("jumps")) {
      jumps.push_back({e.at("time").get<double>(), e.at("size").get<double>(),
                       e.value("fixed_time", false)});
    }
    return CadlagPath(j.at("horizon").get<double>(), std::move(grid), std::move(values),
                      std::move(jumps));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed path JSON: ") + e.what());
  }
}

}  // namespace pathqv
