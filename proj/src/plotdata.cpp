#include "digitlens/counting.hpp"
#include "digitlens/recipe.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace digitlens {

namespace fs = std::filesystem;

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw Error("CSV has no column '" + name + "'");
  }
  bool has(const std::string& name) const {
    return std::find(header.begin(), header.end(), name) != header.end();
  }
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

Table read_csv(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw Error("cannot open " + p.string());
  Table t;
  std::string line;
  if (!std::getline(in, line) || line.empty()) throw Error("empty CSV: " + p.string());
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = split(line);
    if (row.size() != t.header.size()) throw Error("ragged CSV row in " + p.string());
    t.rows.push_back(std::move(row));
  }
  if (t.rows.empty()) throw Error("empty CSV: " + p.string());
  return t;
}

double number(const std::string& s) {
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw Error("non-numeric CSV cell '" + s + "'");
  }
}

void write_pairs(const fs::path& p, const std::vector<std::pair<double, double>>& pts, const std::string& comment) {
  std::ofstream out(p);
  if (!out) throw Error("cannot write " + p.string());
  out << "# " << comment << '\n';
  for (const auto& [x, y] : pts) out << format_double(x) << ' ' << format_double(y) << '\n';
}

}  // namespace

std::vector<fs::path> emit_plotdata(const fs::path& csv, const std::string& style, const fs::path& out_prefix) {
  const Table t = read_csv(csv);
  std::vector<fs::path> written;
  if (!out_prefix.parent_path().empty()) fs::create_directories(out_prefix.parent_path());

  if (style == "scaling") {
    const std::size_t xc = t.column("delta");
    std::string yname;
    for (const char* c : {"mhigh", "value", "count"}) {
      if (t.has(c)) {
        yname = c;
        break;
      }
    }
    if (yname.empty()) throw Error("scaling CSV needs one of the columns mhigh, value, count");
    const std::size_t yc = t.column(yname);
    std::vector<ScalingPoint> pts;
    std::vector<std::pair<double, double>> xy;
    for (const auto& row : t.rows) {
      const double d = number(row[xc]), v = number(row[yc]);
      if (d <= 0.0 || v <= 0.0) continue;  // not representable on log axes
      pts.push_back({d, v});
      xy.emplace_back(std::log(1.0 / d), std::log(v));
    }
    if (xy.empty()) throw Error("scaling CSV has no positive rows");
    const fs::path data = fs::path(out_prefix.string() + ".dat");
    write_pairs(data, xy, "log(1/delta) log(" + yname + ")");
    written.push_back(data);
    if (pts.size() >= 3) {
      const ScalingFit f = fit_exponent(pts);
      std::vector<std::pair<double, double>> line;
      for (const auto& [x, y] : xy) line.emplace_back(x, f.intercept + f.exponent * x);
      const fs::path fit = fs::path(out_prefix.string() + ".fit.dat");
      write_pairs(fit, line, "fit slope " + format_double(f.exponent) + " r2 " + format_double(f.r2));
      written.push_back(fit);
    }
    return written;
  }
  if (style == "sweep") {
    const std::size_t ic = t.column("index"), dc = t.column("delta"), rc = t.column("ratio");
    std::map<long, std::vector<std::pair<double, double>>> slices;
    for (const auto& row : t.rows) {
      slices[std::stol(row[ic])].emplace_back(std::log(1.0 / number(row[dc])), number(row[rc]));
    }
    for (const auto& [idx, pts] : slices) {
      const fs::path p = fs::path(out_prefix.string() + "." + std::to_string(idx) + ".dat");
      write_pairs(p, pts, "log(1/delta) ratio, transform " + std::to_string(idx));
      written.push_back(p);
    }
    return written;
  }
  throw Error("unknown plot style '" + style + "' (expected scaling or sweep)");
}

}  // namespace digitlens
