#include "dsheat/snapshot.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "dsheat/errors.hpp"

namespace dsheat {

std::string format_real(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_snapshot_csv(std::ostream& out, const Field& f) {
  for (int k = 1; k <= f.dim(); ++k) out << "coord_" << k << ',';
  out << "value\n";
  f.for_each([&](std::span<const std::int64_t> n, double v) {
    if (v == 0.0) return;
    for (auto c : n) out << c << ',';
    out << format_real(v) << '\n';
  });
}

std::string snapshot_sidecar_json(const Field& f, std::int64_t tau) {
  nlohmann::json j;
  j["offset"] = f.box().lo;
  j["extents"] = f.box().extents;
  j["tau"] = tau;
  return j.dump(2);
}

std::pair<std::filesystem::path, std::filesystem::path> write_snapshot(const std::filesystem::path& stem,
                                                                         const Field& f, std::int64_t tau) {
  std::filesystem::path csv = stem;
  csv += ".csv";
  std::filesystem::path json = stem;
  json += ".json";
  {
    std::ofstream out(csv);
    if (!out) throw Error("cannot open " + csv.string() + " for writing");
    write_snapshot_csv(out, f);
  }
  {
    std::ofstream out(json);
    if (!out) throw Error("cannot open " + json.string() + " for writing");
    out << snapshot_sidecar_json(f, tau) << '\n';
  }
  return {csv, json};
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> parts;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  if (!line.empty() && line.back() == ',') parts.emplace_back();
  return parts;
}

}  // namespace

Field read_snapshot_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DomainError("snapshot: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);
  if (header.size() < 2 || header.back() != "value") throw DomainError("snapshot: header must end with 'value'");
  const int d = static_cast<int>(header.size()) - 1;
  for (int k = 0; k < d; ++k) {
    if (header[k] != "coord_" + std::to_string(k + 1))
      throw DomainError("snapshot: header column " + std::to_string(k + 1) + " must be coord_" + std::to_string(k + 1));
  }
  std::vector<std::pair<Coord, double>> sites;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto parts = split(line);
    if (static_cast<int>(parts.size()) != d + 1)
      throw DomainError("snapshot: line " + std::to_string(lineno) + " has wrong column count");
    Coord n(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
      const auto& s = parts[k];
      const auto res = std::from_chars(s.data(), s.data() + s.size(), n[k]);
      if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw DomainError("snapshot: bad coordinate on line " + std::to_string(lineno));
    }
    double v = 0.0;
    const auto& s = parts.back();
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
      throw DomainError("snapshot: bad value on line " + std::to_string(lineno));
    sites.emplace_back(std::move(n), v);
  }
  return Field::from_sites(d, sites);
}

Field read_snapshot(const std::filesystem::path& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw DomainError("snapshot: cannot open " + csv_path.string());
  return read_snapshot_csv(in);
}

}  // namespace dsheat
