#include "dirmax/io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <unistd.h>

#include <json.hpp>

#include "dirmax/error.hpp"

namespace dirmax {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return ss.str();
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into " + path.string());
  }
}

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

void put_f64(std::string& out, double v) {
  const auto u = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((u >> (8 * b)) & 0xff));
}

std::uint64_t get_le(std::string_view s, std::size_t at, int bytes) {
  std::uint64_t v = 0;
  for (int b = 0; b < bytes; ++b) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(s[at + b])) << (8 * b);
  return v;
}

constexpr std::size_t kHeader = 16 + 8;

}  // namespace

std::string grid_to_binary(const Grid2D& g) {
  g.validate();
  std::string out = "GRD2";
  out.reserve(kHeader + 8 * g.values.size());
  put_u32(out, static_cast<std::uint32_t>(g.width));
  put_u32(out, static_cast<std::uint32_t>(g.height));
  put_u32(out, 0);
  put_f64(out, g.spacing);
  for (double v : g.values) put_f64(out, v);
  return out;
}

Grid2D grid_from_binary(std::string_view bytes) {
  if (bytes.size() < kHeader || bytes.substr(0, 4) != "GRD2") throw std::invalid_argument("grid: bad header");
  const auto w = get_le(bytes, 4, 4), h = get_le(bytes, 8, 4);
  const double spacing = std::bit_cast<double>(get_le(bytes, 16, 8));
  if (w == 0 || h == 0 || w > (1u << 16) || h > (1u << 16)) throw std::invalid_argument("grid: bad dimensions");
  if (bytes.size() != kHeader + 8 * w * h) throw std::invalid_argument("grid: size does not match the header");
  Grid2D g(static_cast<int>(w), static_cast<int>(h), spacing);
  for (std::size_t q = 0; q < g.values.size(); ++q)
    g.values[q] = std::bit_cast<double>(get_le(bytes, kHeader + 8 * q, 8));
  g.validate();
  return g;
}

std::string grid_to_csv(const Grid2D& g) {
  g.validate();
  std::string out;
  char buf[32];
  for (int j = 0; j < g.height; ++j) {
    for (int i = 0; i < g.width; ++i) {
      const auto r = std::to_chars(buf, buf + sizeof buf, g.at(i, j));
      if (i) out.push_back(',');
      out.append(buf, r.ptr);
    }
    out.push_back('\n');
  }
  return out;
}

Grid2D grid_from_csv(std::string_view text, double spacing) {
  std::vector<std::vector<double>> rows;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    std::vector<double> row;
    std::size_t c = 0;
    while (true) {
      std::size_t comma = line.find(',', c);
      std::string_view cell = line.substr(c, comma == std::string_view::npos ? line.size() - c : comma - c);
      while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
      while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
      double v = 0;
      const auto r = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (r.ec != std::errc() || r.ptr != cell.data() + cell.size())
        throw std::invalid_argument("grid csv: bad number '" + std::string(cell) + "'");
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      c = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw std::invalid_argument("grid csv: ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("grid csv: no data");
  Grid2D g(static_cast<int>(rows.front().size()), static_cast<int>(rows.size()), spacing);
  for (int j = 0; j < g.height; ++j)
    for (int i = 0; i < g.width; ++i) g.at(i, j) = rows[j][i];
  g.validate();
  return g;
}

Grid2D read_grid(const std::filesystem::path& path, double csv_spacing) {
  const std::string data = read_file(path);
  if (path.extension() == ".csv") return grid_from_csv(data, csv_spacing);
  return grid_from_binary(data);
}

void write_grid(const std::filesystem::path& path, const Grid2D& g) {
  write_atomic(path, path.extension() == ".csv" ? grid_to_csv(g) : grid_to_binary(g));
}

std::string decomposition_to_json(const LacunaryDecomposition& d) {
  json j;
  j["gap"] = d.gap();
  j["domain"] = {d.domain().lo, d.domain().hi};
  j["chain"] = d.chain();
  json groups = json::array();
  for (const auto& g : d.groups())
    groups.push_back({{"step", g.step}, {"host", {g.host.lo, g.host.hi}}, {"pole", g.pole}, {"points", g.points}});
  j["groups"] = groups;
  json ranks = json::array();
  for (const auto& r : d.rank_intervals()) {
    json e = {{"lo", r.lo}, {"hi", r.hi}, {"rank", r.rank}};
    e["pole"] = r.pole ? json(*r.pole) : json(nullptr);
    ranks.push_back(e);
  }
  j["rank_intervals"] = ranks;
  j["order"] = d.order();
  return j.dump(2) + "\n";
}

LacunaryDecomposition decomposition_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("decomposition json: ") + e.what());
  }
  try {
    auto chain = j.at("chain").get<std::vector<std::vector<double>>>();
    const double gap = j.at("gap").get<double>();
    std::optional<Interval> domain;
    if (j.contains("domain")) {
      const auto d = j["domain"].get<std::vector<double>>();
      if (d.size() != 2) throw std::invalid_argument("decomposition json: domain needs two numbers");
      domain = Interval{d[0], d[1]};
    }
    std::vector<PoleHint> hints;
    if (j.contains("groups"))
      for (const auto& g : j["groups"]) {
        const auto host = g.at("host").get<std::vector<double>>();
        if (host.size() != 2) throw std::invalid_argument("decomposition json: host needs two numbers");
        hints.push_back({g.at("step").get<int>(), {host[0], host[1]}, g.at("pole").get<double>()});
      }
    return build_decomposition(std::move(chain), gap, domain, hints);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("decomposition json: ") + e.what());
  }
}

std::vector<double> slopes_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    const json& arr = j.is_object() ? j.at("slopes") : j;
    return arr.get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("slopes json: ") + e.what());
  }
}

}  // namespace dirmax
