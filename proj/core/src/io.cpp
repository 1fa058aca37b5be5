#include "levysp/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "levysp/errors.hpp"

namespace levysp {

namespace {

constexpr int kDigits = 17;

double to_real(std::string_view text, const char* what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ArgumentError(std::string("malformed ") + what + " '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t to_count(std::string_view text, const char* what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ArgumentError(std::string("malformed ") + what + " '" + std::string(text) + "'");
  }
  return v;
}

struct CsvTable {
  std::map<std::string, std::string> meta;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

CsvTable read_table(std::istream& in) {
  CsvTable t;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto body = line.substr(line.find_first_not_of("# "));
      const auto eq = body.find('=');
      if (eq != std::string::npos) t.meta[body.substr(0, eq)] = body.substr(eq + 1);
      continue;
    }
    if (t.header.empty()) {
      t.header = split_csv(line);
      continue;
    }
    auto cells = split_csv(line);
    if (cells.size() != t.header.size()) throw ArgumentError("CSV row has the wrong number of columns: " + line);
    t.rows.push_back(std::move(cells));
  }
  if (t.header.empty()) throw ArgumentError("CSV input has no header");
  return t;
}

void expect_header(const CsvTable& t, const std::vector<std::string>& expected) {
  if (t.header != expected) {
    std::string want;
    for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
    throw ArgumentError("unexpected CSV header; expected " + want);
  }
}

void check_indices(const CsvTable& t) {
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (to_count(t.rows[i][0], "index") != i) throw ArgumentError("CSV indices must run 0, 1, 2, ...");
  }
}

}  // namespace

void write_atomically(const std::filesystem::path& path, const std::function<void(std::ostream&)>& writer) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    try {
      writer(out);
    } catch (...) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw;
    }
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot move output into place at '" + path.string() + "'");
  }
}

void write_path_csv(std::ostream& out, const SamplePath& path) {
  out.precision(kDigits);
  if (path.spec) out << "# innovation=" << path.spec->to_string() << '\n';
  out << "# T=" << path.period << '\n';
  out << "# seed=" << path.seed << '\n';
  out << "index,value\n";
  for (std::size_t i = 0; i < path.values.size(); ++i) out << i << ',' << path.values[i] << '\n';
}

SamplePath read_path_csv(std::istream& in) {
  const CsvTable t = read_table(in);
  expect_header(t, {"index", "value"});
  check_indices(t);
  SamplePath path;
  if (auto it = t.meta.find("innovation"); it != t.meta.end()) path.spec = InnovationSpec::parse(it->second);
  if (auto it = t.meta.find("T"); it != t.meta.end()) path.period = to_real(it->second, "T");
  if (auto it = t.meta.find("seed"); it != t.meta.end()) path.seed = to_count(it->second, "seed");
  for (const auto& row : t.rows) path.values.push_back(to_real(row[1], "value"));
  if (path.values.empty()) throw ArgumentError("path CSV has no rows");
  return path;
}

void write_observations_csv(std::ostream& out, const Observations& obs, const SamplePath* truth) {
  out.precision(kDigits);
  if (truth != nullptr) {
    if (truth->spec) out << "# innovation=" << truth->spec->to_string() << '\n';
    out << "# T=" << truth->period << '\n';
    out << "# seed=" << truth->seed << '\n';
  }
  out << "# noise_variance=" << obs.noise_variance << '\n';
  out << "# stride=" << obs.stride << '\n';
  out << "# fine_grid_length=" << obs.fine_grid_length << '\n';
  out << "index,value,noisy\n";
  for (std::size_t i = 0; i < obs.noisy.size(); ++i) {
    out << i << ',';
    if (truth != nullptr) out << truth->values.at(i * obs.stride);
    out << ',' << obs.noisy[i] << '\n';
  }
}

Observations read_observations_csv(std::istream& in) {
  const CsvTable t = read_table(in);
  expect_header(t, {"index", "value", "noisy"});
  check_indices(t);
  Observations obs;
  auto meta = [&](const char* key) -> const std::string& {
    const auto it = t.meta.find(key);
    if (it == t.meta.end()) throw ArgumentError(std::string("observations CSV lacks '# ") + key + "='");
    return it->second;
  };
  obs.noise_variance = to_real(meta("noise_variance"), "noise_variance");
  obs.stride = to_count(meta("stride"), "stride");
  obs.fine_grid_length = to_count(meta("fine_grid_length"), "fine_grid_length");
  for (const auto& row : t.rows) obs.noisy.push_back(to_real(row[2], "noisy"));
  obs.validate();
  return obs;
}

void write_result_csv(std::ostream& out, const DenoiseResult& result) {
  out.precision(kDigits);
  out << "index,estimate\n";
  for (std::size_t i = 0; i < result.estimate.size(); ++i) out << i << ',' << result.estimate[i] << '\n';
}

void write_marginals(const std::filesystem::path& dir, const DenoiseResult& result) {
  if (!result.posterior_marginals) throw ArgumentError("result carries no posterior marginals");
  std::filesystem::create_directories(dir);
  const auto& marginals = *result.posterior_marginals;
  for (std::size_t k = 0; k < marginals.size(); ++k) {
    write_atomically(dir / ("node_" + std::to_string(k + 1) + ".csv"),
                     [&](std::ostream& out) { marginals[k].write_csv(out); });
  }
}

}  // namespace levysp
