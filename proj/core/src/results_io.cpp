#include "cfmimo/results_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "cfmimo/errors.hpp"
#include "cfmimo/performance.hpp"

namespace cfmimo {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) {
      return out;
    }
    start = pos + 1;
  }
}

std::vector<std::string_view> lines_of(std::string_view text) {
  auto lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty()) {
    lines.pop_back();
  }
  for (auto& l : lines) {
    if (!l.empty() && l.back() == '\r') {
      l.remove_suffix(1);
    }
  }
  return lines;
}

double parse_double(std::string_view field, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw IoError("line " + std::to_string(line) + ": bad number '" + std::string(field) + "'");
  }
  return value;
}

std::size_t parse_count(std::string_view field, std::size_t line) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw IoError("line " + std::to_string(line) + ": bad integer '" + std::string(field) + "'");
  }
  return value;
}

void check_header(const std::vector<std::string_view>& lines, std::string_view expected) {
  if (lines.empty() || lines.front() != expected) {
    throw IoError("CSV header does not match schema '" + std::string(expected) + "'");
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string results_to_csv(std::span<const ResultRecord> records) {
  std::string out(kResultsHeader);
  out += '\n';
  for (const auto& r : records) {
    out += r.scenario;
    out += ',' + std::to_string(r.drop) + ',' + std::to_string(r.user);
    for (const double v : {r.velocity_kmh, r.rho, r.tpn_label_deg, r.attenuation, r.gamma_linear, r.se_bpshz}) {
      out += ',' + format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::string summary_to_csv(std::span<const SummaryRecord> records) {
  std::string out(kSummaryHeader);
  out += '\n';
  for (const auto& r : records) {
    out += r.scenario + ',' + format_double(r.q05_bpshz) + ',' + format_double(r.q50_bpshz) + ',' +
           std::to_string(r.n_samples) + '\n';
  }
  return out;
}

std::vector<ResultRecord> parse_results_csv(std::string_view text) {
  const auto lines = lines_of(text);
  check_header(lines, kResultsHeader);
  std::vector<ResultRecord> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != 9) {
      throw IoError("results line " + std::to_string(i + 1) + ": expected 9 fields");
    }
    ResultRecord r;
    r.scenario = std::string(f[0]);
    r.drop = parse_count(f[1], i + 1);
    r.user = parse_count(f[2], i + 1);
    r.velocity_kmh = parse_double(f[3], i + 1);
    r.rho = parse_double(f[4], i + 1);
    r.tpn_label_deg = parse_double(f[5], i + 1);
    r.attenuation = parse_double(f[6], i + 1);
    r.gamma_linear = parse_double(f[7], i + 1);
    r.se_bpshz = parse_double(f[8], i + 1);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SummaryRecord> parse_summary_csv(std::string_view text) {
  const auto lines = lines_of(text);
  check_header(lines, kSummaryHeader);
  std::vector<SummaryRecord> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != 4) {
      throw IoError("summary line " + std::to_string(i + 1) + ": expected 4 fields");
    }
    out.push_back({std::string(f[0]), parse_double(f[1], i + 1), parse_double(f[2], i + 1), parse_count(f[3], i + 1)});
  }
  return out;
}

std::vector<SummaryRecord> summarize(std::span<const ResultRecord> records) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> samples;
  for (const auto& r : records) {
    auto [it, inserted] = samples.try_emplace(r.scenario);
    if (inserted) {
      order.push_back(r.scenario);
    }
    it->second.push_back(r.se_bpshz);
  }
  std::vector<SummaryRecord> out;
  for (const auto& label : order) {
    const auto& s = samples[label];
    const auto cdf = cdf_and_percentiles(s);
    out.push_back({label, cdf.q05, cdf.q50, s.size()});
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot open " + tmp.string() + " for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      throw IoError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_results(std::span<const ResultRecord> records, std::span<const SummaryRecord> summary,
                   const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  }
  write_file_atomic(dir / "results.csv", results_to_csv(records));
  write_file_atomic(dir / "summary.csv", summary_to_csv(summary));
}

}  // namespace cfmimo
