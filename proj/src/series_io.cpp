#include "gna/series_io.hpp"

#include "gna/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string_view>

namespace gna {

ParseError::ParseError(const std::string& source, std::size_t line, std::size_t column,
                       const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) +
                         (column ? ":" + std::to_string(column) : std::string()) + ": " + what),
      line_(line), column_(column) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \r\n");
  return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view token, double& out) {
  token = trim(token);
  if (token.empty()) return false;
  if (token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

} // namespace

std::vector<TimeSeries> parse_ucr_tsv(std::istream& in, const std::string& source) {
  std::vector<TimeSeries> result;
  std::string line;
  std::size_t line_no = 0;
  std::size_t first_length = 0;
  bool mixed_lengths = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;

    std::vector<std::string_view> fields;
    std::string_view rest(line);
    while (true) {
      const auto tab = rest.find('\t');
      fields.push_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    // Tolerate a trailing tab.
    if (fields.size() > 1 && trim(fields.back()).empty()) fields.pop_back();
    if (fields.size() < 3)
      throw ParseError(source, line_no, 0,
                       "expected a label and at least 2 values, got " +
                           std::to_string(fields.size()) + " field(s)");

    TimeSeries ts;
    ts.id = static_cast<int>(result.size());
    double label = 0.0;
    if (!parse_double(fields[0], label) || !std::isfinite(label) || label != std::floor(label))
      throw ParseError(source, line_no, 1, "label is not an integer: '" + std::string(fields[0]) + "'");
    ts.raw_label = static_cast<long long>(label);

    ts.values.reserve(fields.size() - 1);
    for (std::size_t f = 1; f < fields.size(); ++f) {
      double v = 0.0;
      if (!parse_double(fields[f], v))
        throw ParseError(source, line_no, f + 1, "non-numeric value '" + std::string(fields[f]) + "'");
      if (!std::isfinite(v))
        throw ParseError(source, line_no, f + 1, "non-finite value '" + std::string(fields[f]) + "'");
      ts.values.push_back(v);
    }

    if (result.empty())
      first_length = ts.values.size();
    else if (ts.values.size() != first_length)
      mixed_lengths = true;
    result.push_back(std::move(ts));
  }

  if (mixed_lengths)
    std::clog << "[gna] warning: " << source << " contains series of different lengths\n";
  return result;
}

std::vector<TimeSeries> parse_ucr_tsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_ucr_tsv(in, path.string());
}

void write_ucr_tsv(std::ostream& out, const std::vector<TimeSeries>& series) {
  char buf[64];
  for (const auto& ts : series) {
    out << ts.raw_label;
    for (double v : ts.values) {
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
      out << '\t' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
    }
    out << '\n';
  }
}

void write_ucr_tsv(const std::filesystem::path& path, const std::vector<TimeSeries>& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_ucr_tsv(out, series);
  if (!out) throw IoError("write failed for " + path.string());
}

Dataset make_dataset(std::string name, std::vector<TimeSeries> train, std::vector<TimeSeries> test) {
  if (train.empty()) throw std::invalid_argument("dataset " + name + ": empty train split");
  if (test.empty()) throw std::invalid_argument("dataset " + name + ": empty test split");

  Dataset ds;
  ds.name = std::move(name);
  for (const auto* split : {&train, &test})
    for (const auto& ts : *split) ds.label_map.emplace(ts.raw_label, 0);
  int next = 0;
  for (auto& [raw, dense] : ds.label_map) dense = next++;
  ds.num_classes = next;
  if (ds.num_classes < 2)
    throw std::invalid_argument("dataset " + ds.name + ": need at least 2 classes");

  for (auto* split : {&train, &test}) {
    int id = 0;
    for (auto& ts : *split) {
      ts.id = id++;
      ts.label = ds.label_map.at(ts.raw_label);
    }
  }
  ds.train = std::move(train);
  ds.test = std::move(test);
  return ds;
}

Dataset load_dataset(const std::filesystem::path& train_path, const std::filesystem::path& test_path,
                     const std::string& name) {
  return make_dataset(name, parse_ucr_tsv(train_path), parse_ucr_tsv(test_path));
}

std::vector<double> znormalize(const std::vector<double>& values) {
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / n);

  std::vector<double> out(values.size(), 0.0);
  if (sd < 1e-12) return out;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - mean) / sd;
  return out;
}

TimeSeries znormalize(const TimeSeries& series) {
  TimeSeries out = series;
  out.values = znormalize(series.values);
  return out;
}

} // namespace gna
