#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace gna {

/// One labeled univariate series.
///
/// After parse_ucr_tsv() only `raw_label` is meaningful; load_dataset()
/// assigns the dense `label` in [0, num_classes).
struct TimeSeries {
  int id = 0;
  int label = -1;
  long long raw_label = 0;
  std::vector<double> values;
};

struct Dataset {
  std::string name;
  std::vector<TimeSeries> train;
  std::vector<TimeSeries> test;
  int num_classes = 0;
  std::map<long long, int> label_map; // raw label -> dense id
};

// Parses UCR-2018 TSV text: `<label>\t<v1>\t<v2>...` per line. Empty lines
// are skipped. `source` names the input in error messages.
std::vector<TimeSeries> parse_ucr_tsv(std::istream& in, const std::string& source = "<stream>");
std::vector<TimeSeries> parse_ucr_tsv(const std::filesystem::path& path);

void write_ucr_tsv(std::ostream& out, const std::vector<TimeSeries>& series);
void write_ucr_tsv(const std::filesystem::path& path, const std::vector<TimeSeries>& series);

Dataset load_dataset(const std::filesystem::path& train_path,
                     const std::filesystem::path& test_path, const std::string& name);

// Densifies raw labels by ascending sort across both splits.
Dataset make_dataset(std::string name, std::vector<TimeSeries> train,
                     std::vector<TimeSeries> test);

/// Zero mean, unit population standard deviation. A series whose standard
/// deviation is below 1e-12 comes back as all zeros.
TimeSeries znormalize(const TimeSeries& series);
std::vector<double> znormalize(const std::vector<double>& values);

} // namespace gna
