#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lowdefault/time_series.hpp"

namespace lowdefault {

struct DatasetRecord {
    std::string name;
    std::string description;
    DefaultTimeSeries series;
    std::string source;
};

/// Parses `year,pool_size,defaults` CSV: the header line first, then one row
/// per year. Blank lines are skipped; CRLF line endings are accepted.
/// Throws ParseError (with line number) for malformed lines and
/// ValidationError for series invariant violations.
DefaultTimeSeries parse_csv(std::string_view content);

/// Inverse of parse_csv.
std::string serialize_csv(const DefaultTimeSeries& series);

/// Reads and parses a CSV file. Throws std::runtime_error if it cannot be read.
DefaultTimeSeries read_csv_file(const std::string& path);

/// Throws UnknownDatasetError for names other than those in builtin_dataset_names().
DatasetRecord builtin_dataset(std::string_view name);
std::vector<std::string> builtin_dataset_names();

/// One line per built-in dataset: "name (T=8, 1000 obligor-years, 1 default)".
std::vector<std::string> dataset_listing();

}  // namespace lowdefault
