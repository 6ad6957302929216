#pragma once

// Report assembly shared by the CLI and the verification suite: stable CSV
// tables and JSON records in which every exposed number carries its error
// estimate and the operation that produced it.

#include <string>
#include <vector>

namespace loglap {

/// Shortest round-tripping decimal representation of a double.
std::string format_number(double v);

struct ValueRecord {
    std::string label;
    double value = 0.0;
    double error_estimate = 0.0;
    std::string provenance; // producing operation / method
};

struct ReportTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    /// Header row plus data rows; an empty table is a lone header row.
    std::string to_csv() const;
};

/// JSON array of the records with value, error_estimate and provenance.
std::string records_to_json(const std::vector<ValueRecord>& records);

} // namespace loglap
