#include "loglap/report.hpp"

#include <json.hpp>

#include <cstdio>

namespace loglap {

std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string ReportTable::to_csv() const
{
    std::string out;
    for (size_t i = 0; i < columns.size(); ++i) {
        out += columns[i];
        out += (i + 1 < columns.size()) ? ',' : '\n';
    }
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            out += row[i];
            out += (i + 1 < row.size()) ? ',' : '\n';
        }
    }
    return out;
}

std::string records_to_json(const std::vector<ValueRecord>& records)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) {
        arr.push_back({{"label", r.label},
                       {"value", r.value},
                       {"error_estimate", r.error_estimate},
                       {"provenance", r.provenance}});
    }
    return arr.dump(2);
}

} // namespace loglap
