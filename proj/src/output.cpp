#include "seqesc/output.hpp"

#include "seqesc/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace seqesc {

std::string header_line(const RunHeader& header) {
    nlohmann::ordered_json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["command"] = header.command;
    j["seed"] = header.seed;
    j["config"] = header.config;
    return j.dump();
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{}", v);
}

void Table::add_row(std::vector<std::string> row) {
    if (row.size() != columns.size()) throw DomainError("row width does not match the column count");
    rows.push_back(std::move(row));
}

void write_csv(std::ostream& os, const RunHeader& header, const Table& table) {
    os << header_line(header) << '\n';
    for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
        os << '\n';
    }
}

void write_json(std::ostream& os, const RunHeader& header, const nlohmann::json& payload) {
    os << header_line(header) << '\n' << payload.dump(2) << '\n';
}

nlohmann::json to_json(const EnsembleStats& stats) {
    nlohmann::json j;
    j["nodes"] = stats.nodes;
    j["realizations"] = stats.realizations;
    j["censored"] = stats.censored_count;
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [key, ps] : stats.pairs) {
        pairs.push_back({{"k", key.first},
                         {"l", key.second},
                         {"mean", ps.mean},
                         {"se", ps.se},
                         {"n", ps.samples.size()},
                         {"samples", ps.samples}});
    }
    j["pairs"] = pairs;
    return j;
}

Table trajectory_table(const EscapeRecord& record) {
    Table table;
    table.columns.push_back("t");
    const std::size_t n = record.path.empty() ? 0 : record.path.front().z.size();
    for (std::size_t i = 1; i <= n; ++i) {
        table.columns.push_back(fmt::format("re_z{}", i));
        table.columns.push_back(fmt::format("im_z{}", i));
    }
    for (const auto& sample : record.path) {
        std::vector<std::string> row{format_number(sample.t)};
        for (const auto& z : sample.z) {
            row.push_back(format_number(z.real()));
            row.push_back(format_number(z.imag()));
        }
        table.add_row(std::move(row));
    }
    return table;
}

} // namespace seqesc
