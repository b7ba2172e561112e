#pragma once

// Result files: a single JSON header line followed by a CSV table or a JSON document.
// Numbers are printed with round-trip precision so identical runs give identical bytes.

#include "seqesc/sde.hpp"

#include <json.hpp>

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace seqesc {

inline constexpr const char* kToolName = "seqesc";
inline constexpr const char* kToolVersion = "1.0.0";

struct RunHeader {
    std::string command;
    nlohmann::json config = nlohmann::json::object();
    std::uint64_t seed = 0;
};

/// {"tool":..,"version":..,"command":..,"seed":..,"config":{..}} without a trailing newline.
std::string header_line(const RunHeader& header);

/// Shortest decimal form that round-trips.
std::string format_number(double v);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    /// Throws DomainError when the row width differs from the column count.
    void add_row(std::vector<std::string> row);
};

void write_csv(std::ostream& os, const RunHeader& header, const Table& table);
void write_json(std::ostream& os, const RunHeader& header, const nlohmann::json& payload);

/// Means, standard errors and sorted passage-time samples of every (k, l) pair.
nlohmann::json to_json(const EnsembleStats& stats);

/// Columns t, re_z1, im_z1, ... from a recorded path.
Table trajectory_table(const EscapeRecord& record);

} // namespace seqesc
