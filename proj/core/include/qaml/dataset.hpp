// CSV ingestion and the in-memory dataset model.
//
// CSVs are header-keyed, UTF-8, '.' decimal. A column is treated as
// categorical when declared so or when any non-empty cell fails numeric
// parsing. Categorical cells are mapped to integer codes against the
// schema's category list; unseen categories map to code -1 (which one-hot
// encodes as all zeros). Empty cells are missing values (NaN).

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "json.hpp"

namespace qaml::data {

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> cells;  // row-major raw text
    Eigen::Index n_rows() const { return static_cast<Eigen::Index>(cells.size()); }

    int column_index(const std::string& name) const;  // -1 if absent
};

Table read_csv_file(const std::string& path);
Table read_csv_text(const std::string& text);
void write_csv_file(const std::string& path, const Table& table);
std::string to_csv_text(const Table& table);

// Column typing and category coding fixed at fit time.
struct DataSchema {
    std::string target;
    std::vector<std::string> features;                  // order defines X columns
    std::vector<bool> categorical;                      // aligned with features
    std::vector<std::vector<std::string>> categories;   // category -> code, per feature

    nlohmann::json to_json() const;
    static DataSchema from_json(const nlohmann::json& j);
};

struct Dataset {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;     // empty when the table has no target column
    bool has_target = false;
    DataSchema schema;
};

// Infers the schema from a training table: every non-target column is a
// feature; categorical columns come from `declared_categorical` plus any
// column with non-numeric content.
DataSchema infer_schema(const Table& table, const std::string& target,
                        const std::vector<std::string>& declared_categorical);

// Materializes X (and y when present) against a fixed schema; columns are
// looked up by header name, so column order in the file does not matter.
Dataset materialize(const Table& table, const DataSchema& schema, bool require_target);

// Formats a double with up to 17 significant digits (round-trip exact).
std::string format_double(double v);

}  // namespace qaml::data
