#include "qaml/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "qaml/errors.hpp"

namespace qaml::data {

namespace {

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

bool parse_double(const std::string& s, double* out) {
    if (s.empty()) return false;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) return false;
    *out = v;
    return true;
}

}  // namespace

int Table::column_index(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    return it == columns.end() ? -1 : static_cast<int>(it - columns.begin());
}

Table read_csv_text(const std::string& text) {
    Table t;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw DataError("csv: missing header line");
    t.columns = split_line(strip_cr(line));
    if (t.columns.empty() || (t.columns.size() == 1 && t.columns[0].empty())) {
        throw DataError("csv: empty header");
    }
    while (std::getline(in, line)) {
        line = strip_cr(line);
        if (line.empty()) continue;
        auto cells = split_line(line);
        if (cells.size() != t.columns.size()) {
            throw DataError("csv: row with " + std::to_string(cells.size()) +
                            " cells, expected " + std::to_string(t.columns.size()));
        }
        t.cells.push_back(std::move(cells));
    }
    return t;
}

Table read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("csv: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return read_csv_text(buf.str());
}

std::string to_csv_text(const Table& table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c > 0) out += ",";
        out += table.columns[c];
    }
    out += "\n";
    for (const auto& row : table.cells) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) out += ",";
            out += row[c];
        }
        out += "\n";
    }
    return out;
}

void write_csv_file(const std::string& path, const Table& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("csv: cannot write " + path);
    out << to_csv_text(table);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::json DataSchema::to_json() const {
    nlohmann::json cats = nlohmann::json::array();
    for (const auto& c : categories) cats.push_back(c);
    nlohmann::json flags = nlohmann::json::array();
    for (const bool b : categorical) flags.push_back(b);
    return nlohmann::json{{"target", target},
                          {"features", features},
                          {"categorical", std::move(flags)},
                          {"categories", std::move(cats)}};
}

DataSchema DataSchema::from_json(const nlohmann::json& j) {
    DataSchema s;
    s.target = j.at("target").get<std::string>();
    s.features = j.at("features").get<std::vector<std::string>>();
    for (const auto& b : j.at("categorical")) s.categorical.push_back(b.get<bool>());
    for (const auto& c : j.at("categories")) {
        s.categories.push_back(c.get<std::vector<std::string>>());
    }
    if (s.features.size() != s.categorical.size() ||
        s.features.size() != s.categories.size()) {
        throw SchemaError("data schema: inconsistent feature metadata");
    }
    return s;
}

DataSchema infer_schema(const Table& table, const std::string& target,
                        const std::vector<std::string>& declared_categorical) {
    if (table.column_index(target) < 0) {
        throw DataError("data: target column '" + target + "' not found");
    }
    for (const auto& name : declared_categorical) {
        if (table.column_index(name) < 0) {
            throw DataError("data: declared categorical column '" + name + "' not found");
        }
    }
    DataSchema schema;
    schema.target = target;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        const std::string& name = table.columns[c];
        if (name == target) continue;
        bool is_cat = std::find(declared_categorical.begin(), declared_categorical.end(),
                                name) != declared_categorical.end();
        if (!is_cat) {
            for (const auto& row : table.cells) {
                double v;
                if (!row[c].empty() && !parse_double(row[c], &v)) {
                    is_cat = true;
                    break;
                }
            }
        }
        std::vector<std::string> cats;
        if (is_cat) {
            for (const auto& row : table.cells) {
                if (!row[c].empty()) cats.push_back(row[c]);
            }
            std::sort(cats.begin(), cats.end());
            cats.erase(std::unique(cats.begin(), cats.end()), cats.end());
        }
        schema.features.push_back(name);
        schema.categorical.push_back(is_cat);
        schema.categories.push_back(std::move(cats));
    }
    if (schema.features.empty() && table.columns.size() == 1) {
        // Univariate series: the target is the only column.
        return schema;
    }
    return schema;
}

Dataset materialize(const Table& table, const DataSchema& schema, bool require_target) {
    Dataset d;
    d.schema = schema;
    const auto n = table.n_rows();
    const auto n_features = static_cast<Eigen::Index>(schema.features.size());
    d.X.resize(n, n_features);

    for (Eigen::Index f = 0; f < n_features; ++f) {
        const auto fs = static_cast<std::size_t>(f);
        const int col = table.column_index(schema.features[fs]);
        if (col < 0) {
            throw DataError("data: column '" + schema.features[fs] + "' not found");
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            const std::string& cell = table.cells[static_cast<std::size_t>(i)]
                                                 [static_cast<std::size_t>(col)];
            if (cell.empty()) {
                d.X(i, f) = std::numeric_limits<double>::quiet_NaN();
                continue;
            }
            if (schema.categorical[fs]) {
                const auto& cats = schema.categories[fs];
                const auto it = std::find(cats.begin(), cats.end(), cell);
                d.X(i, f) = it == cats.end()
                                ? -1.0  // unseen category
                                : static_cast<double>(it - cats.begin());
            } else {
                double v;
                if (!parse_double(cell, &v)) {
                    throw DataError("data: non-numeric cell '" + cell + "' in column '" +
                                    schema.features[fs] + "'");
                }
                d.X(i, f) = v;
            }
        }
    }

    const int target_col = table.column_index(schema.target);
    if (target_col >= 0) {
        d.has_target = true;
        d.y.resize(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const std::string& cell = table.cells[static_cast<std::size_t>(i)]
                                                 [static_cast<std::size_t>(target_col)];
            double v;
            if (!parse_double(cell, &v)) {
                throw DataError("data: non-numeric target cell '" + cell + "'");
            }
            d.y[i] = v;
        }
    } else if (require_target) {
        throw DataError("data: target column '" + schema.target + "' not found");
    }
    return d;
}

}  // namespace qaml::data
