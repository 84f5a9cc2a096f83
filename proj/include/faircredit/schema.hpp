#pragma once

// Declarative dataset schema: which column is the target, which raw value is
// favorable, which column is protected (and its numeric cut point), and the
// kind of every feature column. Parsed from a small key-value config file:
//
//   target = creditability
//   favorable = good
//   protected = age_in_years
//   protected_threshold = 26        # unprivileged iff value < threshold
//   drop = id, birthplace
//   column.duration_in_month = numeric
//   column.purpose = categorical
//   column.telephone = binary

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace faircredit {

enum class ColumnKind { numeric, categorical, binary };

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FeatureSchema {
    // declaration order is not significant; the CSV header drives layout
    std::map<std::string, ColumnKind> columns;
    std::string target;
    std::string favorable_value;      // raw target value mapped to label 1
    std::string protected_attribute;
    double protected_threshold = 0.0; // unprivileged iff raw value < threshold
    bool has_threshold = false;
    std::set<std::string> drop;

    void validate() const {
        if (target.empty()) throw SchemaError("schema: missing target");
        if (favorable_value.empty()) throw SchemaError("schema: missing favorable value");
        if (protected_attribute.empty()) throw SchemaError("schema: missing protected attribute");
        auto it = columns.find(protected_attribute);
        if (it == columns.end())
            throw SchemaError("schema: protected attribute not declared as a column: " + protected_attribute);
        if (it->second == ColumnKind::numeric && !has_threshold)
            throw SchemaError("schema: numeric protected attribute requires protected_threshold");
        if (columns.count(target))
            throw SchemaError("schema: target must not also be declared as a feature column");
        if (drop.count(target) || drop.count(protected_attribute))
            throw SchemaError("schema: target/protected attribute cannot be dropped");
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace detail

inline ColumnKind parse_column_kind(const std::string& s) {
    if (s == "numeric") return ColumnKind::numeric;
    if (s == "categorical") return ColumnKind::categorical;
    if (s == "binary") return ColumnKind::binary;
    throw SchemaError("schema: unknown column kind: " + s);
}

inline const char* column_kind_name(ColumnKind k) {
    switch (k) {
        case ColumnKind::numeric: return "numeric";
        case ColumnKind::categorical: return "categorical";
        case ColumnKind::binary: return "binary";
    }
    return "?";
}

inline FeatureSchema parse_schema_text(const std::string& text) {
    FeatureSchema schema;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw SchemaError("schema: line " + std::to_string(lineno) + ": expected key = value");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (key == "target") {
            schema.target = value;
        } else if (key == "favorable") {
            schema.favorable_value = value;
        } else if (key == "protected") {
            schema.protected_attribute = value;
        } else if (key == "protected_threshold") {
            try {
                schema.protected_threshold = std::stod(value);
            } catch (const std::exception&) {
                throw SchemaError("schema: bad protected_threshold: " + value);
            }
            schema.has_threshold = true;
        } else if (key == "drop") {
            for (auto& c : detail::split_list(value)) schema.drop.insert(c);
        } else if (key.rfind("column.", 0) == 0) {
            std::string col = key.substr(7);
            if (col.empty()) throw SchemaError("schema: empty column name");
            schema.columns[col] = parse_column_kind(value);
        } else {
            throw SchemaError("schema: unknown key: " + key);
        }
    }
    schema.validate();
    return schema;
}

inline FeatureSchema load_schema(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("schema: cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_schema_text(ss.str());
}

}  // namespace faircredit
