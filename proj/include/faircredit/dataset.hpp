#pragma once

// Loading, curation and splitting of loan-application tables into the
// encoded TabularDataset every processor consumes: numeric feature matrix,
// binary labels (1 = favorable), binary protected flags (1 = privileged)
// and per-instance weights.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "faircredit/core.hpp"
#include "faircredit/csv.hpp"
#include "faircredit/schema.hpp"

namespace faircredit {

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Kind of an *encoded* feature column. The protected attribute keeps its own
// kind so repairs can skip it, and one-hot/binary indicators are
// distinguishable from true numerics.
enum class FeatureKind { numeric, onehot, binary, protected_flag };

struct RawColumn {
    std::string name;
    ColumnKind kind = ColumnKind::categorical;
    std::vector<std::string> cells;   // raw text, categorical/binary
    std::vector<double> values;       // parsed, numeric
    std::vector<std::uint8_t> missing;
};

struct RawTable {
    std::size_t n_rows = 0;
    std::vector<RawColumn> columns;   // CSV header order, drop-listed removed later
    std::vector<std::string> target_cells;
    std::vector<std::uint8_t> target_missing;
};

struct TabularDataset {
    Matrix X;                                 // N x d, all numeric
    std::vector<int> labels;                  // 1 favorable, 0 unfavorable
    std::vector<int> protected_flags;         // 1 privileged, 0 unprivileged
    std::vector<double> weights;              // > 0
    std::vector<std::string> feature_names;   // d
    std::vector<FeatureKind> feature_kinds;   // d
    std::vector<std::size_t> source_indices;  // provenance, drives the leakage guard

    std::size_t size() const { return X.rows(); }
    std::size_t dim() const { return X.cols(); }

    void validate() const {
        const std::size_t n = size();
        if (labels.size() != n || protected_flags.size() != n || weights.size() != n)
            throw DataError("dataset: inconsistent vector lengths");
        if (feature_names.size() != dim() || feature_kinds.size() != dim())
            throw DataError("dataset: feature metadata length mismatch");
        bool l0 = false, l1 = false, p0 = false, p1 = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(weights[i] > 0.0)) throw DataError("dataset: non-positive weight");
            (labels[i] ? l1 : l0) = true;
            (protected_flags[i] ? p1 : p0) = true;
        }
        if (!(l0 && l1)) throw DataError("dataset: both label values must be present");
        if (!(p0 && p1)) throw DataError("dataset: both protected groups must be present");
        for (double v : X.data())
            if (!std::isfinite(v)) throw DataError("dataset: non-finite feature value");
    }
};

struct DataSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;  // may be empty
    std::vector<std::size_t> test;
};

struct FoldPlan {
    std::size_t k = 0;
    std::uint64_t seed = 0;
    struct Fold {
        std::vector<std::size_t> train;
        std::vector<std::size_t> test;
    };
    std::vector<Fold> folds;
};

namespace detail {

inline bool is_missing_token(const std::string& s) {
    static const std::set<std::string> tokens = {"", "NA", "N/A", "NaN", "nan", "?", "NULL", "null"};
    return tokens.count(s) > 0;
}

inline bool parse_number(const std::string& s, double& out) {
    const char* p = s.c_str();
    char* end = nullptr;
    out = std::strtod(p, &end);
    if (end == p) return false;
    while (*end == ' ' || *end == '\t') ++end;
    return *end == '\0' && std::isfinite(out);
}

// Median with the even-count convention: mean of the two middle values.
inline double median_of(std::vector<double> v) {
    if (v.empty()) throw DataError("median of empty set");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// load_csv

inline RawTable load_raw(const std::vector<std::vector<std::string>>& rows, const FeatureSchema& schema) {
    schema.validate();
    if (rows.size() <= 1) throw DataError("load_csv: empty file");
    const auto& header = rows[0];

    std::set<std::string> seen;
    for (const auto& h : header) {
        if (!seen.insert(h).second) throw DataError("load_csv: duplicate column: " + h);
        if (h != schema.target && !schema.columns.count(h) && !schema.drop.count(h))
            throw DataError("load_csv: unknown column: " + h);
    }
    for (const auto& [name, kind] : schema.columns) {
        (void)kind;
        if (!seen.count(name)) throw DataError("load_csv: schema column missing from file: " + name);
    }
    if (!seen.count(schema.target)) throw DataError("load_csv: target column missing from file: " + schema.target);

    RawTable table;
    table.n_rows = rows.size() - 1;
    std::vector<std::size_t> keep;       // header indices of feature columns
    std::size_t target_idx = header.size();
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == schema.target) {
            target_idx = c;
        } else if (!schema.drop.count(header[c])) {
            keep.push_back(c);
        }
    }

    for (std::size_t c : keep) {
        RawColumn col;
        col.name = header[c];
        col.kind = schema.columns.at(col.name);
        col.missing.resize(table.n_rows, 0);
        if (col.kind == ColumnKind::numeric) col.values.resize(table.n_rows, 0.0);
        else col.cells.resize(table.n_rows);
        table.columns.push_back(std::move(col));
    }
    table.target_cells.resize(table.n_rows);
    table.target_missing.resize(table.n_rows, 0);

    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != header.size())
            throw DataError("load_csv: row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                            " fields, expected " + std::to_string(header.size()));
        for (std::size_t k = 0; k < keep.size(); ++k) {
            const std::string& cell = row[keep[k]];
            RawColumn& col = table.columns[k];
            if (detail::is_missing_token(cell)) {
                col.missing[r - 1] = 1;
                continue;
            }
            if (col.kind == ColumnKind::numeric) {
                double v;
                if (!detail::parse_number(cell, v))
                    throw DataError("load_csv: unparseable numeric cell '" + cell + "' in column " +
                                    col.name + ", row " + std::to_string(r));
                col.values[r - 1] = v;
            } else {
                col.cells[r - 1] = cell;
            }
        }
        const std::string& t = row[target_idx];
        if (detail::is_missing_token(t)) table.target_missing[r - 1] = 1;
        else table.target_cells[r - 1] = t;
    }
    return table;
}

inline RawTable load_csv(const std::string& path, const FeatureSchema& schema) {
    return load_raw(read_csv(path), schema);
}

// ---------------------------------------------------------------------------
// curate

inline TabularDataset curate(const RawTable& raw, const FeatureSchema& schema) {
    const std::size_t n = raw.n_rows;
    if (n == 0) throw DataError("curate: empty table");

    TabularDataset ds;
    ds.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (raw.target_missing[i]) throw DataError("curate: target column has missing values");
        ds.labels[i] = raw.target_cells[i] == schema.favorable_value ? 1 : 0;
    }

    struct Encoded {
        std::string name;
        FeatureKind kind;
        std::vector<double> values;
    };
    std::vector<Encoded> encoded;
    std::vector<double> protected_raw;  // values used to derive the flag

    for (const RawColumn& col : raw.columns) {
        const bool is_protected = col.name == schema.protected_attribute;
        if (col.kind == ColumnKind::numeric) {
            std::vector<double> present;
            for (std::size_t i = 0; i < n; ++i)
                if (!col.missing[i]) present.push_back(col.values[i]);
            if (present.empty())
                throw DataError("curate: all-missing numeric column: " + col.name);
            const double med = detail::median_of(present);
            std::vector<double> vals(n);
            for (std::size_t i = 0; i < n; ++i) vals[i] = col.missing[i] ? med : col.values[i];
            if (is_protected) {
                protected_raw = vals;
                // the protected feature enters the matrix as its group flag
                std::vector<double> flags(n);
                for (std::size_t i = 0; i < n; ++i)
                    flags[i] = vals[i] < schema.protected_threshold ? 0.0 : 1.0;
                encoded.push_back({col.name, FeatureKind::protected_flag, std::move(flags)});
            } else {
                encoded.push_back({col.name, FeatureKind::numeric, std::move(vals)});
            }
        } else if (col.kind == ColumnKind::binary) {
            std::set<std::string> distinct;
            for (std::size_t i = 0; i < n; ++i)
                if (!col.missing[i]) distinct.insert(col.cells[i]);
            if (distinct.empty()) throw DataError("curate: all-missing binary column: " + col.name);
            if (distinct.size() > 2)
                throw DataError("curate: binary column " + col.name + " has " +
                                std::to_string(distinct.size()) + " distinct values");
            std::map<std::string, double> code;
            double v = 0.0;
            for (const auto& s : distinct) code[s] = v++;
            std::vector<double> present;
            for (std::size_t i = 0; i < n; ++i)
                if (!col.missing[i]) present.push_back(code[col.cells[i]]);
            const double med = detail::median_of(present);
            std::vector<double> vals(n);
            for (std::size_t i = 0; i < n; ++i) vals[i] = col.missing[i] ? med : code[col.cells[i]];
            if (is_protected) {
                protected_raw = vals;
                encoded.push_back({col.name, FeatureKind::protected_flag, vals});
            } else {
                encoded.push_back({col.name, FeatureKind::binary, std::move(vals)});
            }
        } else {  // categorical: dedicated "missing" class, full one-hot
            if (is_protected)
                throw DataError("curate: categorical protected attribute is not supported: " + col.name);
            std::set<std::string> cats;
            bool any_missing = false;
            for (std::size_t i = 0; i < n; ++i) {
                if (col.missing[i]) any_missing = true;
                else cats.insert(col.cells[i]);
            }
            if (any_missing) cats.insert("missing");
            for (const std::string& cat : cats) {
                std::vector<double> vals(n, 0.0);
                for (std::size_t i = 0; i < n; ++i) {
                    const std::string& cell = col.missing[i] ? std::string("missing") : col.cells[i];
                    if (cell == cat) vals[i] = 1.0;
                }
                encoded.push_back({col.name + "=" + cat, FeatureKind::onehot, std::move(vals)});
            }
        }
    }

    if (protected_raw.empty())
        throw DataError("curate: protected attribute column not found: " + schema.protected_attribute);

    ds.protected_flags.resize(n);
    const auto& col = *std::find_if(raw.columns.begin(), raw.columns.end(), [&](const RawColumn& c) {
        return c.name == schema.protected_attribute;
    });
    for (std::size_t i = 0; i < n; ++i) {
        if (col.kind == ColumnKind::numeric)
            ds.protected_flags[i] = protected_raw[i] < schema.protected_threshold ? 0 : 1;
        else
            ds.protected_flags[i] = protected_raw[i] >= 0.5 ? 1 : 0;
    }

    const std::size_t d = encoded.size();
    ds.X = Matrix(n, d);
    ds.feature_names.resize(d);
    ds.feature_kinds.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
        ds.feature_names[j] = encoded[j].name;
        ds.feature_kinds[j] = encoded[j].kind;
        for (std::size_t i = 0; i < n; ++i) ds.X(i, j) = encoded[j].values[i];
    }
    ds.weights.assign(n, 1.0);
    ds.source_indices.resize(n);
    for (std::size_t i = 0; i < n; ++i) ds.source_indices[i] = i;

    ds.validate();
    return ds;
}

// ---------------------------------------------------------------------------
// subset / export

inline TabularDataset subset(const TabularDataset& ds, const std::vector<std::size_t>& idx) {
    TabularDataset out;
    out.X = Matrix(idx.size(), ds.dim());
    out.labels.resize(idx.size());
    out.protected_flags.resize(idx.size());
    out.weights.resize(idx.size());
    out.feature_names = ds.feature_names;
    out.feature_kinds = ds.feature_kinds;
    out.source_indices.resize(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const std::size_t s = idx[i];
        if (s >= ds.size()) throw DataError("subset: index out of range");
        for (std::size_t j = 0; j < ds.dim(); ++j) out.X(i, j) = ds.X(s, j);
        out.labels[i] = ds.labels[s];
        out.protected_flags[i] = ds.protected_flags[s];
        out.weights[i] = ds.weights[s];
        out.source_indices[i] = ds.source_indices[s];
    }
    return out;
}

// Remove protected-flag columns from the feature matrix (the protected
// vector itself stays, it drives metrics). Processors that must not see the
// protected attribute at fit time train on this view.
inline TabularDataset drop_protected_features(const TabularDataset& ds) {
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < ds.dim(); ++j)
        if (ds.feature_kinds[j] != FeatureKind::protected_flag) keep.push_back(j);
    if (keep.size() == ds.dim()) return ds;
    TabularDataset out = ds;
    out.X = Matrix(ds.size(), keep.size());
    out.feature_names.clear();
    out.feature_kinds.clear();
    for (std::size_t k = 0; k < keep.size(); ++k) {
        out.feature_names.push_back(ds.feature_names[keep[k]]);
        out.feature_kinds.push_back(ds.feature_kinds[keep[k]]);
        for (std::size_t i = 0; i < ds.size(); ++i) out.X(i, k) = ds.X(i, keep[k]);
    }
    return out;
}

inline TabularDataset concat(const TabularDataset& a, const TabularDataset& b) {
    if (a.feature_names != b.feature_names) throw DataError("concat: feature mismatch");
    TabularDataset out = a;
    out.X = Matrix(a.size() + b.size(), a.dim());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) out.X(i, j) = a.X(i, j);
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j) out.X(a.size() + i, j) = b.X(i, j);
    out.labels.insert(out.labels.end(), b.labels.begin(), b.labels.end());
    out.protected_flags.insert(out.protected_flags.end(), b.protected_flags.begin(),
                               b.protected_flags.end());
    out.weights.insert(out.weights.end(), b.weights.begin(), b.weights.end());
    out.source_indices.insert(out.source_indices.end(), b.source_indices.begin(),
                              b.source_indices.end());
    return out;
}

inline std::string encoded_value_str(double v) {
    if (v == std::floor(v) && std::fabs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

inline void export_encoded_csv(const TabularDataset& ds, std::ostream& out) {
    std::vector<std::string> header = ds.feature_names;
    header.push_back("label");
    header.push_back("protected");
    header.push_back("weight");
    out << csv_row(header);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        std::vector<std::string> row;
        row.reserve(ds.dim() + 3);
        for (std::size_t j = 0; j < ds.dim(); ++j) row.push_back(encoded_value_str(ds.X(i, j)));
        row.push_back(std::to_string(ds.labels[i]));
        row.push_back(std::to_string(ds.protected_flags[i]));
        row.push_back(encoded_value_str(ds.weights[i]));
        out << csv_row(row);
    }
}

// ---------------------------------------------------------------------------
// splits

struct SplitFractions {
    double train = 0.7;
    double validation = 0.0;
    double test = 0.3;
};

namespace detail {

inline std::vector<std::vector<std::size_t>> indices_by_label(const TabularDataset& ds) {
    std::vector<std::vector<std::size_t>> by_class(2);
    for (std::size_t i = 0; i < ds.size(); ++i) by_class[ds.labels[i]].push_back(i);
    return by_class;
}

}  // namespace detail

inline DataSplit stratified_split(const TabularDataset& ds, const SplitFractions& f, std::uint64_t seed) {
    if (f.train < 0 || f.train > 1 || f.validation < 0 || f.validation > 1 || f.test < 0 || f.test > 1)
        throw DataError("stratified_split: fraction out of (0,1)");
    if (std::fabs(f.train + f.validation + f.test - 1.0) > 1e-9)
        throw DataError("stratified_split: fractions must sum to 1");
    if (f.train <= 0.0 || f.test <= 0.0)
        throw DataError("stratified_split: empty part");

    DataSplit split;
    Rng rng(seed);
    for (auto& cls : detail::indices_by_label(ds)) {
        rng.shuffle(cls);
        const std::size_t n = cls.size();
        std::size_t n_tr = static_cast<std::size_t>(std::llround(f.train * static_cast<double>(n)));
        std::size_t n_va = static_cast<std::size_t>(std::llround(f.validation * static_cast<double>(n)));
        if (n_tr + n_va > n) n_va = n - n_tr;
        std::size_t n_te = n - n_tr - n_va;
        if (n_tr == 0 || n_te == 0 || (f.validation > 0.0 && n_va == 0))
            throw DataError("stratified_split: class too small to stratify");
        std::size_t i = 0;
        for (; i < n_tr; ++i) split.train.push_back(cls[i]);
        for (; i < n_tr + n_va; ++i) split.validation.push_back(cls[i]);
        for (; i < n; ++i) split.test.push_back(cls[i]);
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.validation.begin(), split.validation.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

inline FoldPlan kfold(const TabularDataset& ds, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw DataError("kfold: k must be at least 2");
    auto by_class = detail::indices_by_label(ds);
    for (const auto& cls : by_class)
        if (cls.size() < k)
            throw DataError("kfold: k larger than a class count (" + std::to_string(cls.size()) + ")");

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.folds.resize(k);
    Rng rng(seed);
    std::vector<std::vector<std::size_t>> fold_members(k);
    for (auto& cls : by_class) {
        rng.shuffle(cls);
        for (std::size_t i = 0; i < cls.size(); ++i) fold_members[i % k].push_back(cls[i]);
    }
    for (std::size_t fi = 0; fi < k; ++fi) {
        auto& fold = plan.folds[fi];
        fold.test = fold_members[fi];
        for (std::size_t fj = 0; fj < k; ++fj) {
            if (fj == fi) continue;
            fold.train.insert(fold.train.end(), fold_members[fj].begin(), fold_members[fj].end());
        }
        std::sort(fold.test.begin(), fold.test.end());
        std::sort(fold.train.begin(), fold.train.end());
    }
    return plan;
}

// Statistical parity difference of the *raw labels* between protected groups,
// reported per split part. Positive >> favorable outcomes skew unprivileged.
struct SplitParity {
    double train = 0.0;
    std::optional<double> validation;
    double test = 0.0;
};

namespace detail {

inline double label_parity(const TabularDataset& ds, const std::vector<std::size_t>& idx) {
    double n[2] = {0, 0}, fav[2] = {0, 0};
    for (std::size_t i : idx) {
        const int g = ds.protected_flags[i];
        n[g] += 1.0;
        fav[g] += ds.labels[i];
    }
    if (n[0] == 0 || n[1] == 0) throw DataError("split_parity: a part lacks one protected group");
    return fav[0] / n[0] - fav[1] / n[1];
}

}  // namespace detail

inline SplitParity split_parity(const TabularDataset& ds, const DataSplit& split) {
    SplitParity p;
    p.train = detail::label_parity(ds, split.train);
    if (!split.validation.empty()) p.validation = detail::label_parity(ds, split.validation);
    p.test = detail::label_parity(ds, split.test);
    return p;
}

}  // namespace faircredit
