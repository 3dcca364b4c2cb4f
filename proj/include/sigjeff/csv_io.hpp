#pragma once

#include <map>
#include <string>

#include "sigjeff/types.hpp"

namespace sigjeff {

// Mapping from label strings to {+1,-1}. Default accepts the literals
// "1"/"+1" and "-1".
struct LabelMap {
    std::map<std::string, int> to_class;

    static LabelMap defaults();
    int lookup(const std::string& value) const;  // throws on unknown value
};

// Parses "mutant=+1,wildtype=-1". Values must be +1, 1 or -1; duplicate keys
// are an error. An empty spec yields the default map.
LabelMap parse_label_map(const std::string& spec);

// Comma-separated file with a header row of variable names; `label_column`
// names the column holding class labels. Non-numeric cells, ragged rows and
// unmapped label values are reported with 1-based row/column positions.
LabeledMatrix load_csv(const std::string& path, const std::string& label_column,
                       const LabelMap& map);

// Data CSV (all columns numeric) plus a separate label file, one label per
// data row.
LabeledMatrix load_csv_split(const std::string& data_path, const std::string& labels_path,
                             const LabelMap& map);

// Header + rows, LF line endings, shortest round-trip number formatting (a
// written matrix loads back bit-identically). The label column is written
// first as +1/-1 literals.
void write_csv(const std::string& path, const LabeledMatrix& data,
               const std::string& label_column = "label");

// Shortest round-trip formatting used by every report writer.
void append_number(std::string& out, double value);

}  // namespace sigjeff
