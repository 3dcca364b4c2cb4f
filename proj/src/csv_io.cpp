#include "sigjeff/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

namespace sigjeff {

namespace {

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw invalid_input("cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw invalid_input(path + " is empty");
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

double parse_cell(const std::string& field, const std::string& path, std::size_t row_1,
                  std::size_t col_1) {
    const std::string_view t = trim(field);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size())
        throw invalid_input(path + ": row " + std::to_string(row_1) + ", column " +
                            std::to_string(col_1) + ": not a number: '" + field + "'");
    return value;
}

}  // namespace

LabelMap LabelMap::defaults() {
    return {{{"1", 1}, {"+1", 1}, {"-1", -1}}};
}

int LabelMap::lookup(const std::string& value) const {
    const std::string key{trim(value)};
    const auto it = to_class.find(key);
    if (it == to_class.end())
        throw invalid_input("label value '" + key +
                            "' has no mapping; pass --label-map name=+1,name=-1");
    return it->second;
}

LabelMap parse_label_map(const std::string& spec) {
    if (spec.empty()) return LabelMap::defaults();
    LabelMap map;
    for (const std::string& item : split_fields(spec)) {
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw invalid_input("label map entry '" + item + "' is not name=value");
        const std::string key{trim(item.substr(0, eq))};
        const std::string_view val = trim(item.substr(eq + 1));
        int cls = 0;
        if (val == "+1" || val == "1")
            cls = 1;
        else if (val == "-1")
            cls = -1;
        else
            throw invalid_input("label map value for '" + key + "' must be +1 or -1");
        if (key.empty()) throw invalid_input("label map has an empty label name");
        if (!map.to_class.emplace(key, cls).second)
            throw invalid_input("label map lists '" + key + "' twice");
    }
    return map;
}

LabeledMatrix load_csv(const std::string& path, const std::string& label_column,
                       const LabelMap& map) {
    const std::vector<std::string> lines = read_lines(path);
    const std::vector<std::string> header = split_fields(lines[0]);

    std::size_t label_idx = header.size();
    for (std::size_t c = 0; c < header.size(); ++c)
        if (std::string{trim(header[c])} == label_column) {
            label_idx = c;
            break;
        }
    if (label_idx == header.size())
        throw invalid_input(path + ": no column named '" + label_column + "'");
    if (header.size() < 2)
        throw invalid_input(path + ": need at least one variable column");

    const std::size_t n = lines.size() - 1;
    const std::size_t d = header.size() - 1;
    Matrix values(n, d);
    std::vector<int> labels(n);
    std::vector<std::string> names;
    names.reserve(d);
    for (std::size_t c = 0; c < header.size(); ++c)
        if (c != label_idx) names.emplace_back(trim(header[c]));

    for (std::size_t r = 0; r < n; ++r) {
        const std::vector<std::string> fields = split_fields(lines[r + 1]);
        if (fields.size() != header.size())
            throw invalid_input(path + ": row " + std::to_string(r + 2) + " has " +
                                std::to_string(fields.size()) + " fields, expected " +
                                std::to_string(header.size()));
        std::size_t out_c = 0;
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (c == label_idx) {
                labels[r] = map.lookup(fields[c]);
            } else {
                values(r, out_c) = parse_cell(fields[c], path, r + 2, c + 1);
                ++out_c;
            }
        }
    }
    return LabeledMatrix::create(std::move(values), std::move(labels), std::move(names));
}

LabeledMatrix load_csv_split(const std::string& data_path, const std::string& labels_path,
                             const LabelMap& map) {
    const std::vector<std::string> lines = read_lines(data_path);
    const std::vector<std::string> header = split_fields(lines[0]);
    const std::size_t n = lines.size() - 1;
    const std::size_t d = header.size();

    Matrix values(n, d);
    std::vector<std::string> names;
    names.reserve(d);
    for (const std::string& h : header) names.emplace_back(trim(h));

    for (std::size_t r = 0; r < n; ++r) {
        const std::vector<std::string> fields = split_fields(lines[r + 1]);
        if (fields.size() != d)
            throw invalid_input(data_path + ": row " + std::to_string(r + 2) + " has " +
                                std::to_string(fields.size()) + " fields, expected " +
                                std::to_string(d));
        for (std::size_t c = 0; c < d; ++c)
            values(r, c) = parse_cell(fields[c], data_path, r + 2, c + 1);
    }

    const std::vector<std::string> label_lines = read_lines(labels_path);
    if (label_lines.size() != n)
        throw invalid_input(labels_path + ": " + std::to_string(label_lines.size()) +
                            " labels for " + std::to_string(n) + " data rows");
    std::vector<int> labels(n);
    for (std::size_t r = 0; r < n; ++r) labels[r] = map.lookup(label_lines[r]);

    return LabeledMatrix::create(std::move(values), std::move(labels), std::move(names));
}

void append_number(std::string& out, double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    out.append(buf, res.ptr);
}

void write_csv(const std::string& path, const LabeledMatrix& data,
               const std::string& label_column) {
    std::string out;
    out.reserve(data.rows() * (data.cols() + 1) * 12);
    out += label_column;
    for (std::size_t c = 0; c < data.cols(); ++c) {
        out += ',';
        out += data.name_of(c);
    }
    out += '\n';
    for (std::size_t r = 0; r < data.rows(); ++r) {
        out += data.labels[r] == 1 ? "1" : "-1";
        for (std::size_t c = 0; c < data.cols(); ++c) {
            out += ',';
            append_number(out, data.values(r, c));
        }
        out += '\n';
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw invalid_input("cannot write " + path);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw invalid_input("write failed for " + path);
}

}  // namespace sigjeff
