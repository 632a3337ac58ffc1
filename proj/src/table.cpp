#include "btm/table.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "btm/errors.hpp"

namespace btm {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void ResultTable::set_param(const std::string& key, const std::string& value) {
    for (auto& kv : params_) {
        if (kv.first == key) {
            kv.second = value;
            return;
        }
    }
    params_.emplace_back(key, value);
}

void ResultTable::set_param(const std::string& key, double value) {
    set_param(key, format_double(value));
}

void ResultTable::set_param(const std::string& key, uint64_t value) {
    set_param(key, std::to_string(value));
}

const std::string* ResultTable::find_param(const std::string& key) const {
    for (const auto& kv : params_)
        if (kv.first == key) return &kv.second;
    return nullptr;
}

void ResultTable::add_row(std::initializer_list<double> values) {
    add_row(std::vector<double>(values));
}

void ResultTable::add_row(const std::vector<double>& values) {
    if (values.size() != columns_.size())
        throw parameter_error("ResultTable: row width " + std::to_string(values.size()) +
                              " does not match " + std::to_string(columns_.size()) + " columns");
    rows_.push_back(values);
}

std::size_t ResultTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i] == name) return i;
    throw parameter_error("ResultTable: no column named '" + name + "'");
}

std::vector<double> ResultTable::column(const std::string& name) const {
    std::size_t idx = column_index(name);
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const auto& row : rows_) out.push_back(row[idx]);
    return out;
}

void ResultTable::write_csv(std::ostream& out) const {
    if (!params_.empty()) {
        out << "# params:";
        for (const auto& kv : params_) out << ' ' << kv.first << '=' << kv.second;
        out << '\n';
    }
    for (std::size_t i = 0; i < columns_.size(); ++i)
        out << (i ? "," : "") << columns_[i];
    out << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_double(row[i]);
        out << '\n';
    }
}

void ResultTable::write_csv_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    write_csv(out);
    if (!out) throw io_error("write failed for '" + path + "'");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

ResultTable ResultTable::read_csv(std::istream& in) {
    ResultTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            const std::string tag = "# params:";
            if (line.rfind(tag, 0) == 0) {
                std::istringstream ps(line.substr(tag.size()));
                std::string kv;
                while (ps >> kv) {
                    auto eq = kv.find('=');
                    if (eq != std::string::npos)
                        table.set_param(kv.substr(0, eq), kv.substr(eq + 1));
                }
            }
            continue;
        }
        if (!have_header) {
            table.columns_ = split_csv_line(line);
            have_header = true;
            continue;
        }
        auto fields = split_csv_line(line);
        if (fields.size() != table.columns_.size())
            throw io_error("CSV row has " + std::to_string(fields.size()) + " fields, expected " +
                           std::to_string(table.columns_.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) {
            char* end = nullptr;
            double v = std::strtod(f.c_str(), &end);
            if (end == f.c_str() || *end != '\0')
                throw io_error("CSV cell '" + f + "' is not numeric");
            row.push_back(v);
        }
        table.rows_.push_back(std::move(row));
    }
    if (!have_header) throw io_error("CSV has no header row");
    return table;
}

ResultTable ResultTable::read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "' for reading");
    return read_csv(in);
}

}  // namespace btm
