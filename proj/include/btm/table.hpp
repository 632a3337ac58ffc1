#pragma once
// Tagged columnar experiment output. CSV layout: zero or more '#'-prefixed
// metadata lines (the first is "# params: k=v k=v ..."), a header row, then
// numeric rows. Doubles are printed with %.17g so a rerun with identical
// inputs is byte-identical.

#include <initializer_list>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace btm {

std::string format_double(double x);

class ResultTable {
  public:
    ResultTable() = default;
    explicit ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void set_param(const std::string& key, const std::string& value);
    void set_param(const std::string& key, double value);
    void set_param(const std::string& key, uint64_t value);
    const std::string* find_param(const std::string& key) const;

    void add_row(std::initializer_list<double> values);
    void add_row(const std::vector<double>& values);

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<double>>& rows() const { return rows_; }
    const std::vector<std::pair<std::string, std::string>>& params() const { return params_; }

    std::size_t column_index(const std::string& name) const;  // throws parameter_error
    std::vector<double> column(const std::string& name) const;

    void write_csv(std::ostream& out) const;
    void write_csv_file(const std::string& path) const;
    static ResultTable read_csv(std::istream& in);
    static ResultTable read_csv_file(const std::string& path);

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
    std::vector<std::pair<std::string, std::string>> params_;
};

}  // namespace btm
