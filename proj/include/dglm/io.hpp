#pragma once

#include <Eigen/Dense>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "dglm/types.hpp"

namespace dglm::io {

/// One input row: an opaque time label, the response (NaN when the `y`
/// field is empty or NA), and the optional per-row count column.
struct SeriesRow {
    std::string label;
    double y{0.0};
    bool missing{false};
    double n{0.0};
};

struct Series {
    std::vector<SeriesRow> rows;
    bool has_n_column{false};
};

/// Reads a delimiter-separated series with header `t,y` or `t,y,n`.
/// The delimiter is a comma unless the header contains a tab. Parse errors
/// carry `source:line`.
Series read_series(std::istream& in, const std::string& source);
Series read_series_file(const std::string& path);

/// A fully numeric table with a named header, same dialect as the series
/// format. Used for survival inputs.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

Table read_table(std::istream& in, const std::string& source);
Table read_table_file(const std::string& path);

/// Flat `key = value` configuration. `#` starts a comment; duplicate keys
/// are rejected. Key validation is the caller's job (only it knows which
/// keys its command accepts).
std::map<std::string, std::string> read_config(std::istream& in,
                                               const std::string& source);
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Strict scalar parsers; `what` names the offending field in errors.
double parse_double(const std::string& text, const std::string& what);
long long parse_int(const std::string& text, const std::string& what);

/// Comma-separated number list.
std::vector<double> parse_number_list(const std::string& text,
                                      const std::string& what);

/// Delta grid: either a comma list or `a:b[:step]` (step defaults to 0.05);
/// the endpoint b always appears even when the step does not land on it.
std::vector<double> parse_grid(const std::string& text,
                               const std::string& what);

/// Vector as a comma list; matrix as semicolon-separated rows of comma
/// lists, or a bare comma list meaning a diagonal matrix.
Eigen::VectorXd parse_eigen_vector(const std::string& text,
                                   const std::string& what);
Eigen::MatrixXd parse_eigen_matrix(const std::string& text,
                                   const std::string& what);

/// Canonical number formatting for all emitted records: shortest `%.17g`
/// form (round-trip exact), `NA` for NaN. Reruns of the same command are
/// byte-identical because every emitted value flows through here.
std::string fmt(double x);
std::string fmt_vector(const Eigen::VectorXd& v);

}  // namespace dglm::io
