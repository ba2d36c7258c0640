#include "dglm/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace dglm::io {

namespace {

std::string trim(const std::string& text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin])))
        ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1])))
        --end;
    return text.substr(begin, end - begin);
}

std::string lower(std::string text) {
    std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return text;
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, delim)) fields.push_back(field);
    if (!line.empty() && line.back() == delim) fields.emplace_back();
    return fields;
}

bool is_missing_token(const std::string& token) {
    const std::string t = lower(trim(token));
    return t.empty() || t == "na" || t == "nan";
}

[[noreturn]] void fail_at(const std::string& source, std::size_t line,
                          const std::string& message) {
    throw data_error(source + ":" + std::to_string(line) + ": " + message);
}

struct LineReader {
    std::istream& in;
    std::string source;
    std::size_t line_no{0};

    bool next(std::string& out) {
        if (!std::getline(in, out)) return false;
        ++line_no;
        if (!out.empty() && out.back() == '\r') out.pop_back();
        return true;
    }
};

char detect_delimiter(const std::string& header) {
    return header.find('\t') != std::string::npos ? '\t' : ',';
}

}  // namespace

Series read_series(std::istream& in, const std::string& source) {
    LineReader reader{in, source};
    std::string line;
    if (!reader.next(line)) throw data_error(source + ": empty input");
    const char delim = detect_delimiter(line);
    const auto header = split(line, delim);
    std::vector<std::string> names;
    names.reserve(header.size());
    for (const auto& field : header) names.push_back(lower(trim(field)));

    Series series;
    if (names.size() == 2 && names[0] == "t" && names[1] == "y") {
        series.has_n_column = false;
    } else if (names.size() == 3 && names[0] == "t" && names[1] == "y" &&
               names[2] == "n") {
        series.has_n_column = true;
    } else {
        fail_at(source, reader.line_no, "expected header 't,y' or 't,y,n'");
    }

    while (reader.next(line)) {
        if (trim(line).empty()) continue;
        const auto fields = split(line, delim);
        const std::size_t want = series.has_n_column ? 3 : 2;
        if (fields.size() != want)
            fail_at(source, reader.line_no,
                    "expected " + std::to_string(want) + " fields, got " +
                        std::to_string(fields.size()));
        SeriesRow row;
        row.label = trim(fields[0]);
        if (row.label.empty())
            fail_at(source, reader.line_no, "empty time label");
        if (is_missing_token(fields[1])) {
            row.missing = true;
            row.y = std::numeric_limits<double>::quiet_NaN();
        } else {
            try {
                row.y = parse_double(trim(fields[1]), "y");
            } catch (const std::exception& e) {
                fail_at(source, reader.line_no, e.what());
            }
        }
        if (series.has_n_column) {
            try {
                row.n = parse_double(trim(fields[2]), "n");
            } catch (const std::exception& e) {
                fail_at(source, reader.line_no, e.what());
            }
        }
        series.rows.push_back(std::move(row));
    }
    if (series.rows.empty()) throw data_error(source + ": no data rows");
    return series;
}

Series read_series_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open '" + path + "'");
    return read_series(in, path);
}

Table read_table(std::istream& in, const std::string& source) {
    LineReader reader{in, source};
    std::string line;
    if (!reader.next(line)) throw data_error(source + ": empty input");
    const char delim = detect_delimiter(line);
    Table table;
    for (const auto& field : split(line, delim)) {
        const std::string name = lower(trim(field));
        if (name.empty()) fail_at(source, reader.line_no, "empty column name");
        table.columns.push_back(name);
    }

    while (reader.next(line)) {
        if (trim(line).empty()) continue;
        const auto fields = split(line, delim);
        if (fields.size() != table.columns.size())
            fail_at(source, reader.line_no,
                    "expected " + std::to_string(table.columns.size()) +
                        " fields, got " + std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (std::size_t i = 0; i < fields.size(); ++i) {
            try {
                row.push_back(parse_double(trim(fields[i]), table.columns[i]));
            } catch (const std::exception& e) {
                fail_at(source, reader.line_no, e.what());
            }
        }
        table.rows.push_back(std::move(row));
    }
    if (table.rows.empty()) throw data_error(source + ": no data rows");
    return table;
}

Table read_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open '" + path + "'");
    return read_table(in, path);
}

std::map<std::string, std::string> read_config(std::istream& in,
                                               const std::string& source) {
    std::map<std::string, std::string> config;
    LineReader reader{in, source};
    std::string line;
    while (reader.next(line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw config_error(source + ":" + std::to_string(reader.line_no) +
                               ": expected 'key = value'");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty())
            throw config_error(source + ":" + std::to_string(reader.line_no) +
                               ": empty key");
        if (value.empty())
            throw config_error(source + ":" + std::to_string(reader.line_no) +
                               ": empty value for '" + key + "'");
        if (!config.emplace(key, value).second)
            throw config_error(source + ":" + std::to_string(reader.line_no) +
                               ": duplicate key '" + key + "'");
    }
    return config;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config '" + path + "'");
    return read_config(in, path);
}

double parse_double(const std::string& text, const std::string& what) {
    const std::string body = trim(text);
    if (body.empty()) throw data_error(what + ": empty number");
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(body, &used);
    } catch (const std::exception&) {
        throw data_error(what + ": not a number: '" + body + "'");
    }
    if (used != body.size())
        throw data_error(what + ": trailing characters in '" + body + "'");
    return value;
}

long long parse_int(const std::string& text, const std::string& what) {
    const std::string body = trim(text);
    if (body.empty()) throw data_error(what + ": empty integer");
    std::size_t used = 0;
    long long value = 0;
    try {
        value = std::stoll(body, &used);
    } catch (const std::exception&) {
        throw data_error(what + ": not an integer: '" + body + "'");
    }
    if (used != body.size())
        throw data_error(what + ": trailing characters in '" + body + "'");
    return value;
}

std::vector<double> parse_number_list(const std::string& text,
                                      const std::string& what) {
    std::vector<double> values;
    for (const auto& field : split(text, ','))
        values.push_back(parse_double(field, what));
    if (values.empty()) throw data_error(what + ": empty list");
    return values;
}

std::vector<double> parse_grid(const std::string& text,
                               const std::string& what) {
    if (text.find(':') == std::string::npos)
        return parse_number_list(text, what);
    const auto parts = split(text, ':');
    if (parts.size() != 2 && parts.size() != 3)
        throw config_error(what + ": expected 'a:b' or 'a:b:step'");
    const double a = parse_double(parts[0], what);
    const double b = parse_double(parts[1], what);
    const double step = parts.size() == 3 ? parse_double(parts[2], what) : 0.05;
    if (!(step > 0.0)) throw config_error(what + ": step must be positive");
    if (!(b >= a)) throw config_error(what + ": range end below start");
    std::vector<double> values;
    for (double x = a; x <= b + 1e-12; x += step) values.push_back(std::min(x, b));
    if (values.back() < b - 1e-12) values.push_back(b);
    return values;
}

Eigen::VectorXd parse_eigen_vector(const std::string& text,
                                   const std::string& what) {
    const auto values = parse_number_list(text, what);
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = values[i];
    return v;
}

Eigen::MatrixXd parse_eigen_matrix(const std::string& text,
                                   const std::string& what) {
    if (text.find(';') == std::string::npos) {
        // A bare comma list is a diagonal matrix.
        const Eigen::VectorXd diag = parse_eigen_vector(text, what);
        return diag.asDiagonal();
    }
    const auto row_texts = split(text, ';');
    std::vector<Eigen::VectorXd> rows;
    for (const auto& row_text : row_texts) {
        if (trim(row_text).empty()) continue;
        rows.push_back(parse_eigen_vector(row_text, what));
    }
    if (rows.empty()) throw config_error(what + ": empty matrix");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols())
            throw config_error(what + ": ragged matrix rows");
        m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    }
    return m;
}

std::string fmt(double x) {
    if (std::isnan(x)) return "NA";
    char buffer[40];
    if (x == std::floor(x) && std::abs(x) < 1e15) {
        std::snprintf(buffer, sizeof(buffer), "%.0f", x);
        return buffer;
    }
    // Shortest representation that round-trips: try increasing precision.
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buffer, sizeof(buffer), "%.*g", precision, x);
        if (std::stod(buffer) == x) break;
    }
    return buffer;
}

std::string fmt_vector(const Eigen::VectorXd& v) {
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i > 0) out += ';';
        out += fmt(v(i));
    }
    return out;
}

}  // namespace dglm::io
