#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mastudy/error.hpp"

namespace mastudy::csv {

/// Splits one record. Double quotes may wrap a field; "" inside quotes is a
/// literal quote. Records never span lines.
inline std::vector<std::string> split_record(std::string_view line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

class Table {
public:
    Table() = default;
    Table(std::string source, std::vector<std::string> header,
          std::vector<std::vector<std::string>> rows)
        : source_(std::move(source)), header_(std::move(header)), rows_(std::move(rows)) {
        for (std::size_t i = 0; i < header_.size(); ++i) index_[header_[i]] = i;
    }

    const std::string& source() const { return source_; }
    const std::vector<std::string>& header() const { return header_; }
    std::size_t size() const { return rows_.size(); }
    bool has(const std::string& column) const { return index_.contains(column); }

    /// Throws a Parse error naming the first missing column.
    void require(std::initializer_list<std::string_view> columns) const {
        for (auto c : columns)
            if (!has(std::string(c)))
                fail(ErrorKind::Parse, source_ + ": missing required column '" + std::string(c) + "'");
    }

    const std::string& cell(std::size_t row, const std::string& column) const {
        const auto it = index_.find(column);
        if (it == index_.end()) fail(ErrorKind::Parse, source_ + ": missing column '" + column + "'");
        return rows_[row][it->second];
    }

    std::string where(std::size_t row) const { return source_ + " line " + std::to_string(row + 2); }

private:
    std::string source_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

inline Table read(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) fail(ErrorKind::Parse, source + ": empty file, header row is mandatory");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    std::vector<std::string> header;
    for (auto& h : split_record(line)) header.push_back(trim(h));
    for (const auto& h : header)
        if (h.empty()) fail(ErrorKind::Parse, source + ": empty column name in header");
    std::vector<std::vector<std::string>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_record(line);
        if (fields.size() != header.size())
            fail(ErrorKind::Parse, source + " line " + std::to_string(line_no) + ": expected " +
                                       std::to_string(header.size()) + " fields, got " +
                                       std::to_string(fields.size()));
        for (auto& f : fields) f = trim(f);
        rows.push_back(std::move(fields));
    }
    return Table(source, std::move(header), std::move(rows));
}

inline Table read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Parse, "cannot open '" + path + "'");
    return read(in, path);
}

inline double to_double(const std::string& text, const std::string& where) {
    double value = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value))
        fail(ErrorKind::Parse, where + ": not a number '" + text + "'");
    return value;
}

inline std::optional<double> to_optional_double(const std::string& text, const std::string& where) {
    if (text.empty() || text == "NA" || text == "NaN" || text == "nan") return std::nullopt;
    return to_double(text, where);
}

inline long long to_int(const std::string& text, const std::string& where) {
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        fail(ErrorKind::Parse, where + ": not an integer '" + text + "'");
    return value;
}

inline bool to_bool(const std::string& text, const std::string& where) {
    std::string t;
    for (char c : text) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (t == "1" || t == "true" || t == "yes" || t == "y") return true;
    if (t == "0" || t == "false" || t == "no" || t == "n") return false;
    fail(ErrorKind::Parse, where + ": not a boolean '" + text + "'");
}

inline std::string escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

/// Row-oriented writer into a string buffer; callers persist the buffer.
class Writer {
public:
    explicit Writer(std::initializer_list<std::string> header) { row(std::vector<std::string>(header)); }
    explicit Writer(const std::vector<std::string>& header) { row(header); }

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << escape(fields[i]);
        }
        out_ << '\n';
        ++rows_;
    }

    std::string str() const { return out_.str(); }
    std::size_t data_rows() const { return rows_ - 1; }

private:
    std::ostringstream out_;
    std::size_t rows_ = 0;
};

} // namespace mastudy::csv
