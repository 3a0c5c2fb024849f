#pragma once

#include <cstdio>
#include <fstream>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "graphchain/common.hpp"

namespace graphchain {

/// Doubles are printed with 17 significant digits so emitted values
/// round-trip bit-exactly.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// RFC 4180 field quoting: quote when the field holds a comma, a quote or a
/// line break, doubling embedded quotes.
inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) { row(std::move(header)); }

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) body_ += ',';
            body_ += csv_escape(fields[i]);
        }
        body_ += '\n';
    }

    const std::string& str() const { return body_; }

private:
    std::string body_;
};

/// Little ordered JSON value: keeps insertion order and prints numbers with
/// 17 significant digits, so identical runs emit identical bytes.
class JsonValue {
public:
    using Array = std::vector<JsonValue>;
    using Member = std::pair<std::string, JsonValue>;
    using Object = std::vector<Member>;

    JsonValue() : data_(Object{}) {}
    JsonValue(double x) : data_(x) {}
    JsonValue(int x) : data_(double(x)) {}
    JsonValue(long x) : data_(double(x)) {}
    JsonValue(bool b) : data_(b) {}
    JsonValue(const char* s) : data_(std::string(s)) {}
    JsonValue(std::string s) : data_(std::move(s)) {}
    JsonValue(Array a) : data_(std::move(a)) {}

    static JsonValue object() { return JsonValue(); }
    static JsonValue array(Array a = {}) { return JsonValue(std::move(a)); }

    JsonValue& set(const std::string& key, JsonValue v) {
        std::get<Object>(data_).emplace_back(key, std::move(v));
        return *this;
    }
    void push(JsonValue v) { std::get<Array>(data_).push_back(std::move(v)); }

    static JsonValue numbers(const std::vector<double>& xs) {
        Array a;
        a.reserve(xs.size());
        for (double x : xs) a.emplace_back(x);
        return JsonValue(std::move(a));
    }

    std::string dump(int indent = 0) const {
        std::string out;
        write(out, indent, 0);
        out += '\n';
        return out;
    }

private:
    std::variant<bool, double, std::string, Array, Object> data_;

    static void escape_to(std::string& out, const std::string& s) {
        out += '"';
        for (char ch : s) {
            switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default: out += ch;
            }
        }
        out += '"';
    }

    void write(std::string& out, int indent, int depth) const {
        auto pad = [&](int d) {
            if (indent) {
                out += '\n';
                out.append(std::size_t(indent) * d, ' ');
            }
        };
        if (auto b = std::get_if<bool>(&data_)) {
            out += *b ? "true" : "false";
        } else if (auto x = std::get_if<double>(&data_)) {
            out += format_double(*x);
        } else if (auto s = std::get_if<std::string>(&data_)) {
            escape_to(out, *s);
        } else if (auto a = std::get_if<Array>(&data_)) {
            out += '[';
            for (std::size_t i = 0; i < a->size(); ++i) {
                if (i) out += ',';
                pad(depth + 1);
                (*a)[i].write(out, indent, depth + 1);
            }
            if (!a->empty()) pad(depth);
            out += ']';
        } else if (auto o = std::get_if<Object>(&data_)) {
            out += '{';
            for (std::size_t i = 0; i < o->size(); ++i) {
                if (i) out += ',';
                pad(depth + 1);
                escape_to(out, (*o)[i].first);
                out += indent ? ": " : ":";
                (*o)[i].second.write(out, indent, depth + 1);
            }
            if (!o->empty()) pad(depth);
            out += '}';
        }
    }
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("io-error", "cannot open output file " + path);
    os << content;
    if (!os) throw Error("io-error", "failed writing " + path);
}

} // namespace graphchain
