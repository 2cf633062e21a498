#pragma once

// Flat key=value configuration with optional [section] blocks.
//
//     # comment
//     epsilon = 0.2          <- applies to every command
//     [sweep]
//     model = inertia        <- applies to `sweep` only, overriding the above
//
// Keys outside any section, or inside [common], are shared; keys inside a
// section named after the running command override them. Sections for other
// commands are ignored.

#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stokesdrift {

/// Malformed configuration or command line (exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

inline double parse_double(std::string_view key, const std::string& text) {
    const std::string s = trim(text);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
        throw ConfigError("'" + std::string(key) + "': expected a number, got '" + s + "'");
    return v;
}

inline std::uint64_t parse_uint(std::string_view key, const std::string& text) {
    const std::string s = trim(text);
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || s[0] == '-' || end != s.c_str() + s.size() || errno == ERANGE)
        throw ConfigError("'" + std::string(key) + "': expected a non-negative integer, got '" + s + "'");
    return static_cast<std::uint64_t>(v);
}

class Config {
public:
    Config() = default;
    explicit Config(std::map<std::string, std::string> values) : values_(std::move(values)) {}

    /// Parses `in` for `command`, layering its entries over the current values.
    /// Only keys in `known` are accepted.
    void merge_file(std::istream& in, std::string_view command, const std::set<std::string>& known) {
        std::map<std::string, std::string> shared, specific;
        std::string section;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find_first_of("#;");
            const std::string body = trim(line.substr(0, hash));
            if (body.empty()) continue;
            if (body.front() == '[') {
                if (body.back() != ']')
                    throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
                section = trim(std::string_view(body).substr(1, body.size() - 2));
                continue;
            }
            const auto eq = body.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
            const std::string key = trim(std::string_view(body).substr(0, eq));
            if (!known.contains(key))
                throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
            const std::string value = trim(std::string_view(body).substr(eq + 1));
            if (section.empty() || section == "common")
                shared[key] = value;
            else if (section == command)
                specific[key] = value;
        }
        for (auto& [k, v] : shared) values_[k] = v;
        for (auto& [k, v] : specific) values_[k] = v;
    }

    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
    bool has(const std::string& key) const { return values_.contains(key); }

    const std::string& str(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError("missing configuration key '" + key + "'");
        return it->second;
    }
    double num(const std::string& key) const { return parse_double(key, str(key)); }
    std::uint64_t uint(const std::string& key) const { return parse_uint(key, str(key)); }
    bool flag(const std::string& key) const {
        const std::string& v = str(key);
        if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
        if (v == "off" || v == "false" || v == "no" || v == "0") return false;
        throw ConfigError("'" + key + "': expected on|off, got '" + v + "'");
    }
    std::vector<double> num_list(const std::string& key) const {
        std::vector<double> out;
        const std::string& v = str(key);
        if (trim(v).empty()) return out;
        for (const auto& part : split(v, ',')) out.push_back(parse_double(key, part));
        return out;
    }

    const std::map<std::string, std::string>& entries() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

}  // namespace stokesdrift
