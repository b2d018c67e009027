#pragma once

#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "poroflow/errors.hpp"

namespace poroflow {

// key=value config text: one pair per line, '#' starts a comment, blank
// lines ignored. List values are comma separated; integer lists accept
// a..b ranges (inclusive).

namespace detail {

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

inline double parse_double(const std::string& s, const std::string& key) {
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse '" + s + "' as a number");
    }
}

inline std::uint64_t parse_u64(const std::string& s, const std::string& key) {
    try {
        // stoull accepts a leading minus and wraps; reject it up front.
        if (s.find('-') != std::string::npos) throw std::invalid_argument(s);
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse '" + s +
                          "' as a non-negative integer");
    }
}

inline std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) out.push_back(trim(item));
    if (!s.empty() && s.back() == ',') out.push_back("");
    return out;
}

}  // namespace detail

class ConfigMap {
public:
    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool has(const std::string& key) const { return values_.count(key) != 0; }

    const std::map<std::string, std::string>& values() const { return values_; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : detail::parse_double(it->second, key);
    }

    std::vector<double> get_double_list(const std::string& key,
                                        std::vector<double> fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        std::vector<double> out;
        for (const std::string& item : detail::split_commas(it->second))
            out.push_back(detail::parse_double(item, key));
        return out;
    }

    /// Comma list of non-negative integers; items may be a..b ranges.
    std::vector<std::uint64_t> get_u64_list(const std::string& key,
                                            std::vector<std::uint64_t> fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        std::vector<std::uint64_t> out;
        for (const std::string& item : detail::split_commas(it->second)) {
            const auto dots = item.find("..");
            if (dots == std::string::npos) {
                out.push_back(detail::parse_u64(item, key));
                continue;
            }
            const std::uint64_t lo = detail::parse_u64(item.substr(0, dots), key);
            const std::uint64_t hi = detail::parse_u64(item.substr(dots + 2), key);
            if (hi < lo)
                throw ConfigError("key '" + key + "': descending range '" + item + "'");
            for (std::uint64_t v = lo; v <= hi; ++v) out.push_back(v);
        }
        return out;
    }

    std::vector<std::string> get_string_list(const std::string& key,
                                             std::vector<std::string> fallback) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        return detail::split_commas(it->second);
    }

private:
    std::map<std::string, std::string> values_;
};

inline ConfigMap parse_config_text(const std::string& text) {
    ConfigMap cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected key=value, got '" + line + "'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        cfg.set(key, value);
    }
    return cfg;
}

inline ConfigMap load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace poroflow
