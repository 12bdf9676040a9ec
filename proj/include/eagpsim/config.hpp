#pragma once

// Flat scenario files: one `section.key = value` per line, `#` starts a
// comment. Keys are checked against a known set so typos fail loudly.

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace eagpsim {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line = 0, std::string key = {})
        : std::runtime_error(format(what, line, key)), line_(line), key_(std::move(key))
    {
    }

    int line() const { return line_; }
    const std::string& key() const { return key_; }

private:
    static std::string format(const std::string& what, int line, const std::string& key)
    {
        std::string s;
        if (line > 0) s += "line " + std::to_string(line) + ": ";
        if (!key.empty()) s += "'" + key + "': ";
        return s + what;
    }

    int line_;
    std::string key_;
};

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

class Config {
public:
    struct Entry {
        std::string value;
        int line = 0;
    };

    static Config parse(const std::string& text, const std::set<std::string>& known = {})
    {
        Config cfg;
        std::istringstream in(text);
        std::string raw;
        int line = 0;
        while (std::getline(in, raw)) {
            ++line;
            if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
            const std::string body = trim(raw);
            if (body.empty()) continue;
            const auto eq = body.find('=');
            if (eq == std::string::npos) throw ConfigError("expected 'section.key = value'", line);
            const std::string key = trim(body.substr(0, eq));
            const std::string value = trim(body.substr(eq + 1));
            if (key.empty() || key.find('.') == std::string::npos || key.front() == '.' || key.back() == '.')
                throw ConfigError("keys must look like section.key", line, key);
            if (!known.empty() && !known.contains(key)) throw ConfigError("unknown key", line, key);
            if (value.empty()) throw ConfigError("missing value", line, key);
            if (cfg.entries_.contains(key)) throw ConfigError("duplicate key", line, key);
            cfg.entries_[key] = {value, line};
        }
        return cfg;
    }

    static Config load(const std::string& path, const std::set<std::string>& known = {})
    {
        std::ifstream f(path);
        if (!f) throw ConfigError("cannot open scenario file '" + path + "'");
        std::stringstream buf;
        buf << f.rdbuf();
        return parse(buf.str(), known);
    }

    bool has(const std::string& key) const { return entries_.contains(key); }
    const std::map<std::string, Entry>& entries() const { return entries_; }

    void set(const std::string& key, std::string value) { entries_[key] = {std::move(value), 0}; }

    std::string get_string(const std::string& key, const std::string& fallback) const
    {
        auto it = entries_.find(key);
        return it == entries_.end() ? fallback : it->second.value;
    }

    double get_double(const std::string& key, double fallback) const
    {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        return to_double(it->second.value, it->second.line, key);
    }

    long long get_int(const std::string& key, long long fallback) const
    {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        const auto& v = it->second.value;
        errno = 0;
        char* end = nullptr;
        const long long x = std::strtoll(v.c_str(), &end, 10);
        if (errno != 0 || end == v.c_str() || *end != '\0')
            throw ConfigError("expected an integer, got '" + v + "'", it->second.line, key);
        return x;
    }

    std::vector<double> get_doubles(const std::string& key) const
    {
        std::vector<double> out;
        auto it = entries_.find(key);
        if (it == entries_.end()) return out;
        for (const auto& item : split_list(it->second.value)) out.push_back(to_double(item, it->second.line, key));
        return out;
    }

    int line_of(const std::string& key) const
    {
        auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

private:
    static double to_double(const std::string& v, int line, const std::string& key)
    {
        errno = 0;
        char* end = nullptr;
        const double x = std::strtod(v.c_str(), &end);
        if (errno != 0 || end == v.c_str() || *end != '\0')
            throw ConfigError("expected a number, got '" + v + "'", line, key);
        return x;
    }

    std::map<std::string, Entry> entries_;
};

}  // namespace eagpsim
