#pragma once

#include <filesystem>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>

namespace hmdrec::data {

/// Flat `key = value` text configuration; `#` starts a comment.
class KeyValueConfig {
public:
    static KeyValueConfig parse(std::string_view text);
    static KeyValueConfig load(const std::filesystem::path& path);

    void set(const std::string& key, const std::string& value) { entries_[key] = value; }
    void set(const std::string& key, double value);
    bool contains(const std::string& key) const { return entries_.count(key) != 0; }

    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;

    /// Throws ConfigError naming the first key not in `known`.
    void require_known(std::initializer_list<std::string_view> known) const;

    /// Sorted `key = value` lines.
    std::string to_string() const;
    void save(const std::filesystem::path& path) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

/// Shortest decimal that round-trips the double exactly.
std::string format_double(double v);
/// Strict full-string parse; throws ParseError.
double parse_double(std::string_view text);

}  // namespace hmdrec::data
