#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace psalink {

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flat view of an INI-style config: "[section]" headers, "key = value" lines,
// comments with '#' or ';'. Keys are addressed as "section.key".
class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long get_long(const std::string& key) const;
    long get_long(const std::string& key, long fallback) const;
    std::vector<double> get_double_list(const std::string& key) const;

    // FNV-1a over the raw config text; stamped into sweep metadata.
    std::uint64_t content_hash() const { return hash_; }

private:
    std::map<std::string, std::string> values_;
    std::uint64_t hash_ = 0;
};

}  // namespace psalink
