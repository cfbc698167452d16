#pragma once

#include <boost/property_tree/ptree.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hwm::cli {

/// Allowed keys per section for one command.
using Schema = std::map<std::string, std::set<std::string>>;

/// INI file with sections. Validation against a schema happens once, up
/// front; typed getters throw DomainError with the offending key on a bad
/// value.
class Config {
public:
    static Config load(const std::filesystem::path& path);
    static Config parse(const std::string& text);

    void validate(const Schema& schema) const;

    bool has(const std::string& section, const std::string& key) const;
    std::string text(const std::string& section, const std::string& key, const std::string& fallback) const;
    double real(const std::string& section, const std::string& key, double fallback) const;
    long integer(const std::string& section, const std::string& key, long fallback) const;
    std::optional<double> optional_real(const std::string& section, const std::string& key) const;
    std::vector<double> reals(const std::string& section, const std::string& key, std::vector<double> fallback) const;
    std::vector<std::string> words(const std::string& section, const std::string& key,
                                   std::vector<std::string> fallback) const;

    /// section -> key -> raw value, for the manifest echo.
    std::map<std::string, std::map<std::string, std::string>> echo() const;

private:
    explicit Config(boost::property_tree::ptree tree) : tree_(std::move(tree)) {}
    std::optional<std::string> raw(const std::string& section, const std::string& key) const;

    boost::property_tree::ptree tree_;
};

} // namespace hwm::cli
