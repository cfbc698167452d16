#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hwm::cli {

/// 17 significant digits; "nan" / "inf" / "-inf" for non-finite values.
std::string format_real(double v);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

/// Rows of numbers behind a fixed header.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
    void add_row(const std::vector<double>& row);
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::string body_;
};

/// Output directory owned by one run. Holds an exclusive lock file for its
/// lifetime and remembers every artifact written through it.
class OutputDir {
public:
    /// Throws GuardError when another run holds the lock.
    explicit OutputDir(std::filesystem::path dir);
    ~OutputDir();
    OutputDir(const OutputDir&) = delete;
    OutputDir& operator=(const OutputDir&) = delete;

    const std::filesystem::path& path() const { return dir_; }

    void write(const std::string& name, const std::string& content);
    void write_json(const std::string& name, const nlohmann::ordered_json& doc);

    /// Hash entries for every regular file in the directory except the
    /// manifest and the lock, sorted by name.
    nlohmann::ordered_json file_listing() const;

    static constexpr const char* lock_name = ".hwm.lock";
    static constexpr const char* manifest_name = "manifest.json";

private:
    void clear_previous_run();

    std::filesystem::path dir_;
    std::filesystem::path lock_;
    bool locked_ = false;
};

/// Seconds since the epoch as an ISO-8601 UTC string.
std::string utc_timestamp();

} // namespace hwm::cli
