#include "artifacts.hpp"

#include "hwm/error.hpp"

#include <openssl/evp.h>

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <memory>
#include <sstream>

namespace hwm::cli {

namespace fs = std::filesystem;

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return buf.data();
}

std::string sha256_hex(const std::string& bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1)
        throw std::runtime_error("SHA-256 computation failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

void CsvTable::add_row(const std::vector<double>& row) {
    if (row.size() != header_.size()) throw std::logic_error("CSV row width does not match the header");
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) body_ += ',';
        body_ += format_real(row[i]);
    }
    body_ += '\n';
}

std::string CsvTable::str() const {
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (i) out += ',';
        out += header_[i];
    }
    return out + '\n' + body_;
}

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

OutputDir::OutputDir(fs::path dir) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
    lock_ = dir_ / lock_name;
    const int fd = ::open(lock_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0)
        throw GuardError("output directory " + dir_.string() + " is locked by another run (remove " +
                         lock_.string() + " if it is stale)");
    const std::string pid = std::to_string(::getpid()) + "\n";
    [[maybe_unused]] const auto written = ::write(fd, pid.data(), pid.size());
    ::close(fd);
    locked_ = true;
    clear_previous_run();
}

OutputDir::~OutputDir() {
    if (locked_) {
        std::error_code ec;
        fs::remove(lock_, ec);
    }
}

void OutputDir::clear_previous_run() {
    const fs::path manifest = dir_ / manifest_name;
    if (!fs::exists(manifest)) return;
    try {
        const auto doc = nlohmann::json::parse(read_file(manifest));
        for (const auto& f : doc.at("files")) {
            const fs::path p = dir_ / f.at("path").get<std::string>();
            // Only names inside the directory are removed.
            if (p.lexically_normal().parent_path() == dir_.lexically_normal()) fs::remove(p);
        }
    } catch (const nlohmann::json::exception&) {
        // An unreadable manifest is overwritten at the end of the run.
    }
    fs::remove(manifest);
}

void OutputDir::write(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + (dir_ / name).string());
}

void OutputDir::write_json(const std::string& name, const nlohmann::ordered_json& doc) {
    write(name, doc.dump(2) + "\n");
}

nlohmann::ordered_json OutputDir::file_listing() const {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir_)) {
        if (!e.is_regular_file()) continue;
        const auto name = e.path().filename().string();
        if (name == lock_name || name == manifest_name) continue;
        files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    auto list = nlohmann::ordered_json::array();
    for (const auto& p : files) {
        const std::string bytes = read_file(p);
        list.push_back({{"path", p.filename().string()}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}});
    }
    return list;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::array<char, 32> buf{};
    std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf.data();
}

} // namespace hwm::cli
