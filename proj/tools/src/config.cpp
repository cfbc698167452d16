#include "config.hpp"

#include "hwm/error.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>

#include <charconv>
#include <sstream>

namespace hwm::cli {

namespace pt = boost::property_tree;

namespace {

std::string where(const std::string& section, const std::string& key) { return "[" + section + "] " + key; }

double parse_real(const std::string& s, const std::string& label) {
    const std::string t = boost::trim_copy(s);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || end != t.data() + t.size() || t.empty())
        throw DomainError(label + ": expected a number, got '" + s + "'");
    return v;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    boost::split(parts, s, boost::is_any_of(","));
    for (auto& p : parts) boost::trim(p);
    if (parts.size() == 1 && parts.front().empty()) parts.clear();
    return parts;
}

} // namespace

Config Config::load(const std::filesystem::path& path) {
    pt::ptree tree;
    try {
        pt::read_ini(path.string(), tree);
    } catch (const pt::ini_parser_error& e) {
        throw DomainError("cannot read config: " + std::string(e.what()));
    }
    return Config(std::move(tree));
}

Config Config::parse(const std::string& text) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw DomainError("cannot parse config: " + std::string(e.what()));
    }
    return Config(std::move(tree));
}

void Config::validate(const Schema& schema) const {
    for (const auto& [section, body] : tree_) {
        if (body.empty()) throw DomainError("config key '" + section + "' must live inside a section");
        const auto it = schema.find(section);
        if (it == schema.end()) throw DomainError("unknown config section [" + section + "]");
        for (const auto& [key, value] : body)
            if (!it->second.contains(key)) throw DomainError("unknown config key " + where(section, key));
    }
}

std::optional<std::string> Config::raw(const std::string& section, const std::string& key) const {
    const auto sec = tree_.get_child_optional(section);
    if (!sec) return std::nullopt;
    const auto v = sec->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
    if (!v) return std::nullopt;
    return boost::trim_copy(*v);
}

bool Config::has(const std::string& section, const std::string& key) const { return raw(section, key).has_value(); }

std::string Config::text(const std::string& section, const std::string& key, const std::string& fallback) const {
    return raw(section, key).value_or(fallback);
}

double Config::real(const std::string& section, const std::string& key, double fallback) const {
    const auto v = raw(section, key);
    return v ? parse_real(*v, where(section, key)) : fallback;
}

std::optional<double> Config::optional_real(const std::string& section, const std::string& key) const {
    const auto v = raw(section, key);
    if (!v) return std::nullopt;
    return parse_real(*v, where(section, key));
}

long Config::integer(const std::string& section, const std::string& key, long fallback) const {
    const auto v = raw(section, key);
    if (!v) return fallback;
    long out = 0;
    const auto [end, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc{} || end != v->data() + v->size() || v->empty())
        throw DomainError(where(section, key) + ": expected an integer, got '" + *v + "'");
    return out;
}

std::vector<double> Config::reals(const std::string& section, const std::string& key,
                                  std::vector<double> fallback) const {
    const auto v = raw(section, key);
    if (!v) return fallback;
    std::vector<double> out;
    for (const auto& part : split_list(*v)) out.push_back(parse_real(part, where(section, key)));
    return out;
}

std::vector<std::string> Config::words(const std::string& section, const std::string& key,
                                       std::vector<std::string> fallback) const {
    const auto v = raw(section, key);
    return v ? split_list(*v) : fallback;
}

std::map<std::string, std::map<std::string, std::string>> Config::echo() const {
    std::map<std::string, std::map<std::string, std::string>> out;
    for (const auto& [section, body] : tree_)
        for (const auto& [key, value] : body) out[section][key] = boost::trim_copy(value.data());
    return out;
}

} // namespace hwm::cli
