#include "rankone/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>

namespace rankone {

namespace {

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text)
{
    text = trim(text);
    T    value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ConfigError("invalid value '" + std::string(text) + "' for " + std::string(key));
    return value;
}

template <typename T>
T parse_positive(std::string_view key, std::string_view text)
{
    const T value = parse_number<T>(key, text);
    if (!(value > T(0)))
        throw ConfigError(std::string(key) + " must be positive, got '" + std::string(trim(text)) + "'");
    return value;
}

} // namespace

void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value)
{
    key   = trim(key);
    value = trim(value);
    try {
        if (key == "ratios") {
            config.ratios.clear();
            std::size_t pos = 0;
            while (pos <= value.size()) {
                auto comma = value.find(',', pos);
                auto item  = value.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
                config.ratios.push_back(parse_positive<double>(key, item));
                if (comma == std::string_view::npos)
                    break;
                pos = comma + 1;
            }
        } else if (key == "m") {
            config.rows = parse_positive<Index>(key, value);
        } else if (key == "n") {
            config.cols = parse_positive<Index>(key, value);
        } else if (key == "trials") {
            config.trials = parse_positive<int>(key, value);
        } else if (key == "variant") {
            config.variant = parse_variant(value);
        } else if (key == "start_policy") {
            config.start_policy = parse_start_policy(value);
        } else if (key == "k") {
            config.k = parse_positive<int>(key, value);
        } else if (key == "field") {
            config.field = parse_field(value);
        } else if (key == "seed") {
            config.master_seed = parse_number<std::uint64_t>(key, value);
        } else if (key == "output") {
            config.output_path = std::string(value);
        } else {
            throw ConfigError("unknown configuration key '" + std::string(key) + "'");
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

void read_config(std::istream& in, ExperimentConfig& config, bool& seed_seen)
{
    std::string line;
    int         lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view s = line;
        if (auto hash = s.find('#'); hash != std::string_view::npos)
            s = s.substr(0, hash);
        s = trim(s);
        if (s.empty())
            continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        try {
            apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
        if (trim(s.substr(0, eq)) == "seed")
            seed_seen = true;
    }
}

ExperimentConfig load_config(const std::filesystem::path& path, bool& seed_seen)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file " + path.string());
    ExperimentConfig config;
    read_config(in, config, seed_seen);
    return config;
}

} // namespace rankone
