#include <ellidyn/run_config.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <ellidyn/errors.hpp>

namespace ellidyn
{

namespace
{

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_real(std::string_view s, std::string_view whole)
{
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument("cannot parse number in '" + std::string(whole) + "'");
    }
    return v;
}

// A bare sign stands for a unit coefficient.
double parse_coefficient(std::string_view s, std::string_view whole)
{
    if (s.empty() || s == "+") {
        return 1.0;
    }
    if (s == "-") {
        return -1.0;
    }
    return parse_real(s, whole);
}

} // namespace

Complex parse_complex(std::string_view text)
{
    const std::string_view s = trim(text);
    if (s.empty()) {
        throw std::invalid_argument("empty complex number");
    }
    // Position of the sign separating real and imaginary parts, skipping
    // a leading sign and exponent signs.
    std::size_t split = std::string_view::npos;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            if (split != std::string_view::npos) {
                throw std::invalid_argument("ambiguous complex number '" + std::string(s) + "'");
            }
            split = i;
        }
    }
    if (s.back() != 'i') {
        if (split != std::string_view::npos) {
            throw std::invalid_argument("complex number '" + std::string(s) + "' lacks the trailing i");
        }
        return {parse_real(s, s), 0.0};
    }
    const std::string_view body = s.substr(0, s.size() - 1);
    if (body.find('i') != std::string_view::npos) {
        throw std::invalid_argument("ambiguous complex number '" + std::string(s) + "'");
    }
    if (split == std::string_view::npos) {
        return {0.0, parse_coefficient(body, s)};
    }
    return {parse_real(body.substr(0, split), s), parse_coefficient(body.substr(split), s)};
}

std::string format_complex(Complex z)
{
    char buf[80];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

std::vector<double> parse_real_list(std::string_view text)
{
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find(',', start), text.size());
        out.push_back(parse_real(trim(text.substr(start, end - start)), text));
        start = end + 1;
    }
    return out;
}

ConfigEntries parse_config_text(std::string_view text)
{
    ConfigEntries entries;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        ++line_no;
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key or value");
        }
        entries.emplace_back(std::string(key), std::string(value));
    }
    return entries;
}

ConfigEntries read_config_file(const std::filesystem::path &path)
{
    std::ifstream is(path);
    if (!is) {
        throw IoFailure("cannot read config file " + path.string());
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str());
}

} // namespace ellidyn
