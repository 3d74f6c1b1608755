#ifndef ELLIDYN_RUN_CONFIG_HPP
#define ELLIDYN_RUN_CONFIG_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <ellidyn/types.hpp>

namespace ellidyn
{

// "a+bi", "a-bi", "a", "bi", "i", "-i"; exponents allowed in either part.
// Throws std::invalid_argument on anything else.
Complex parse_complex(std::string_view text);
std::string format_complex(Complex z);

// Comma-separated reals.
std::vector<double> parse_real_list(std::string_view text);

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

// One `key = value` per line; '#' starts a comment. Throws
// std::invalid_argument with the line number on malformed lines.
ConfigEntries parse_config_text(std::string_view text);
ConfigEntries read_config_file(const std::filesystem::path &path);

} // namespace ellidyn

#endif
