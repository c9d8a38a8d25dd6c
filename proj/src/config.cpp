// SPDX-License-Identifier: Apache-2.0
//
// sixdma - simulation and pose optimization for six-dimensional movable
// antenna (6DMA) base stations
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "sixdma/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sixdma
{

namespace
{

std::string trim(const std::string &s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_words(const std::string &s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string word;
    while (in >> word)
        out.push_back(word);
    return out;
}

double parse_real(const std::string &key, const std::string &value)
{
    const std::string v = trim(value);
    if (v == "inf")
        return std::numeric_limits<double>::infinity();
    errno = 0;
    char *end = nullptr;
    const double parsed = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || v.empty() || errno == ERANGE)
        throw std::invalid_argument("config key '" + key + "': expected a real number, got '" + value + "'");
    return parsed;
}

} // namespace

ConfigMap ConfigMap::parse_text(const std::string &text, const std::string &origin)
{
    ConfigMap map;
    map.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[')
        {
            if (line.back() != ']' || line.size() < 3)
                throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                            ": malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                                        ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument(origin + ":" + std::to_string(line_no) + ": empty key");
        if (section.empty())
            throw std::invalid_argument(origin + ":" + std::to_string(line_no) + ": key '" + key +
                                        "' appears before any [section]");
        const std::string full = section + "." + key;
        if (map.values_.count(full) != 0)
            throw std::invalid_argument(origin + ":" + std::to_string(line_no) + ": duplicate key '" +
                                        full + "'");
        map.values_[full] = value;
    }
    return map;
}

ConfigMap ConfigMap::parse_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str(), path);
}

bool ConfigMap::contains(const std::string &key) const
{
    return values_.count(key) != 0;
}

void ConfigMap::set(const std::string &key, const std::string &value)
{
    if (key.find('.') == std::string::npos)
        throw std::invalid_argument("config override key '" + key + "' must be section.key");
    values_[key] = value;
}

const std::string *ConfigMap::find(const std::string &key) const
{
    consumed_.insert(key);
    const auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
}

std::string ConfigMap::get_string(const std::string &key, const std::string &fallback) const
{
    const std::string *v = find(key);
    return v == nullptr ? fallback : trim(*v);
}

double ConfigMap::get_real(const std::string &key, double fallback) const
{
    const std::string *v = find(key);
    return v == nullptr ? fallback : parse_real(key, *v);
}

std::int64_t ConfigMap::get_int(const std::string &key, std::int64_t fallback) const
{
    const std::string *v = find(key);
    if (v == nullptr)
        return fallback;
    const double real = parse_real(key, *v);
    const auto rounded = static_cast<std::int64_t>(real);
    if (static_cast<double>(rounded) != real)
        throw std::invalid_argument("config key '" + key + "': expected an integer, got '" + *v + "'");
    return rounded;
}

std::uint64_t ConfigMap::get_uint(const std::string &key, std::uint64_t fallback) const
{
    const std::string *v = find(key);
    if (v == nullptr)
        return fallback;
    const std::string t = trim(*v);
    if (t.empty() || t.front() == '-')
        throw std::invalid_argument("config key '" + key + "': expected a nonnegative integer, got '" +
                                    *v + "'");
    errno = 0;
    char *end = nullptr;
    const std::uint64_t parsed = std::strtoull(t.c_str(), &end, 10);
    if (end != t.c_str() + t.size() || errno == ERANGE)
        throw std::invalid_argument("config key '" + key + "': expected a nonnegative integer, got '" +
                                    *v + "'");
    return parsed;
}

std::vector<double> ConfigMap::get_reals(const std::string &key, const std::vector<double> &fallback) const
{
    const std::string *v = find(key);
    if (v == nullptr)
        return fallback;
    std::vector<double> out;
    for (const std::string &word : split_words(*v))
        out.push_back(parse_real(key, word));
    return out;
}

std::vector<std::string> ConfigMap::get_words(const std::string &key,
                                              const std::vector<std::string> &fallback) const
{
    const std::string *v = find(key);
    return v == nullptr ? fallback : split_words(*v);
}

std::vector<std::vector<double>> ConfigMap::get_real_groups(
    const std::string &key, const std::vector<std::vector<double>> &fallback) const
{
    const std::string *v = find(key);
    if (v == nullptr)
        return fallback;
    std::vector<std::vector<double>> out;
    std::string group;
    std::istringstream in(*v);
    while (std::getline(in, group, ';'))
    {
        std::vector<double> values;
        for (const std::string &word : split_words(group))
            values.push_back(parse_real(key, word));
        if (!values.empty())
            out.push_back(values);
    }
    return out;
}

void ConfigMap::require_all_consumed() const
{
    for (const auto &[key, value] : values_)
        if (consumed_.count(key) == 0)
            throw std::invalid_argument(origin_ + ": unknown config key '" + key + "'");
}

} // namespace sixdma
