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

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace sixdma
{

// Flat view of an INI-style config file: `[section]` headers, `key = value`
// lines, `#` comments. Keys are addressed as "section.key". Every getter
// marks its key consumed; require_all_consumed() then rejects typos and
// unknown keys by name.
class ConfigMap
{
  public:
    static ConfigMap parse_text(const std::string &text, const std::string &origin = "<inline>");
    static ConfigMap parse_file(const std::string &path);

    bool contains(const std::string &key) const;
    // Inserts or replaces a value (command-line overrides).
    void set(const std::string &key, const std::string &value);

    std::string get_string(const std::string &key, const std::string &fallback) const;
    double get_real(const std::string &key, double fallback) const;
    std::int64_t get_int(const std::string &key, std::int64_t fallback) const;
    std::uint64_t get_uint(const std::string &key, std::uint64_t fallback) const;
    // Whitespace-separated list of reals.
    std::vector<double> get_reals(const std::string &key, const std::vector<double> &fallback) const;
    // Whitespace-separated list of words.
    std::vector<std::string> get_words(const std::string &key,
                                       const std::vector<std::string> &fallback) const;
    // Semicolon-separated groups, each a whitespace-separated list of reals.
    std::vector<std::vector<double>> get_real_groups(const std::string &key,
                                                     const std::vector<std::vector<double>> &fallback) const;

    // Throws naming the first present key that no getter asked for.
    void require_all_consumed() const;

  private:
    std::string origin_;
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> consumed_;

    const std::string *find(const std::string &key) const;
};

} // namespace sixdma
