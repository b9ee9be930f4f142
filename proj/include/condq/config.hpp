// Copyright 2026 The condq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "condq/optimize.hpp"
#include "condq/sweep.hpp"

namespace condq::explorer {

/// `key = value` lines; `#` starts a comment. A key may repeat (axis).
/// Values are kept as text until a spec is built from them.
class KeyValueConfig {
  public:
    /// Throws SpecError on malformed lines or unknown keys.
    static KeyValueConfig parse(std::string_view text, std::string_view origin = "config");
    /// Throws IoError when the file cannot be read.
    static KeyValueConfig load(const std::filesystem::path &path);

    void add(std::string key, std::string value);
    /// Every key present in `over` replaces all of its entries here.
    void merge(const KeyValueConfig &over);

    bool has(std::string_view key) const;
    std::optional<std::string> get(std::string_view key) const;  // last entry
    std::vector<std::string> get_all(std::string_view key) const;
    const std::vector<std::pair<std::string, std::string>> &entries() const { return entries_; }

  private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

/// Numbers may also be written as `pi`, `pi/N` or `K*pi` (K, N decimal).
double parse_number(std::string_view text, std::string_view key);

/// Shipped figure presets: fig2, fig3, fig4-eta100, fig4-eta50.
std::vector<std::string> preset_names();
std::optional<std::string_view> preset_text(std::string_view name);
/// Throws SpecError for an unknown preset.
KeyValueConfig preset_config(std::string_view name);

SweepSpec sweep_spec_from(const KeyValueConfig &config);
OptimizeSpec optimize_spec_from(const KeyValueConfig &config);

}  // namespace condq::explorer
