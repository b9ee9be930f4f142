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
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

#include "condq/sweep.hpp"

namespace condq::explorer {

/// Destination could not be written (exit code 3 in the CLI).
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class Format { csv, json };
Format parse_format(std::string_view name);

/// Scientific notation with 17 significant digits; parses back to the same double.
std::string format_number(double v);

/// Header: axis names then value columns; one row per grid point.
void write_csv(const SweepResult &result, std::ostream &os);

/// {"spec": ..., "records": [{"params": {...}, "values": {...}}], "meta": {...}}.
/// Runtime is not emitted: identical specs give identical bytes.
nlohmann::ordered_json to_json(const SweepResult &result);
void write_json(const SweepResult &result, std::ostream &os);

/// Writes to `destination`; "-" means standard output. Throws IoError.
void emit(const SweepResult &result, Format format, const std::filesystem::path &destination);

}  // namespace condq::explorer
