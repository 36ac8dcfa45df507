// Copyright 2026 The Cosserat Observer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Config files and CSV/JSON export. Numbers are written with 17 significant
// digits so output is byte-reproducible and re-reads exactly.

#pragma once

#include <string>
#include <vector>

#include "cosserat/harness.hpp"

namespace cosserat {

enum class Format { kCsv, kJson };

// Throws ConfigError unless name is csv or json.
Format parse_format(const std::string& name);
std::string extension(Format format);

// Config JSON with units in field names. Missing fields keep the defaults of
// the named preset ("paper" unless "preset" says otherwise). Throws
// ConfigError on unknown fields or bad values, IoError on read failure.
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& config);

std::string trajectory_to_string(const Trajectory& trajectory, Format format);
std::string errors_to_string(const std::vector<ErrorRecord>& errors, Format format);
std::string log_to_string(const MeasurementLog& log, Format format);
std::string study_to_string(const std::vector<StudyCell>& cells, Format format);

// Parsers for the formats above. Throw ConfigError on malformed input.
std::vector<ErrorRecord> errors_from_string(const std::string& text, Format format);
MeasurementLog log_from_string(const std::string& text, Format format);

// Throw IoError naming the path on failure.
void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace cosserat
