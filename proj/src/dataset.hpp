// SPDX-License-Identifier: Apache-2.0
//
// wccf: wireless context engineering simulator and learning stack
// Copyright (C) 2026 The wccf Authors
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

// JSON-lines episode datasets. One object per step:
//   {"t":..,"x":..,"speed":..,"blocked":..,"gps":[2],"image":[4],"lidar":[6],"beam":..}
// A line whose t does not exceed the previous line's t starts a new episode.

#ifndef WCCF_DATASET_HPP
#define WCCF_DATASET_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "env.hpp"

namespace wccf {

void write_dataset(std::ostream& out, const std::vector<EpisodeRecord>& episodes);
std::vector<EpisodeRecord> read_dataset(std::istream& in, std::size_t num_beams);

void export_dataset(const std::vector<EpisodeRecord>& episodes, const std::string& path);
// num_beams bounds the accepted beam indices.
std::vector<EpisodeRecord> import_dataset(const std::string& path, std::size_t num_beams);

std::size_t total_steps(const std::vector<EpisodeRecord>& episodes);

}  // namespace wccf

#endif  // WCCF_DATASET_HPP
