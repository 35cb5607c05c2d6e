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

#include "dataset.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

namespace wccf {

namespace {

using nlohmann::json;

template <std::size_t N>
void read_array(const json& obj, const char* key, Modality m, std::array<double, N>& out,
                std::size_t line_no) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_array())
    fail(ErrorCode::Schema, "line " + std::to_string(line_no) + ": missing array '" + key + "'");
  if (it->size() != N)
    fail(ErrorCode::Schema, "line " + std::to_string(line_no) + ": " + std::string(to_string(m)) +
                                " feature dimension " + std::to_string(it->size()) + ", expected " +
                                std::to_string(N));
  for (std::size_t i = 0; i < N; ++i) {
    if (!(*it)[i].is_number())
      fail(ErrorCode::Schema, "line " + std::to_string(line_no) + ": non-numeric " +
                                  std::string(to_string(m)) + " feature");
    out[i] = (*it)[i].get<double>();
  }
}

double read_number(const json& obj, const char* key, std::size_t line_no) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number())
    fail(ErrorCode::Schema, "line " + std::to_string(line_no) + ": missing number '" + key + "'");
  return it->get<double>();
}

}  // namespace

void write_dataset(std::ostream& out, const std::vector<EpisodeRecord>& episodes) {
  for (const auto& ep : episodes) {
    for (const auto& s : ep.steps) {
      json j;
      j["t"] = s.t;
      j["x"] = s.x;
      j["speed"] = s.speed;
      j["blocked"] = s.blocked;
      j["gps"] = s.gps;
      j["image"] = s.image;
      j["lidar"] = s.lidar;
      j["beam"] = s.beam;
      out << j.dump() << '\n';
    }
  }
}

std::vector<EpisodeRecord> read_dataset(std::istream& in, std::size_t num_beams) {
  std::vector<EpisodeRecord> episodes;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(ErrorCode::Schema, "line " + std::to_string(line_no) + ": malformed JSON (" + e.what() + ")");
    }
    if (!j.is_object()) fail(ErrorCode::Schema, "line " + std::to_string(line_no) + ": expected an object");
    for (const auto& [key, _] : j.items()) {
      static const char* known[] = {"t", "x", "speed", "blocked", "gps", "image", "lidar", "beam"};
      bool ok = false;
      for (const char* k : known) ok = ok || key == k;
      if (!ok) fail(ErrorCode::Schema, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }

    StepRecord s;
    s.t = read_number(j, "t", line_no);
    s.x = read_number(j, "x", line_no);
    s.speed = read_number(j, "speed", line_no);
    const auto blocked = j.find("blocked");
    if (blocked == j.end() || !blocked->is_boolean())
      fail(ErrorCode::Schema, "line " + std::to_string(line_no) + ": missing boolean 'blocked'");
    s.blocked = blocked->get<bool>();
    read_array(j, "gps", Modality::Gps, s.gps, line_no);
    read_array(j, "image", Modality::Image, s.image, line_no);
    read_array(j, "lidar", Modality::Lidar, s.lidar, line_no);
    const auto beam = j.find("beam");
    if (beam == j.end() || !beam->is_number_integer())
      fail(ErrorCode::Schema, "line " + std::to_string(line_no) + ": missing integer 'beam'");
    const auto b = beam->get<long long>();
    if (b < 0 || static_cast<std::size_t>(b) >= num_beams)
      fail(ErrorCode::Schema, "line " + std::to_string(line_no) + ": beam index " + std::to_string(b) +
                                  " outside [0, " + std::to_string(num_beams) + ")");
    s.beam = static_cast<int>(b);

    if (episodes.empty() || s.t <= episodes.back().steps.back().t) episodes.emplace_back();
    episodes.back().steps.push_back(s);
  }
  return episodes;
}

void export_dataset(const std::vector<EpisodeRecord>& episodes, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  write_dataset(out, episodes);
  out.flush();
  if (!out) fail(ErrorCode::Io, "failed writing '" + path + "'");
}

std::vector<EpisodeRecord> import_dataset(const std::string& path, std::size_t num_beams) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open dataset '" + path + "'");
  return read_dataset(in, num_beams);
}

std::size_t total_steps(const std::vector<EpisodeRecord>& episodes) {
  std::size_t n = 0;
  for (const auto& e : episodes) n += e.steps.size();
  return n;
}

}  // namespace wccf
