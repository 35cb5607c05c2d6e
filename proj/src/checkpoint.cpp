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

#include "checkpoint.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include <json.hpp>

namespace wccf {

using nlohmann::json;

namespace {

json shape_json(const ModelShape& s) {
  return {{"d_model", s.d_model},     {"num_heads", s.num_heads}, {"num_blocks", s.num_blocks},
          {"ffn_hidden", s.ffn_hidden}, {"max_seq", s.max_seq},     {"num_beams", s.num_beams},
          {"radio_map_buckets", s.radio_map_buckets}};
}

std::size_t read_dim(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_unsigned())
    fail(ErrorCode::Schema, std::string("checkpoint shape: missing or invalid '") + key + "'");
  return j[key].get<std::size_t>();
}

ModelShape shape_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorCode::Schema, "checkpoint shape must be an object");
  ModelShape s;
  s.d_model = read_dim(j, "d_model");
  s.num_heads = read_dim(j, "num_heads");
  s.num_blocks = read_dim(j, "num_blocks");
  s.ffn_hidden = read_dim(j, "ffn_hidden");
  s.max_seq = read_dim(j, "max_seq");
  s.num_beams = read_dim(j, "num_beams");
  s.radio_map_buckets = read_dim(j, "radio_map_buckets");
  if (j.size() != 7) fail(ErrorCode::Schema, "checkpoint shape has unknown keys");
  try {
    s.validate();
  } catch (const Error& e) {
    fail(ErrorCode::Schema, std::string("checkpoint shape: ") + e.what());
  }
  return s;
}

}  // namespace

void write_checkpoint(std::ostream& out, const ModelParams& params) {
  params.validate();
  json tensors = json::object();
  for_each_tensor(params, [&](std::string_view name, const double* data, std::size_t n, bool) {
    tensors[std::string(name)] = std::vector<double>(data, data + n);
  });
  json doc = {{"format", kCheckpointFormat},
              {"version", kCheckpointVersion},
              {"shape", shape_json(params.shape)},
              {"tensors", std::move(tensors)}};
  out << doc.dump() << '\n';
  if (!out) fail(ErrorCode::Io, "failed to write checkpoint");
}

ModelParams read_checkpoint(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::Schema, std::string("checkpoint is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != kCheckpointFormat)
    fail(ErrorCode::Schema, "not a wccf model checkpoint");
  if (!doc.contains("version") || !doc["version"].is_number_integer() || doc["version"].get<int>() != kCheckpointVersion)
    fail(ErrorCode::Schema, "unsupported checkpoint version");
  if (!doc.contains("shape") || !doc.contains("tensors") || !doc["tensors"].is_object())
    fail(ErrorCode::Schema, "checkpoint lacks shape or tensors");

  const ModelShape shape = shape_from_json(doc["shape"]);
  // Normalisation constants are read from the file too.
  ModelParams params = zero_model(shape, EnvConfig{});
  const json& tensors = doc["tensors"];
  std::set<std::string> seen;
  for_each_tensor(params, [&](std::string_view name, double* data, std::size_t n, bool) {
    const std::string key(name);
    if (!tensors.contains(key)) fail(ErrorCode::Schema, "checkpoint is missing tensor '" + key + "'");
    const json& arr = tensors[key];
    if (!arr.is_array() || arr.size() != n)
      fail(ErrorCode::Schema, "tensor '" + key + "' has " + std::to_string(arr.is_array() ? arr.size() : 0) +
                                  " values, expected " + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i) {
      if (!arr[i].is_number()) fail(ErrorCode::Schema, "tensor '" + key + "' holds a non-number");
      data[i] = arr[i].get<double>();
    }
    seen.insert(key);
  });
  if (seen.size() != tensors.size()) fail(ErrorCode::Schema, "checkpoint has unknown tensors");
  if (!params.all_finite()) fail(ErrorCode::Numeric, "checkpoint holds non-finite values");
  return params;
}

void save_checkpoint(const ModelParams& params, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  write_checkpoint(out, params);
}

ModelParams load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open checkpoint '" + path + "'");
  return read_checkpoint(in);
}

}  // namespace wccf
