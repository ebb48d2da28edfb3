// Copyright 2026 The Brier Authors
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

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "brier/error.hpp"
#include "brier/nn.hpp"

// Layout, all integers little-endian:
//   "BRIERCKP"  u32 version  u32 len  fingerprint bytes  u32 tensor count
//   per tensor: u32 rank, u64 dims..., f64 data...

namespace brier {
namespace {

constexpr char kMagic[8] = {'B', 'R', 'I', 'E', 'R', 'C', 'K', 'P'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

template <class T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::istream& in, const char* what) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw DataError(std::string("checkpoint truncated while reading ") + what);
  }
  return value;
}

void put_tensor(std::ostream& out, const Tensor& t) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(t.rank()));
  for (auto d : t.shape()) put<std::uint64_t>(out, d);
  out.write(reinterpret_cast<const char*>(t.data().data()),
            static_cast<std::streamsize>(t.size() * sizeof(double)));
}

Tensor get_tensor(std::istream& in) {
  const auto rank = get<std::uint32_t>(in, "tensor rank");
  if (rank == 0 || rank > 8) throw DataError("checkpoint has invalid tensor rank");
  Shape shape(rank);
  std::size_t n = 1;
  for (auto& d : shape) {
    d = get<std::uint64_t>(in, "tensor dims");
    n *= d;
  }
  std::vector<double> data(n);
  if (!in.read(reinterpret_cast<char*>(data.data()),
               static_cast<std::streamsize>(n * sizeof(double)))) {
    throw DataError("checkpoint truncated while reading tensor data");
  }
  return Tensor(std::move(shape), std::move(data));
}

}  // namespace

void save_params(std::ostream& out, const ModelSpec& spec, const Params& params) {
  check_params(spec, params);
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kVersion);
  const std::string& fp = spec.fingerprint();
  put<std::uint32_t>(out, static_cast<std::uint32_t>(fp.size()));
  out.write(fp.data(), static_cast<std::streamsize>(fp.size()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.size() * 2));
  for (const auto& p : params) {
    put_tensor(out, p.weight);
    put_tensor(out, p.bias);
  }
  if (!out) throw IoError("failed writing checkpoint");
}

void save_params(const std::string& path, const ModelSpec& spec,
                 const Params& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  save_params(out, spec, params);
}

Params load_params(std::istream& in, const ModelSpec& spec) {
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw DataError("not a brier checkpoint (bad magic)");
  }
  if (get<std::uint32_t>(in, "version") != kVersion) {
    throw DataError("unsupported checkpoint version");
  }
  const auto fp_len = get<std::uint32_t>(in, "fingerprint length");
  std::string fp(fp_len, '\0');
  if (!in.read(fp.data(), fp_len)) throw DataError("checkpoint truncated in fingerprint");
  if (fp != spec.fingerprint()) {
    throw DataError("checkpoint fingerprint " + fp + " does not match model " +
                    spec.fingerprint());
  }
  const auto count = get<std::uint32_t>(in, "tensor count");
  if (count != spec.num_linear() * 2) throw DataError("checkpoint tensor count mismatch");
  Params params;
  for (std::uint32_t i = 0; i < count; i += 2) {
    Tensor w = get_tensor(in);
    Tensor b = get_tensor(in);
    params.push_back({std::move(w), std::move(b)});
  }
  check_params(spec, params);
  return params;
}

Params load_params(const std::string& path, const ModelSpec& spec) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return load_params(in, spec);
}

}  // namespace brier
