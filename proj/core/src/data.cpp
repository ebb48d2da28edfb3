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

#include "brier/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>
#include <system_error>

#include "brier/error.hpp"
#include "brier/random.hpp"
#include "csv.hpp"

namespace brier {
namespace {

constexpr std::uint32_t kIdxImages = 0x00000803;  // 2051
constexpr std::uint32_t kIdxLabels = 0x00000801;  // 2049

std::vector<unsigned char> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t be32(const std::vector<unsigned char>& bytes, std::size_t offset) {
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void require_size(const std::vector<unsigned char>& bytes, std::size_t expected,
                  const std::string& path) {
  if (bytes.size() < expected) {
    throw DataError(path + ": truncated, expected " + std::to_string(expected) +
                    " bytes, found " + std::to_string(bytes.size()));
  }
  if (bytes.size() > expected) {
    throw DataError(path + ": " + std::to_string(bytes.size() - expected) +
                    " unexpected trailing bytes after offset " + std::to_string(expected));
  }
}

std::string hex32(std::uint32_t v) {
  char buf[11];
  std::snprintf(buf, sizeof(buf), "0x%08x", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

void Dataset::validate() const {
  if (labels.empty()) throw DataError(name + ": dataset is empty");
  if (features.rank() != 2 || features.rows() != labels.size()) {
    throw DataError(name + ": features " + to_string(features.shape()) +
                    " do not match " + std::to_string(labels.size()) + " labels");
  }
  if (features.cols() == 0) throw DataError(name + ": no feature columns");
  if (num_classes == 0) throw DataError(name + ": class count must be positive");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= num_classes) {
      throw DataError(name + ": label " + std::to_string(labels[i]) + " of row " +
                      std::to_string(i) + " is not below " + std::to_string(num_classes));
    }
  }
}

Tensor Dataset::gather(std::span<const std::size_t> indices) const {
  const std::size_t d = features.cols();
  std::vector<double> out(indices.size() * d);
  const auto src = features.data();
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const auto row = src.subspan(indices[r] * d, d);
    std::copy(row.begin(), row.end(), out.begin() + static_cast<std::ptrdiff_t>(r * d));
  }
  return Tensor({indices.size(), d}, std::move(out));
}

Dataset Dataset::subset(std::span<const std::size_t> indices, std::string new_name) const {
  std::vector<std::size_t> sub_labels(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) sub_labels[r] = labels.at(indices[r]);
  return Dataset{std::move(new_name), gather(indices), std::move(sub_labels), num_classes};
}

Dataset load_mnist(const std::string& images_path, const std::string& labels_path) {
  const auto img = read_file(images_path);
  if (img.size() < 16) throw DataError(images_path + ": truncated IDX header");
  if (be32(img, 0) != kIdxImages) {
    throw DataError(images_path + ": bad magic " + hex32(be32(img, 0)) +
                    ", expected 0x00000803");
  }
  const std::size_t n = be32(img, 4);
  const std::size_t rows = be32(img, 8);
  const std::size_t cols = be32(img, 12);
  const std::size_t d = rows * cols;
  require_size(img, 16 + n * d, images_path);

  const auto lab = read_file(labels_path);
  if (lab.size() < 8) throw DataError(labels_path + ": truncated IDX header");
  if (be32(lab, 0) != kIdxLabels) {
    throw DataError(labels_path + ": bad magic " + hex32(be32(lab, 0)) +
                    ", expected 0x00000801");
  }
  const std::size_t n_labels = be32(lab, 4);
  require_size(lab, 8 + n_labels, labels_path);
  if (n_labels != n) {
    throw DataError("count mismatch: " + images_path + " has " + std::to_string(n) +
                    " images, " + labels_path + " has " + std::to_string(n_labels) +
                    " labels");
  }
  if (n == 0 || d == 0) throw DataError(images_path + ": no images");

  std::vector<double> features(n * d);
  for (std::size_t i = 0; i < n * d; ++i) features[i] = img[16 + i] / 255.0;
  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = lab[8 + i];
    if (labels[i] >= 10) {
      throw DataError(labels_path + ": label " + std::to_string(labels[i]) +
                      " at index " + std::to_string(i) + " is not a digit");
    }
  }
  Dataset ds{"mnist", Tensor({n, d}, std::move(features)), std::move(labels), 10};
  ds.validate();
  return ds;
}

Dataset load_csv(const std::string& path, const std::string& label_column,
                 std::size_t num_classes) {
  const auto bytes = read_file(path);
  std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  csv::Reader reader(text);
  std::vector<std::string> header;
  if (!reader.next(header)) throw DataError(path + ": missing header row");
  std::size_t label_idx = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (trim(header[i]) == label_column) {
      label_idx = i;
      break;
    }
  }
  if (label_idx == header.size()) {
    throw DataError(path + ": no column named '" + label_column + "'");
  }
  if (header.size() < 2) throw DataError(path + ": no feature columns");

  const std::size_t d = header.size() - 1;
  std::vector<double> features;
  std::vector<std::size_t> labels;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    const std::size_t record_line = reader.record_line();
    if (fields.size() == 1 && trim(fields[0]).empty()) continue;  // blank line
    if (fields.size() != header.size()) {
      throw DataError(path + ": line " + std::to_string(record_line) + " has " +
                      std::to_string(fields.size()) + " fields, header has " +
                      std::to_string(header.size()));
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      double v = 0.0;
      if (!parse_double(fields[i], v)) {
        throw DataError(path + ": line " + std::to_string(record_line) + ", column '" +
                        header[i] + "': non-numeric value '" + fields[i] + "'");
      }
      if (i != label_idx) {
        features.push_back(v);
        continue;
      }
      if (v < 0.0 || v != std::floor(v)) {
        throw DataError(path + ": line " + std::to_string(record_line) +
                        ": label '" + fields[i] + "' is not a class index");
      }
      if (v >= static_cast<double>(num_classes)) {
        throw DataError(path + ": line " + std::to_string(record_line) + ": label " +
                        fields[i] + " is not below class count " +
                        std::to_string(num_classes));
      }
      labels.push_back(static_cast<std::size_t>(v));
    }
  }
  if (labels.empty()) throw DataError(path + ": no data rows");
  const std::size_t n = labels.size();
  Dataset ds{path, Tensor({n, d}, std::move(features)), std::move(labels), num_classes};
  ds.validate();
  return ds;
}

Dataset synth_gaussians(const GaussianSpec& spec) {
  if (spec.num_classes < 2) throw InvalidArgument("synthetic data needs C >= 2");
  if (spec.dim == 0) throw InvalidArgument("synthetic data needs d >= 1");
  if (spec.per_class == 0) throw InvalidArgument("synthetic data needs per_class >= 1");
  if (!(spec.noise > 0.0)) throw InvalidArgument("synthetic data needs noise > 0");
  const std::size_t n = spec.num_classes * spec.per_class;
  Rng rng(spec.seed);
  std::vector<double> features(n * spec.dim);
  std::vector<std::size_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i % spec.num_classes;
    labels[i] = c;
    double* row = features.data() + i * spec.dim;
    for (std::size_t j = 0; j < spec.dim; ++j) {
      const double mean = j == c % spec.dim ? spec.separation : 0.0;
      row[j] = mean + spec.noise * rng.normal();
    }
  }
  Dataset ds{"gaussians", Tensor({n, spec.dim}, std::move(features)), std::move(labels),
             spec.num_classes};
  ds.validate();
  return ds;
}

std::size_t validation_rows(std::size_t n, const SplitSpec& spec) {
  if (spec.val_count) return *spec.val_count;
  if (!(spec.val_fraction >= 0.0 && spec.val_fraction < 1.0)) {
    throw InvalidArgument("val_fraction must lie in [0, 1)");
  }
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * spec.val_fraction));
}

std::pair<Dataset, Dataset> split(const Dataset& dataset, const SplitSpec& spec) {
  const std::size_t n = dataset.size();
  const std::size_t n_val = validation_rows(n, spec);
  if (n_val == 0) throw InvalidArgument("split leaves the validation side empty");
  if (n_val >= n) throw InvalidArgument("split leaves the training side empty");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (spec.policy == SplitPolicy::kShuffled) {
    Rng rng(derive_seed(spec.seed, 0x5b1e7));
    shuffle(order, rng);
  }
  const std::span<const std::size_t> all(order);
  return {dataset.subset(all.first(n - n_val), dataset.name + "/train"),
          dataset.subset(all.subspan(n - n_val), dataset.name + "/val")};
}

BatchPlan::BatchPlan(std::size_t n, std::size_t batch_size, std::uint64_t seed,
                     std::uint64_t epoch)
    : order_(n), batch_size_(batch_size) {
  if (batch_size == 0) throw InvalidArgument("batch_size must be >= 1");
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  Rng rng(derive_seed(seed, epoch));
  shuffle(order_, rng);
  num_batches_ = (n + batch_size - 1) / batch_size;
}

std::span<const std::size_t> BatchPlan::batch(std::size_t i) const {
  const std::size_t begin = i * batch_size_;
  const std::size_t len = std::min(batch_size_, order_.size() - begin);
  return std::span<const std::size_t>(order_).subspan(begin, len);
}

}  // namespace brier
