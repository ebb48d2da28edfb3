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

#include "brier/config.hpp"

#include <cstdlib>
#include <fstream>
#include <iterator>
#include <set>

#include "brier/error.hpp"
#include "brier/random.hpp"
#include "json.hpp"

namespace brier {
namespace {

using nlohmann::json;

// Field reader that remembers its path and rejects unknown keys.
class Node {
 public:
  Node(const json& value, std::string path) : v_(value), path_(std::move(path)) {}

  const json& value() const { return v_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(path_, what); }

  void require_object() const {
    if (!v_.is_object()) fail("expected an object");
  }

  bool has(const std::string& key) const { return v_.is_object() && v_.contains(key); }

  Node child(const std::string& key) const {
    if (!has(key)) throw ConfigError(join(key), "missing required field");
    return Node(v_.at(key), join(key));
  }

  Node element(std::size_t i) const {
    return Node(v_.at(i), path_ + "[" + std::to_string(i) + "]");
  }

  void allow_only(std::initializer_list<const char*> keys) const {
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, _] : v_.items()) {
      if (!allowed.contains(k)) throw ConfigError(join(k), "unknown field");
    }
  }

  std::string str() const {
    if (!v_.is_string()) fail("expected a string");
    return v_.get<std::string>();
  }

  double number() const {
    if (!v_.is_number()) fail("expected a number");
    return v_.get<double>();
  }

  std::uint64_t uint() const {
    if (!v_.is_number_integer() || (v_.is_number_integer() && !v_.is_number_unsigned() &&
                                    v_.get<std::int64_t>() < 0)) {
      fail("expected a non-negative integer");
    }
    return v_.get<std::uint64_t>();
  }

  std::size_t positive() const {
    const auto n = uint();
    if (n == 0) fail("must be >= 1");
    return static_cast<std::size_t>(n);
  }

  std::string str_or(const std::string& key, std::string fallback) const {
    return has(key) ? child(key).str() : std::move(fallback);
  }
  double number_or(const std::string& key, double fallback) const {
    return has(key) ? child(key).number() : fallback;
  }
  std::uint64_t uint_or(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? child(key).uint() : fallback;
  }

 private:
  std::string join(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& v_;
  std::string path_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

SplitSpec parse_split(const Node& n, SplitSpec defaults) {
  n.require_object();
  n.allow_only({"val_fraction", "val_count", "policy", "seed"});
  SplitSpec s = defaults;
  if (n.has("val_fraction")) {
    s.val_fraction = n.child("val_fraction").number();
    s.val_count.reset();
    if (!(s.val_fraction >= 0.0 && s.val_fraction < 1.0)) {
      n.child("val_fraction").fail("must lie in [0, 1)");
    }
  }
  if (n.has("val_count")) s.val_count = static_cast<std::size_t>(n.child("val_count").uint());
  if (n.has("policy")) {
    const auto p = n.child("policy").str();
    if (p == "tail") {
      s.policy = SplitPolicy::kTail;
    } else if (p == "shuffled") {
      s.policy = SplitPolicy::kShuffled;
    } else {
      n.child("policy").fail("expected \"tail\" or \"shuffled\"");
    }
  }
  s.seed = n.uint_or("seed", s.seed);
  return s;
}

DatasetConfig parse_dataset(const Node& n, const std::filesystem::path& base) {
  n.require_object();
  DatasetConfig d;
  const auto kind = n.child("kind").str();
  if (kind == "mnist") {
    n.allow_only({"kind", "dir", "train_images", "train_labels", "test_images",
                  "test_labels", "split"});
    d.kind = DatasetKind::kMnist;
    std::filesystem::path dir;
    if (n.has("dir")) {
      dir = resolve(base, n.child("dir").str());
    } else if (const char* env = std::getenv("BRIER_MNIST_DIR")) {
      dir = env;
    }
    auto file = [&](const char* key, const char* fallback) {
      if (n.has(key)) return resolve(base, n.child(key).str());
      if (dir.empty()) {
        throw ConfigError(n.path() + ".dir",
                          "set dataset.dir, BRIER_MNIST_DIR or every file path");
      }
      return dir / fallback;
    };
    d.train_images = file("train_images", "train-images-idx3-ubyte");
    d.train_labels = file("train_labels", "train-labels-idx1-ubyte");
    d.test_images = file("test_images", "t10k-images-idx3-ubyte");
    d.test_labels = file("test_labels", "t10k-labels-idx1-ubyte");
    d.num_classes = 10;
    SplitSpec def;
    def.val_count = 5000;
    def.policy = SplitPolicy::kTail;
    d.split = n.has("split") ? parse_split(n.child("split"), def) : def;
  } else if (kind == "csv") {
    n.allow_only({"kind", "train", "test", "label_column", "classes", "split"});
    d.kind = DatasetKind::kCsv;
    d.train_csv = resolve(base, n.child("train").str());
    d.test_csv = resolve(base, n.child("test").str());
    d.label_column = n.str_or("label_column", "label");
    d.num_classes = n.child("classes").positive();
    if (d.num_classes < 2) n.child("classes").fail("must be >= 2");
    SplitSpec def;
    def.val_fraction = 0.2;
    def.policy = SplitPolicy::kShuffled;
    d.split = n.has("split") ? parse_split(n.child("split"), def) : def;
  } else if (kind == "synthetic") {
    n.allow_only({"kind", "classes", "dim", "per_class", "test_per_class", "separation",
                  "noise", "seed", "split"});
    d.kind = DatasetKind::kSynthetic;
    auto& g = d.synthetic;
    g.num_classes = n.child("classes").positive();
    if (g.num_classes < 2) n.child("classes").fail("must be >= 2");
    g.dim = n.child("dim").positive();
    g.per_class = n.child("per_class").positive();
    g.separation = n.number_or("separation", 1.0);
    g.noise = n.number_or("noise", 1.0);
    if (!(g.noise > 0.0)) n.child("noise").fail("must be > 0");
    g.seed = n.uint_or("seed", 0);
    d.test_per_class = n.has("test_per_class") ? n.child("test_per_class").positive()
                                               : g.per_class;
    d.num_classes = g.num_classes;
    SplitSpec def;
    def.val_fraction = 0.2;
    def.policy = SplitPolicy::kShuffled;
    d.split = n.has("split") ? parse_split(n.child("split"), def) : def;
  } else {
    n.child("kind").fail("expected \"mnist\", \"csv\" or \"synthetic\"");
  }
  if (!d.split.val_count && d.split.val_fraction == 0.0) {
    throw ConfigError(n.path() + ".split.val_fraction",
                      "protocol p1 stops on validation accuracy and needs val_fraction > 0");
  }
  if (d.split.val_count && *d.split.val_count == 0) {
    throw ConfigError(n.path() + ".split.val_count",
                      "protocol p1 stops on validation accuracy and needs val_count > 0");
  }
  return d;
}

ActivationKind parse_activation(const Node& n) {
  const auto s = n.str();
  if (s == "relu") return ActivationKind::kRelu;
  if (s == "tanh") return ActivationKind::kTanh;
  n.fail("expected \"relu\" or \"tanh\"");
}

ModelSpec parse_model(const Node& n, std::size_t num_classes) {
  n.require_object();
  n.allow_only({"mlp", "activation", "layers"});
  try {
    if (n.has("mlp")) {
      if (n.has("layers")) n.fail("give either mlp or layers, not both");
      const Node widths = n.child("mlp");
      if (!widths.value().is_array()) widths.fail("expected an array of widths");
      std::vector<std::size_t> w;
      for (std::size_t i = 0; i < widths.value().size(); ++i) {
        w.push_back(widths.element(i).positive());
      }
      const auto act = n.has("activation") ? parse_activation(n.child("activation"))
                                           : ActivationKind::kRelu;
      if (w.size() < 2) widths.fail("needs at least input and output widths");
      if (w.back() != num_classes) {
        widths.fail("last width " + std::to_string(w.back()) + " must equal the class count " +
                    std::to_string(num_classes));
      }
      return ModelSpec::mlp(w, act);
    }
    n.allow_only({"layers"});
    const Node layers = n.child("layers");
    if (!layers.value().is_array()) layers.fail("expected an array");
    std::vector<LayerSpec> specs;
    for (std::size_t i = 0; i < layers.value().size(); ++i) {
      const Node l = layers.element(i);
      if (l.value().is_string()) {
        specs.emplace_back(Activation{parse_activation(l)});
        continue;
      }
      l.require_object();
      l.allow_only({"linear"});
      const Node dims = l.child("linear");
      if (!dims.value().is_array() || dims.value().size() != 2) {
        dims.fail("expected [in, out]");
      }
      specs.emplace_back(Linear{dims.element(0).positive(), dims.element(1).positive()});
    }
    return ModelSpec(std::move(specs), num_classes);
  } catch (const InvalidArgument& e) {
    throw ConfigError(n.path(), e.what());
  }
}

TrainConfig parse_arm(const Node& n) {
  n.require_object();
  n.allow_only({"loss", "lr", "momentum", "batch_size", "max_epochs", "patience"});
  TrainConfig c;
  try {
    c.loss = LossSpec::parse(n.child("loss").str());
  } catch (const InvalidArgument& e) {
    throw ConfigError(n.path() + ".loss", e.what());
  }
  c.learning_rate = n.number_or("lr", default_learning_rate(c.loss));
  if (!(c.learning_rate > 0.0)) n.child("lr").fail("must be > 0");
  c.momentum = n.number_or("momentum", 0.0);
  if (!(c.momentum >= 0.0 && c.momentum < 1.0)) n.child("momentum").fail("must lie in [0, 1)");
  c.batch_size = n.has("batch_size") ? n.child("batch_size").positive() : 64;
  c.max_epochs = n.has("max_epochs") ? n.child("max_epochs").positive() : 100;
  c.protocol = EarlyStop{n.has("patience") ? n.child("patience").positive() : 5};
  return c;
}

}  // namespace

const TrainConfig* ExperimentConfig::find_arm(const LossSpec& loss) const {
  for (const auto& a : arms) {
    if (a.loss == loss) return &a;
  }
  return nullptr;
}

ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  const Node root(doc, "");
  root.require_object();
  root.allow_only({"name", "model_label", "task_label", "dataset", "model", "training",
                   "seeds", "protocols", "epoch_selection", "topk", "jobs", "output_dir"});

  ExperimentConfig cfg;
  cfg.name = root.str_or("name", "experiment");
  if (cfg.name.empty() || cfg.name.find_first_of("/\\") != std::string::npos) {
    root.child("name").fail("must be a nonempty file-name-safe string");
  }
  cfg.model_label = root.str_or("model_label", "");
  cfg.task_label = root.str_or("task_label", "");
  cfg.dataset = parse_dataset(root.child("dataset"), base_dir);
  cfg.model = parse_model(root.child("model"), cfg.dataset.num_classes);
  if (cfg.dataset.kind == DatasetKind::kSynthetic &&
      cfg.model.input_dim() != cfg.dataset.synthetic.dim) {
    throw ConfigError("model", "input width " + std::to_string(cfg.model.input_dim()) +
                                   " does not match dataset.dim " +
                                   std::to_string(cfg.dataset.synthetic.dim));
  }

  const Node training = root.child("training");
  if (!training.value().is_array() || training.value().empty()) {
    training.fail("expected a nonempty array of loss blocks");
  }
  for (std::size_t i = 0; i < training.value().size(); ++i) {
    cfg.arms.push_back(parse_arm(training.element(i)));
    for (std::size_t j = 0; j < i; ++j) {
      if (cfg.arms[j].loss == cfg.arms[i].loss) {
        training.element(i).child("loss").fail("loss appears twice");
      }
    }
  }
  const bool has_ce = cfg.find_arm(LossSpec::cross_entropy()) != nullptr;

  if (root.has("seeds")) {
    const Node s = root.child("seeds");
    if (s.value().is_array()) {
      if (s.value().empty()) s.fail("needs at least one seed");
      for (std::size_t i = 0; i < s.value().size(); ++i) {
        const auto seed = s.element(i).uint();
        for (auto prev : cfg.seeds) {
          if (prev == seed) s.element(i).fail("duplicate seed");
        }
        cfg.seeds.push_back(seed);
      }
    } else {
      const auto n = s.positive();
      for (std::uint64_t i = 1; i <= n; ++i) cfg.seeds.push_back(i);
    }
  } else {
    cfg.seeds = {1, 2, 3, 4, 5};
  }

  const std::string protocols = root.str_or("protocols", has_ce ? "p1+p2" : "p1");
  if (protocols == "p1") {
    cfg.protocols = ProtocolSet::kP1;
  } else if (protocols == "p1+p2") {
    cfg.protocols = ProtocolSet::kP1P2;
    if (!has_ce) root.child("protocols").fail("p2 needs a cross-entropy (\"ce\") training block");
  } else {
    root.child("protocols").fail("expected \"p1\" or \"p1+p2\"");
  }

  const std::string sel = root.str_or("epoch_selection", "best");
  if (sel == "best") {
    cfg.selection = EpochSelection::kBestEpoch;
  } else if (sel == "total") {
    cfg.selection = EpochSelection::kTotalEpochs;
  } else {
    root.child("epoch_selection").fail("expected \"best\" or \"total\"");
  }

  if (root.has("topk")) {
    const Node k = root.child("topk");
    if (!k.value().is_array()) k.fail("expected an array");
    cfg.ks.clear();
    for (std::size_t i = 0; i < k.value().size(); ++i) cfg.ks.push_back(k.element(i).positive());
    if (cfg.ks.empty()) cfg.ks = {1};
  }
  cfg.jobs = static_cast<std::size_t>(root.uint_or("jobs", 1));
  if (root.has("output_dir")) {
    cfg.output_dir = resolve(base_dir, root.child("output_dir").str()).string();
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_config(text, path.parent_path());
}

LoadedData load_data(const ExperimentConfig& config) {
  const auto& d = config.dataset;
  Dataset full;
  Dataset test;
  switch (d.kind) {
    case DatasetKind::kMnist:
      full = load_mnist(d.train_images.string(), d.train_labels.string());
      test = load_mnist(d.test_images.string(), d.test_labels.string());
      full.name = "mnist";
      test.name = "mnist/test";
      break;
    case DatasetKind::kCsv:
      full = load_csv(d.train_csv.string(), d.label_column, d.num_classes);
      test = load_csv(d.test_csv.string(), d.label_column, d.num_classes);
      break;
    case DatasetKind::kSynthetic: {
      full = synth_gaussians(d.synthetic);
      GaussianSpec held_out = d.synthetic;
      held_out.per_class = d.test_per_class;
      held_out.seed = derive_seed(d.synthetic.seed, 0x7e57);
      test = synth_gaussians(held_out);
      test.name = "gaussians/test";
      break;
    }
  }
  for (const Dataset* ds : {&full, &test}) {
    if (ds->dim() != config.model.input_dim()) {
      throw ConfigError("model", "input width " + std::to_string(config.model.input_dim()) +
                                     " does not match " + std::to_string(ds->dim()) +
                                     " features in " + ds->name);
    }
  }
  std::pair<Dataset, Dataset> parts;
  try {
    parts = split(full, d.split);
  } catch (const InvalidArgument& e) {
    throw ConfigError("dataset.split", e.what());
  }
  LoadedData out;
  out.train = std::make_shared<const Dataset>(std::move(parts.first));
  out.val = std::make_shared<const Dataset>(std::move(parts.second));
  out.test = std::make_shared<const Dataset>(std::move(test));
  return out;
}

ExperimentSpec make_experiment(const ExperimentConfig& config, const LoadedData& data) {
  ExperimentSpec spec{.model = config.model};
  spec.name = config.name;
  spec.model_label = config.model_label;
  spec.task_label = config.task_label;
  spec.train = data.train;
  spec.val = data.val;
  spec.test = data.test;
  spec.arms = config.arms;
  spec.seeds = config.seeds;
  spec.protocols = config.protocols;
  spec.selection = config.selection;
  spec.eval.ks = config.ks;
  spec.jobs = config.jobs;
  return spec;
}

}  // namespace brier
