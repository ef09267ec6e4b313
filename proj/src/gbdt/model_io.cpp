// Copyright 2026-present the arrkit project
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

#include <fstream>
#include <sstream>
#include <vector>

#include "arrkit/errors.hpp"
#include "arrkit/gbdt.hpp"
#include "arrkit/textio.hpp"

namespace arrkit::gbdt {

namespace {

constexpr const char* kModelMagic = "arrkit_model";
constexpr const char* kModelVersion = "v1";

[[noreturn]] void bad_model(const std::string& why) {
  throw DataError("malformed model file: " + why);
}

// pre-order node sequence with remapped child indices
std::vector<TreeNode> preorder_nodes(const Tree& tree) {
  std::vector<int> order;
  order.reserve(tree.nodes.size());
  std::vector<int> stack = {0};
  while (!stack.empty()) {
    int at = stack.back();
    stack.pop_back();
    order.push_back(at);
    const TreeNode& node = tree.nodes[static_cast<std::size_t>(at)];
    if (!node.is_leaf()) {
      stack.push_back(node.right);  // left pops first
      stack.push_back(node.left);
    }
  }
  std::vector<int> remap(tree.nodes.size(), -1);
  for (std::size_t i = 0; i < order.size(); ++i) {
    remap[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
  }
  std::vector<TreeNode> out;
  out.reserve(order.size());
  for (int old : order) {
    TreeNode node = tree.nodes[static_cast<std::size_t>(old)];
    if (!node.is_leaf()) {
      node.left = remap[static_cast<std::size_t>(node.left)];
      node.right = remap[static_cast<std::size_t>(node.right)];
    }
    out.push_back(node);
  }
  return out;
}

std::vector<std::string> tokens_of(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string token;
  while (in >> token) tokens.push_back(token);
  return tokens;
}

double hex_or_die(const std::string& token) {
  auto v = textio::parse_double_hex(token);
  if (!v) bad_model("bad float token '" + token + "'");
  return *v;
}

long long int_or_die(const std::string& token) {
  auto v = textio::parse_int(token);
  if (!v) bad_model("bad integer token '" + token + "'");
  return *v;
}

}  // namespace

std::string serialize_model(const GbdtModel& model) {
  std::ostringstream out;
  out << kModelMagic << ' ' << kModelVersion << '\n';
  out << "loss " << to_string(model.loss_kind) << '\n';
  out << "base_score " << textio::format_double_hex(model.base_score) << '\n';
  out << "best_iteration " << model.best_iteration << '\n';
  const GbdtConfig& c = model.config;
  out << "config max_depth " << c.max_depth << " num_leaves " << c.num_leaves
      << " feature_fraction " << textio::format_double_hex(c.feature_fraction)
      << " bagging_fraction " << textio::format_double_hex(c.bagging_fraction)
      << " learning_rate " << textio::format_double_hex(c.learning_rate)
      << " num_rounds " << c.num_rounds << " early_stopping_rounds "
      << c.early_stopping_rounds << " max_bins " << c.max_bins
      << " min_samples_leaf " << c.min_samples_leaf << " lambda_l2 "
      << textio::format_double_hex(c.lambda_l2) << " seed " << c.seed << '\n';
  out << "features " << model.feature_names.size();
  for (const auto& name : model.feature_names) {
    out << ' ' << textio::encode_token(name);
  }
  out << '\n';
  out << "bins " << model.bin_mapper.feature_count() << '\n';
  for (std::size_t f = 0; f < model.bin_mapper.feature_count(); ++f) {
    auto thresholds = model.bin_mapper.thresholds(f);
    out << "bin " << f << ' ' << thresholds.size();
    for (double t : thresholds) out << ' ' << textio::format_double_hex(t);
    out << '\n';
  }
  out << "trees " << model.trees.size() << '\n';
  for (std::size_t t = 0; t < model.trees.size(); ++t) {
    auto nodes = preorder_nodes(model.trees[t]);
    out << "tree " << t << ' ' << nodes.size() << '\n';
    for (const auto& node : nodes) {
      if (node.is_leaf()) {
        out << "l " << textio::format_double_hex(node.value) << '\n';
      } else {
        out << "s " << node.feature << ' ' << node.bin << ' '
            << textio::format_double_hex(node.threshold) << ' ' << node.left
            << ' ' << node.right << '\n';
      }
    }
  }
  out << "end\n";
  return out.str();
}

GbdtModel parse_model(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  auto next_line = [&](const char* what) -> std::string {
    if (!std::getline(in, line)) bad_model(std::string("missing ") + what);
    return line;
  };

  if (next_line("header") != std::string(kModelMagic) + " " + kModelVersion) {
    bad_model("bad header");
  }

  GbdtModel model;
  {
    auto tokens = tokens_of(next_line("loss"));
    if (tokens.size() != 2 || tokens[0] != "loss") bad_model("bad loss line");
    auto loss = loss_from_string(tokens[1]);
    if (!loss) bad_model("unknown loss '" + tokens[1] + "'");
    model.loss_kind = *loss;
  }
  {
    auto tokens = tokens_of(next_line("base_score"));
    if (tokens.size() != 2 || tokens[0] != "base_score") bad_model("bad base_score");
    model.base_score = hex_or_die(tokens[1]);
  }
  {
    auto tokens = tokens_of(next_line("best_iteration"));
    if (tokens.size() != 2 || tokens[0] != "best_iteration") {
      bad_model("bad best_iteration");
    }
    model.best_iteration = static_cast<int>(int_or_die(tokens[1]));
  }
  {
    auto tokens = tokens_of(next_line("config"));
    if (tokens.size() != 23 || tokens[0] != "config") bad_model("bad config line");
    GbdtConfig& c = model.config;
    for (std::size_t i = 1; i + 1 < tokens.size(); i += 2) {
      const std::string& key = tokens[i];
      const std::string& value = tokens[i + 1];
      if (key == "max_depth") c.max_depth = static_cast<int>(int_or_die(value));
      else if (key == "num_leaves") c.num_leaves = static_cast<int>(int_or_die(value));
      else if (key == "feature_fraction") c.feature_fraction = hex_or_die(value);
      else if (key == "bagging_fraction") c.bagging_fraction = hex_or_die(value);
      else if (key == "learning_rate") c.learning_rate = hex_or_die(value);
      else if (key == "num_rounds") c.num_rounds = static_cast<int>(int_or_die(value));
      else if (key == "early_stopping_rounds") {
        c.early_stopping_rounds = static_cast<int>(int_or_die(value));
      } else if (key == "max_bins") c.max_bins = static_cast<int>(int_or_die(value));
      else if (key == "min_samples_leaf") {
        c.min_samples_leaf = static_cast<int>(int_or_die(value));
      } else if (key == "lambda_l2") c.lambda_l2 = hex_or_die(value);
      else if (key == "seed") c.seed = static_cast<std::uint64_t>(int_or_die(value));
      else bad_model("unknown config key '" + key + "'");
    }
  }
  {
    auto tokens = tokens_of(next_line("features"));
    if (tokens.size() < 2 || tokens[0] != "features") bad_model("bad features line");
    auto count = int_or_die(tokens[1]);
    if (count < 0 || tokens.size() != static_cast<std::size_t>(count) + 2) {
      bad_model("feature count mismatch");
    }
    for (std::size_t i = 2; i < tokens.size(); ++i) {
      auto name = textio::decode_token(tokens[i]);
      if (!name) bad_model("bad feature token");
      model.feature_names.push_back(*name);
    }
  }
  {
    auto tokens = tokens_of(next_line("bins"));
    if (tokens.size() != 2 || tokens[0] != "bins") bad_model("bad bins line");
    auto count = int_or_die(tokens[1]);
    if (count < 0) bad_model("bad bin count");
    std::vector<std::vector<double>> thresholds(static_cast<std::size_t>(count));
    for (long long f = 0; f < count; ++f) {
      auto bin_tokens = tokens_of(next_line("bin"));
      if (bin_tokens.size() < 3 || bin_tokens[0] != "bin" ||
          int_or_die(bin_tokens[1]) != f) {
        bad_model("bad bin line");
      }
      auto k = int_or_die(bin_tokens[2]);
      if (k < 0 || bin_tokens.size() != static_cast<std::size_t>(k) + 3) {
        bad_model("threshold count mismatch");
      }
      auto& list = thresholds[static_cast<std::size_t>(f)];
      for (std::size_t i = 3; i < bin_tokens.size(); ++i) {
        list.push_back(hex_or_die(bin_tokens[i]));
      }
    }
    model.bin_mapper.set_thresholds(std::move(thresholds));
  }
  {
    auto tokens = tokens_of(next_line("trees"));
    if (tokens.size() != 2 || tokens[0] != "trees") bad_model("bad trees line");
    auto count = int_or_die(tokens[1]);
    if (count < 0) bad_model("bad tree count");
    for (long long t = 0; t < count; ++t) {
      auto head = tokens_of(next_line("tree"));
      if (head.size() != 3 || head[0] != "tree" || int_or_die(head[1]) != t) {
        bad_model("bad tree line");
      }
      auto n_nodes = int_or_die(head[2]);
      if (n_nodes < 1) bad_model("empty tree");
      Tree tree;
      for (long long i = 0; i < n_nodes; ++i) {
        auto node_tokens = tokens_of(next_line("node"));
        TreeNode node;
        if (node_tokens.size() == 2 && node_tokens[0] == "l") {
          node.value = hex_or_die(node_tokens[1]);
        } else if (node_tokens.size() == 6 && node_tokens[0] == "s") {
          node.feature = static_cast<int>(int_or_die(node_tokens[1]));
          node.bin = static_cast<int>(int_or_die(node_tokens[2]));
          node.threshold = hex_or_die(node_tokens[3]);
          node.left = static_cast<int>(int_or_die(node_tokens[4]));
          node.right = static_cast<int>(int_or_die(node_tokens[5]));
          if (node.left <= 0 || node.right <= 0 || node.left >= n_nodes ||
              node.right >= n_nodes) {
            bad_model("node child index out of range");
          }
        } else {
          bad_model("bad node line");
        }
        tree.nodes.push_back(node);
      }
      model.trees.push_back(std::move(tree));
    }
  }
  if (next_line("end") != "end") bad_model("missing end marker");
  if (model.best_iteration < 0 ||
      model.best_iteration > static_cast<int>(model.trees.size())) {
    bad_model("best_iteration out of range");
  }
  return model;
}

void save_model(const std::string& path, const GbdtModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model: " + path);
  out << serialize_model(model);
  if (!out) throw IoError("error writing model: " + path);
}

GbdtModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read model: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str());
}

}  // namespace arrkit::gbdt
