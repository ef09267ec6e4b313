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

#include "arrkit/preprocess.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "arrkit/errors.hpp"
#include "arrkit/features.hpp"
#include "arrkit/kernels.hpp"
#include "arrkit/textio.hpp"

namespace arrkit {

std::vector<std::string> EncoderSpec::output_columns() const {
  std::vector<std::string> columns;
  for (const auto& feature : features) {
    if (feature.kind == FeatureKind::numeric) {
      columns.push_back(feature.name);
      continue;
    }
    for (const auto& category : feature.categories) {
      columns.push_back(feature.name + "_" + category);
    }
    if (feature.has_other_bucket) {
      columns.push_back(feature.name + "_" + kOtherCategory);
    }
  }
  return columns;
}

std::size_t TransformReport::all_zero_cells() const {
  std::size_t total = 0;
  for (const auto& entry : unseen) {
    if (!entry.routed_to_other) total += entry.count;
  }
  return total;
}

EncoderSpec fit_encoder(const LoanTable& train,
                        std::span<const std::string> retained_features,
                        const EncoderOptions& options) {
  if (train.empty()) throw InvalidArgumentError("fit_encoder: empty training table");
  if (retained_features.empty()) {
    throw InvalidArgumentError("fit_encoder: no retained features");
  }

  EncoderSpec spec;
  for (const auto& name : retained_features) {
    const FeatureAccessor* accessor = find_feature(name);
    if (!accessor) throw InvalidArgumentError("fit_encoder: unknown feature " + name);

    EncoderSpec::Feature feature;
    feature.name = name;
    feature.kind = accessor->kind;

    if (accessor->kind == FeatureKind::numeric) {
      std::vector<double> observed;
      observed.reserve(train.size());
      for (const auto& record : train.records) {
        FeatureValue v = accessor->get(record);
        if (!v.is_missing()) observed.push_back(v.number);
      }
      if (observed.empty()) {
        throw DataError("cannot encode feature '" + name +
                        "': no observed values in the training data");
      }
      std::sort(observed.begin(), observed.end());
      feature.min = observed.front();
      feature.max = observed.back();
      std::size_t mid = observed.size() / 2;
      feature.impute = observed.size() % 2 == 1
                           ? observed[mid]
                           : 0.5 * (observed[mid - 1] + observed[mid]);
    } else {
      std::map<std::string, std::size_t> counts;
      for (const auto& record : train.records) {
        FeatureValue v = accessor->get(record);
        counts[v.is_missing() ? kMissingCategory : v.category]++;
      }
      std::vector<std::pair<std::string, std::size_t>> ordered(counts.begin(),
                                                               counts.end());
      std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
      });
      bool truncate =
          std::find(options.high_cardinality.begin(), options.high_cardinality.end(),
                    name) != options.high_cardinality.end() &&
          ordered.size() > options.top_k_categories;
      if (truncate) {
        ordered.resize(options.top_k_categories);
        feature.has_other_bucket = true;
      }
      for (auto& [category, count] : ordered) {
        feature.categories.push_back(std::move(category));
      }
    }
    spec.features.push_back(std::move(feature));
  }
  return spec;
}

FeatureMatrix transform(const LoanTable& table, const EncoderSpec& spec,
                        TransformReport* report) {
  const std::size_t n = table.size();
  std::vector<std::uint64_t> row_ids;
  row_ids.reserve(n);
  for (const auto& record : table.records) row_ids.push_back(record.loan_id);

  FeatureMatrix matrix(n, spec.output_columns(), std::move(row_ids));

  std::map<std::pair<std::string, std::string>, std::pair<std::size_t, bool>>
      unseen;
  std::vector<double> raw(n);

  std::size_t col = 0;
  for (const auto& feature : spec.features) {
    const FeatureAccessor* accessor = find_feature(feature.name);
    if (!accessor) throw SchemaError("transform: unknown feature " + feature.name);

    if (feature.kind == FeatureKind::numeric) {
      for (std::size_t i = 0; i < n; ++i) {
        FeatureValue v = accessor->get(table.records[i]);
        raw[i] = v.is_missing() ? feature.impute : v.number;
      }
      kernels::scale_clamp01(raw, feature.min, feature.max, matrix.column_mut(col));
      ++col;
      continue;
    }

    const std::size_t group_begin = col;
    const std::size_t group_size =
        feature.categories.size() + (feature.has_other_bucket ? 1 : 0);
    for (std::size_t i = 0; i < n; ++i) {
      FeatureValue v = accessor->get(table.records[i]);
      const std::string& category = v.is_missing() ? kMissingCategory : v.category;
      auto it = std::find(feature.categories.begin(), feature.categories.end(),
                          category);
      if (it != feature.categories.end()) {
        matrix.set(i, group_begin + (it - feature.categories.begin()), 1.0);
      } else if (feature.has_other_bucket) {
        matrix.set(i, group_begin + feature.categories.size(), 1.0);
        auto& slot = unseen[{feature.name, category}];
        ++slot.first;
        slot.second = true;
      } else {
        auto& slot = unseen[{feature.name, category}];
        ++slot.first;
        slot.second = false;
      }
    }
    col = group_begin + group_size;
  }

  if (report) {
    report->unseen.clear();
    for (const auto& [key, value] : unseen) {
      report->unseen.push_back({key.first, key.second, value.first, value.second});
    }
  }
  return matrix;
}

// ---- serialization ---------------------------------------------------------

namespace {
constexpr const char* kEncoderMagic = "arrkit_encoder";
constexpr const char* kEncoderVersion = "v1";
}  // namespace

std::string serialize_encoder(const EncoderSpec& spec) {
  std::ostringstream out;
  out << kEncoderMagic << ' ' << kEncoderVersion << '\n';
  out << "features " << spec.features.size() << '\n';
  for (const auto& feature : spec.features) {
    if (feature.kind == FeatureKind::numeric) {
      out << "numeric " << textio::encode_token(feature.name) << " min "
          << textio::format_double_hex(feature.min) << " max "
          << textio::format_double_hex(feature.max) << " impute "
          << textio::format_double_hex(feature.impute) << '\n';
    } else {
      out << "categorical " << textio::encode_token(feature.name) << " other "
          << (feature.has_other_bucket ? 1 : 0) << " categories "
          << feature.categories.size();
      for (const auto& category : feature.categories) {
        out << ' ' << textio::encode_token(category);
      }
      out << '\n';
    }
  }
  out << "end\n";
  return out.str();
}

namespace {

std::vector<std::string> split_tokens(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream in(line);
  std::string token;
  while (in >> token) tokens.push_back(token);
  return tokens;
}

[[noreturn]] void bad_encoder(const std::string& why) {
  throw DataError("malformed encoder spec: " + why);
}

double parse_hex_or_die(const std::string& token) {
  auto v = textio::parse_double_hex(token);
  if (!v) bad_encoder("bad float token '" + token + "'");
  return *v;
}

std::string decode_or_die(const std::string& token) {
  auto v = textio::decode_token(token);
  if (!v) bad_encoder("bad token '" + token + "'");
  return *v;
}

}  // namespace

EncoderSpec parse_encoder(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) ||
      line != std::string(kEncoderMagic) + " " + kEncoderVersion) {
    bad_encoder("bad header");
  }
  if (!std::getline(in, line)) bad_encoder("missing feature count");
  auto head = split_tokens(line);
  if (head.size() != 2 || head[0] != "features") bad_encoder("missing feature count");
  auto count = textio::parse_int(head[1]);
  if (!count || *count < 0) bad_encoder("bad feature count");

  EncoderSpec spec;
  for (long long i = 0; i < *count; ++i) {
    if (!std::getline(in, line)) bad_encoder("truncated feature list");
    auto tokens = split_tokens(line);
    if (tokens.empty()) bad_encoder("empty feature line");
    EncoderSpec::Feature feature;
    if (tokens[0] == "numeric") {
      if (tokens.size() != 8 || tokens[2] != "min" || tokens[4] != "max" ||
          tokens[6] != "impute") {
        bad_encoder("bad numeric line");
      }
      feature.kind = FeatureKind::numeric;
      feature.name = decode_or_die(tokens[1]);
      feature.min = parse_hex_or_die(tokens[3]);
      feature.max = parse_hex_or_die(tokens[5]);
      feature.impute = parse_hex_or_die(tokens[7]);
    } else if (tokens[0] == "categorical") {
      if (tokens.size() < 6 || tokens[2] != "other" || tokens[4] != "categories") {
        bad_encoder("bad categorical line");
      }
      feature.kind = FeatureKind::categorical;
      feature.name = decode_or_die(tokens[1]);
      feature.has_other_bucket = tokens[3] == "1";
      auto n_categories = textio::parse_int(tokens[5]);
      if (!n_categories || *n_categories < 0 ||
          tokens.size() != 6 + static_cast<std::size_t>(*n_categories)) {
        bad_encoder("category count mismatch");
      }
      for (std::size_t t = 6; t < tokens.size(); ++t) {
        feature.categories.push_back(decode_or_die(tokens[t]));
      }
    } else {
      bad_encoder("unknown feature kind '" + tokens[0] + "'");
    }
    spec.features.push_back(std::move(feature));
  }
  if (!std::getline(in, line) || line != "end") bad_encoder("missing end marker");
  return spec;
}

void save_encoder(const std::string& path, const EncoderSpec& spec) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write encoder spec: " + path);
  out << serialize_encoder(spec);
  if (!out) throw IoError("error writing encoder spec: " + path);
}

EncoderSpec load_encoder(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read encoder spec: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_encoder(buffer.str());
}

}  // namespace arrkit
