#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "causal_econf/exact.hpp"
#include "causal_econf/model.hpp"
#include "causal_econf/sampling.hpp"

namespace causal_econf {

struct Labels {
  std::vector<std::string> x;
  std::vector<std::string> y;
  std::vector<std::string> z;
};

/// A model file: labels define the sizes; `probs` is a flat row-major (x, y, z)
/// array. Entries may be JSON numbers or exact rational strings ("3/40"); the
/// exact view exists only when every entry is a string.
struct ModelFile {
  Labels labels;
  JointModel model;
  std::optional<RationalModel> exact;
};

ModelFile parse_model(const nlohmann::json& doc);
ModelFile load_model(const std::filesystem::path& path);
nlohmann::json model_to_json(const Labels& labels, const RationalModel& model);

/// Resolves `token` as a label first, then as a 0-based index.
std::size_t resolve_label(const std::vector<std::string>& labels, std::string_view token,
                          std::string_view axis);

/// CSV with header "x,y,z"; cells are indices or labels.
Dataset read_dataset_csv(std::istream& in, const Labels& labels);
Dataset load_dataset_csv(const std::filesystem::path& path, const Labels& labels);
void write_dataset_csv(std::ostream& out, const Dataset& data);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace causal_econf
