#include "causal_econf/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "causal_econf/error.hpp"

namespace causal_econf {
namespace {

using nlohmann::json;

std::vector<std::string> label_array(const json& doc, const char* key) {
  if (!doc.contains(key)) throw Error(ErrorCode::MissingField, fmt::format("model lacks '{}'", key));
  const auto& arr = doc.at(key);
  if (!arr.is_array()) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("'{}' must be an array of strings", key));
  }
  std::vector<std::string> out;
  for (const auto& item : arr) {
    if (!item.is_string()) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("'{}' must hold strings", key));
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

ModelFile parse_model(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::InvalidArgument, "model document must be an object");
  Labels labels{label_array(doc, "x_labels"), label_array(doc, "y_labels"),
                label_array(doc, "z_labels")};
  const Shape shape{labels.x.size(), labels.y.size(), labels.z.size()};
  if (!doc.contains("probs")) throw Error(ErrorCode::MissingField, "model lacks 'probs'");
  const auto& probs = doc.at("probs");
  if (!probs.is_array()) throw Error(ErrorCode::InvalidArgument, "'probs' must be an array");

  std::vector<double> values;
  std::vector<Rational> exact;
  bool all_strings = true;
  for (const auto& item : probs) {
    if (item.is_number()) {
      all_strings = false;
      values.push_back(item.get<double>());
    } else if (item.is_string()) {
      Rational r = parse_rational(item.get<std::string>());
      values.push_back(r.get_d());
      exact.push_back(std::move(r));
    } else {
      throw Error(ErrorCode::InvalidArgument, "'probs' entries must be numbers or strings");
    }
  }
  // Exact validation first so an all-rational table is judged without roundoff.
  std::optional<RationalModel> rational;
  if (all_strings && !probs.empty()) rational.emplace(shape, std::move(exact));
  return ModelFile{std::move(labels), validate_model(shape, std::move(values)),
                   std::move(rational)};
}

ModelFile load_model(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("{}: malformed JSON: {}", path.string(), e.what()));
  }
  return parse_model(doc);
}

json model_to_json(const Labels& labels, const RationalModel& model) {
  json probs = json::array();
  for (const auto& r : model.table()) probs.push_back(to_string(r));
  return json{{"x_labels", labels.x}, {"y_labels", labels.y}, {"z_labels", labels.z},
              {"probs", probs}};
}

std::size_t resolve_label(const std::vector<std::string>& labels, std::string_view token,
                          std::string_view axis) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == token) return i;
  }
  std::size_t index = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, index);
  if (token.empty() || ec != std::errc{} || ptr != end) {
    throw Error(ErrorCode::IndexOutOfRange,
                fmt::format("'{}' is neither a {} label nor an index", token, axis));
  }
  if (index >= labels.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                fmt::format("{} index {} out of range [0, {})", axis, index, labels.size()));
  }
  return index;
}

Dataset read_dataset_csv(std::istream& in, const Labels& labels) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "x,y,z") {
    throw Error(ErrorCode::InvalidArgument, "dataset CSV must start with header 'x,y,z'");
  }
  Dataset data;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto c1 = body.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : body.find(',', c1 + 1);
    if (c2 == std::string_view::npos || body.find(',', c2 + 1) != std::string_view::npos) {
      throw Error(ErrorCode::InvalidArgument,
                  fmt::format("dataset line {}: expected three fields", lineno));
    }
    data.rows.push_back({resolve_label(labels.x, trim(body.substr(0, c1)), "x"),
                         resolve_label(labels.y, trim(body.substr(c1 + 1, c2 - c1 - 1)), "y"),
                         resolve_label(labels.z, trim(body.substr(c2 + 1)), "z")});
  }
  return data;
}

Dataset load_dataset_csv(const std::filesystem::path& path, const Labels& labels) {
  std::istringstream in(read_file(path));
  return read_dataset_csv(in, labels);
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  out << "x,y,z\n";
  for (const auto& row : data.rows) out << row.x << ',' << row.y << ',' << row.z << '\n';
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, fmt::format("cannot write '{}'", path.string()));
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::Io, fmt::format("write to '{}' failed", path.string()));
}

}  // namespace causal_econf
