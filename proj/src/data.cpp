#include "driftml/data.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace driftml {

Schema::Schema(std::vector<FeatureSpec> features, LabelSpec label)
    : features_(std::move(features)), label_(std::move(label)) {
  std::set<std::string> names;
  for (const auto& f : features_) {
    if (!names.insert(f.name).second) throw DataError("duplicate feature name '" + f.name + "'");
    if (f.kind == FeatureKind::Categorical) {
      if (f.levels.empty()) throw DataError("categorical feature '" + f.name + "' has no levels");
      std::set<std::string> levels(f.levels.begin(), f.levels.end());
      if (levels.size() != f.levels.size())
        throw DataError("categorical feature '" + f.name + "' has duplicate levels");
    } else if (!f.levels.empty()) {
      throw DataError("numeric feature '" + f.name + "' declares levels");
    }
  }
  if (label_.classes.size() < 2) throw DataError("label '" + label_.name + "' needs at least 2 classes");
  std::set<std::string> classes(label_.classes.begin(), label_.classes.end());
  if (classes.size() != label_.classes.size()) throw DataError("duplicate class names");
}

std::optional<std::size_t> Schema::level_index(std::size_t feature, std::string_view level) const {
  const auto& levels = features_.at(feature).levels;
  auto it = std::find(levels.begin(), levels.end(), level);
  if (it == levels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - levels.begin());
}

std::optional<std::size_t> Schema::class_index(std::string_view name) const {
  auto it = std::find(label_.classes.begin(), label_.classes.end(), name);
  if (it == label_.classes.end()) return std::nullopt;
  return static_cast<std::size_t>(it - label_.classes.begin());
}

bool Schema::compatible_with(const Schema& other) const {
  if (features_.size() != other.features_.size()) return false;
  for (std::size_t i = 0; i < features_.size(); ++i)
    if (features_[i].kind != other.features_[i].kind) return false;
  return label_.classes == other.label_.classes;
}

std::vector<int> Batch::labels() const {
  std::vector<int> out;
  out.reserve(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (!instances[i].label) throw DataError("instance " + std::to_string(i) + " is unlabeled");
    out.push_back(*instances[i].label);
  }
  return out;
}

Batch Batch::without_labels() const {
  Batch out{schema, instances, index};
  for (auto& inst : out.instances) inst.label.reset();
  return out;
}

Batch Batch::subset(std::span<const std::size_t> rows) const {
  Batch out{schema, {}, index};
  out.instances.reserve(rows.size());
  for (auto r : rows) out.instances.push_back(instances.at(r));
  return out;
}

void Batch::validate() const {
  if (!schema) throw DataError("batch has no schema");
  const auto nf = schema->feature_count();
  const auto nc = static_cast<int>(schema->class_count());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    if (inst.values.size() != nf)
      throw DataError("instance " + std::to_string(i) + " has " + std::to_string(inst.values.size()) +
                      " values, schema has " + std::to_string(nf));
    for (std::size_t f = 0; f < nf; ++f) {
      const auto& spec = schema->feature(f);
      double v = inst.values[f];
      if (spec.kind != FeatureKind::Categorical || is_missing(v) || is_unseen(v)) continue;
      if (v < 0 || v >= static_cast<double>(spec.levels.size()) || v != std::floor(v))
        throw DataError("instance " + std::to_string(i) + " has invalid level for '" + spec.name + "'");
    }
    if (inst.label && (*inst.label < 0 || *inst.label >= nc))
      throw DataError("instance " + std::to_string(i) + " has label outside the class set");
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) throw DataError("unterminated quoted field");
  cells.push_back(std::move(cur));
  return cells;
}

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

bool is_missing_cell(const std::string& cell) { return cell.empty() || cell == "?"; }

std::optional<double> parse_number(const std::string& cell) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v)) return std::nullopt;
  return v;
}

// Numeric-looking class names sort numerically, everything else lexicographically.
bool class_name_less(const std::string& a, const std::string& b) {
  auto na = parse_number(a);
  auto nb = parse_number(b);
  if (na && nb) return *na < *nb || (*na == *nb && a < b);
  if (na != nb) return static_cast<bool>(na);
  return a < b;
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

CsvTable read_csv(std::istream& in, const std::optional<Schema>& schema_hint,
                  const std::string& label_column) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty CSV file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.size() >= 3 && std::memcmp(line.data(), "\xEF\xBB\xBF", 3) == 0) line.erase(0, 3);
  std::vector<std::string> header = split_csv_line(line);
  for (auto& h : header) h = trim(h);

  auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) throw DataError("label column '" + label_column + "' not found");
  const std::size_t label_col = static_cast<std::size_t>(label_it - header.begin());

  std::vector<std::vector<std::string>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                      " fields, found " + std::to_string(cells.size()));
    for (auto& c : cells) c = trim(std::move(c));
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw DataError("CSV file has a header but no rows");

  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (c != label_col) feature_cols.push_back(c);

  std::optional<Schema> schema;
  if (schema_hint) {
    if (schema_hint->feature_count() != feature_cols.size())
      throw DataError("schema hint has " + std::to_string(schema_hint->feature_count()) + " features, file has " +
                      std::to_string(feature_cols.size()));
    schema = *schema_hint;
  } else {
    std::vector<FeatureSpec> features;
    for (auto c : feature_cols) {
      FeatureSpec spec{header[c], FeatureKind::Numeric, {}};
      bool numeric = true;
      for (const auto& row : rows)
        if (!is_missing_cell(row[c]) && !parse_number(row[c])) {
          numeric = false;
          break;
        }
      if (!numeric) {
        spec.kind = FeatureKind::Categorical;
        std::set<std::string> seen;
        for (const auto& row : rows)
          if (!is_missing_cell(row[c]) && seen.insert(row[c]).second) spec.levels.push_back(row[c]);
      }
      features.push_back(std::move(spec));
    }
    std::set<std::string, decltype(&class_name_less)> classes(&class_name_less);
    for (const auto& row : rows)
      if (!is_missing_cell(row[label_col])) classes.insert(row[label_col]);
    LabelSpec label{label_column, {classes.begin(), classes.end()}};
    schema.emplace(std::move(features), std::move(label));
  }

  auto shared = std::make_shared<const Schema>(*schema);
  Batch batch{shared, {}, 0};
  batch.instances.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    Instance inst;
    inst.values.reserve(feature_cols.size());
    for (std::size_t f = 0; f < feature_cols.size(); ++f) {
      const auto& cell = row[feature_cols[f]];
      if (is_missing_cell(cell)) {
        inst.values.push_back(kMissing);
        continue;
      }
      const auto& spec = shared->feature(f);
      if (spec.kind == FeatureKind::Numeric) {
        auto v = parse_number(cell);
        if (!v)
          throw DataError("row " + std::to_string(r + 1) + ": '" + cell + "' is not numeric for '" + spec.name +
                          "'");
        inst.values.push_back(*v);
      } else {
        auto idx = shared->level_index(f, cell);
        inst.values.push_back(idx ? static_cast<double>(*idx) : kUnseenLevel);
      }
    }
    const auto& lab = row[label_col];
    if (!is_missing_cell(lab)) {
      auto idx = shared->class_index(lab);
      if (!idx) throw DataError("row " + std::to_string(r + 1) + ": class '" + lab + "' is not in the class set");
      inst.label = static_cast<int>(*idx);
    }
    batch.instances.push_back(std::move(inst));
  }
  return {*shared, std::move(batch)};
}

CsvTable load_csv(const std::string& path, const std::optional<Schema>& schema_hint,
                  const std::string& label_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  return read_csv(in, schema_hint, label_column);
}

void write_csv(std::ostream& out, const Batch& batch) {
  const auto& schema = *batch.schema;
  for (const auto& f : schema.features()) out << f.name << ',';
  out << schema.label().name << '\n';
  for (const auto& inst : batch.instances) {
    for (std::size_t f = 0; f < schema.feature_count(); ++f) {
      double v = inst.values[f];
      if (is_missing(v)) {
        out << '?';
      } else if (schema.feature(f).kind == FeatureKind::Categorical) {
        out << (is_unseen(v) ? "?" : schema.feature(f).levels[static_cast<std::size_t>(v)]);
      } else {
        out << format_number(v);
      }
      out << ',';
    }
    out << (inst.label ? schema.label().classes[static_cast<std::size_t>(*inst.label)] : "?") << '\n';
  }
}

std::vector<Batch> split_stream(const Batch& data, std::size_t batch_size) {
  if (batch_size == 0) throw std::invalid_argument("batch_size must be at least 1");
  std::vector<Batch> out;
  const auto n = data.instances.size();
  for (std::size_t start = 0, idx = 0; start < n; start += batch_size, ++idx) {
    const auto end = std::min(n, start + batch_size);
    Batch b{data.schema, {}, idx};
    b.instances.assign(data.instances.begin() + static_cast<std::ptrdiff_t>(start),
                       data.instances.begin() + static_cast<std::ptrdiff_t>(end));
    out.push_back(std::move(b));
  }
  return out;
}

Batch concatenate(std::span<const Batch> parts) {
  if (parts.empty()) throw std::invalid_argument("nothing to concatenate");
  Batch out{parts.front().schema, {}, parts.front().index};
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  out.instances.reserve(total);
  for (const auto& p : parts) {
    if (p.schema != out.schema && !p.schema->compatible_with(*out.schema))
      throw DataError("cannot concatenate batches with incompatible schemas");
    out.instances.insert(out.instances.end(), p.instances.begin(), p.instances.end());
  }
  return out;
}

std::uint64_t fingerprint(const Batch& batch) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& inst : batch.instances) {
    for (double v : inst.values) {
      // All NaNs hash alike.
      std::uint64_t bits = 0;
      if (is_missing(v)) {
        bits = 0x7ff8000000000000ULL;
      } else {
        std::memcpy(&bits, &v, sizeof bits);
      }
      mix(&bits, sizeof bits);
    }
    const std::int64_t lab = inst.label ? *inst.label : -1;
    mix(&lab, sizeof lab);
  }
  return h;
}

}  // namespace driftml
