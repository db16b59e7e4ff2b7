#include "driftml/model_io.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace driftml {

namespace {

static_assert(std::endian::native == std::endian::little, "model format assumes a little-endian host");

constexpr char kMagic[8] = {'D', 'R', 'I', 'F', 'T', 'M', 'L', 'P'};

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  template <class T>
  void pod(const T& v) {
    static_assert(std::is_trivially_copyable_v<T>);
    out_.write(reinterpret_cast<const char*>(&v), sizeof v);
  }
  void size(std::size_t v) { pod(static_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    size(s.size());
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void doubles(const std::vector<double>& v) {
    size(v.size());
    out_.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  }
  void sizes(const std::vector<std::size_t>& v) {
    size(v.size());
    for (auto x : v) size(x);
  }
  void matrix(const Matrix& m) {
    size(m.rows());
    size(m.cols());
    doubles(m.data());
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  template <class T>
  T pod() {
    T v{};
    in_.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in_) throw FormatError("truncated model file");
    return v;
  }
  std::size_t size() {
    const auto v = pod<std::uint64_t>();
    if (v > (std::uint64_t{1} << 40)) throw FormatError("corrupt length field");
    return static_cast<std::size_t>(v);
  }
  std::string str() {
    std::string s(size(), '\0');
    in_.read(s.data(), static_cast<std::streamsize>(s.size()));
    if (!in_) throw FormatError("truncated model file");
    return s;
  }
  std::vector<double> doubles() {
    std::vector<double> v(size());
    in_.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!in_) throw FormatError("truncated model file");
    return v;
  }
  std::vector<std::size_t> sizes() {
    std::vector<std::size_t> v(size());
    for (auto& x : v) x = size();
    return v;
  }
  Matrix matrix() {
    const auto rows = size();
    const auto cols = size();
    Matrix m(rows, cols);
    auto data = doubles();
    if (data.size() != rows * cols) throw FormatError("matrix size mismatch");
    m.data() = std::move(data);
    return m;
  }

 private:
  std::istream& in_;
};

void write_schema(Writer& w, const Schema& s) {
  w.size(s.feature_count());
  for (const auto& f : s.features()) {
    w.str(f.name);
    w.pod<std::uint8_t>(f.kind == FeatureKind::Categorical ? 1 : 0);
    w.size(f.levels.size());
    for (const auto& l : f.levels) w.str(l);
  }
  w.str(s.label().name);
  w.size(s.class_count());
  for (const auto& c : s.label().classes) w.str(c);
}

Schema read_schema(Reader& r) {
  std::vector<FeatureSpec> features(r.size());
  for (auto& f : features) {
    f.name = r.str();
    f.kind = r.pod<std::uint8_t>() ? FeatureKind::Categorical : FeatureKind::Numeric;
    f.levels.resize(r.size());
    for (auto& l : f.levels) l = r.str();
  }
  LabelSpec label;
  label.name = r.str();
  label.classes.resize(r.size());
  for (auto& c : label.classes) c = r.str();
  return Schema(std::move(features), std::move(label));
}

void write_columns(Writer& w, const std::vector<ColumnInfo>& cols) {
  w.size(cols.size());
  for (const auto& c : cols) {
    w.pod<std::uint8_t>(c.discrete ? 1 : 0);
    w.size(c.cardinality);
  }
}

std::vector<ColumnInfo> read_columns(Reader& r) {
  std::vector<ColumnInfo> cols(r.size());
  for (auto& c : cols) {
    c.discrete = r.pod<std::uint8_t>() != 0;
    c.cardinality = r.size();
  }
  return cols;
}

void write_encoder(Writer& w, const Encoder& e) {
  w.size(e.features().size());
  for (const auto& f : e.features()) {
    w.pod<std::uint8_t>(f.kind == FeatureKind::Categorical ? 1 : 0);
    w.pod(f.fill);
    w.pod(f.center);
    w.pod(f.scale);
    w.pod<std::uint8_t>(f.one_hot ? 1 : 0);
    w.size(f.first_column);
    w.size(f.width);
    w.size(f.level_slot.size());
    for (int s : f.level_slot) w.pod<std::int32_t>(s);
    w.pod<std::int32_t>(f.other_slot);
  }
  write_columns(w, e.columns());
}

Encoder read_encoder(Reader& r) {
  std::vector<FeatureEncoding> features(r.size());
  for (auto& f : features) {
    f.kind = r.pod<std::uint8_t>() ? FeatureKind::Categorical : FeatureKind::Numeric;
    f.fill = r.pod<double>();
    f.center = r.pod<double>();
    f.scale = r.pod<double>();
    f.one_hot = r.pod<std::uint8_t>() != 0;
    f.first_column = r.size();
    f.width = r.size();
    f.level_slot.resize(r.size());
    for (auto& s : f.level_slot) s = r.pod<std::int32_t>();
    f.other_slot = r.pod<std::int32_t>();
  }
  auto columns = read_columns(r);
  return Encoder(std::move(features), std::move(columns));
}

enum class ClassifierTag : std::uint8_t { Tree = 1, NaiveBayes = 2, Logistic = 3, Knn = 4, Constant = 5 };

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void write_classifier(Writer& w, const FittedClassifier& c) {
  std::visit(overloaded{
                 [&](const DecisionTreeModel& m) {
                   w.pod(ClassifierTag::Tree);
                   w.size(m.n_classes);
                   w.size(m.nodes.size());
                   for (const auto& n : m.nodes) {
                     w.pod<std::int32_t>(n.feature);
                     w.pod(n.threshold);
                     w.pod<std::int32_t>(n.left);
                     w.pod<std::int32_t>(n.right);
                     w.size(n.dist_offset);
                   }
                   w.doubles(m.leaf_dist);
                 },
                 [&](const NaiveBayesModel& m) {
                   w.pod(ClassifierTag::NaiveBayes);
                   w.size(m.n_classes);
                   w.doubles(m.class_count);
                   write_columns(w, m.columns);
                   w.sizes(m.table_offset);
                   w.doubles(m.log_likelihood);
                   w.doubles(m.mean);
                   w.doubles(m.variance);
                 },
                 [&](const LogisticModel& m) {
                   w.pod(ClassifierTag::Logistic);
                   w.size(m.n_classes);
                   w.size(m.n_features);
                   w.doubles(m.weights);
                   w.doubles(m.loss_history);
                 },
                 [&](const KnnModel& m) {
                   w.pod(ClassifierTag::Knn);
                   w.size(m.n_classes);
                   w.size(m.k);
                   w.matrix(m.reference);
                   w.size(m.reference_labels.size());
                   for (int l : m.reference_labels) w.pod<std::int32_t>(l);
                 },
                 [&](const ConstantModel& m) {
                   w.pod(ClassifierTag::Constant);
                   w.size(m.n_classes);
                   w.pod<std::int32_t>(m.label);
                 },
             },
             c);
}

FittedClassifier read_classifier(Reader& r) {
  switch (r.pod<ClassifierTag>()) {
    case ClassifierTag::Tree: {
      DecisionTreeModel m;
      m.n_classes = r.size();
      m.nodes.resize(r.size());
      for (auto& n : m.nodes) {
        n.feature = r.pod<std::int32_t>();
        n.threshold = r.pod<double>();
        n.left = r.pod<std::int32_t>();
        n.right = r.pod<std::int32_t>();
        n.dist_offset = r.size();
      }
      m.leaf_dist = r.doubles();
      return m;
    }
    case ClassifierTag::NaiveBayes: {
      NaiveBayesModel m;
      m.n_classes = r.size();
      m.class_count = r.doubles();
      m.columns = read_columns(r);
      m.table_offset = r.sizes();
      m.log_likelihood = r.doubles();
      m.mean = r.doubles();
      m.variance = r.doubles();
      return m;
    }
    case ClassifierTag::Logistic: {
      LogisticModel m;
      m.n_classes = r.size();
      m.n_features = r.size();
      m.weights = r.doubles();
      m.loss_history = r.doubles();
      return m;
    }
    case ClassifierTag::Knn: {
      KnnModel m;
      m.n_classes = r.size();
      m.k = r.size();
      m.reference = r.matrix();
      m.reference_labels.resize(r.size());
      for (auto& l : m.reference_labels) l = r.pod<std::int32_t>();
      return m;
    }
    case ClassifierTag::Constant: {
      ConstantModel m;
      m.n_classes = r.size();
      m.label = r.pod<std::int32_t>();
      return m;
    }
  }
  throw FormatError("unknown classifier tag");
}

}  // namespace

void save_model(std::ostream& out, const TrainedPipeline& model) {
  Writer w(out);
  out.write(kMagic, sizeof kMagic);
  w.pod(kModelFormatMajor);
  w.pod(kModelFormatMinor);
  w.str(to_text(model.config()));
  write_schema(w, *model.schema());
  write_encoder(w, model.encoder());
  w.sizes(model.selected_columns());
  write_classifier(w, model.classifier());
  w.pod(model.train_fingerprint());
  w.pod(model.seed());
  if (!out) throw FormatError("failed to write model");
}

TrainedPipeline load_model(std::istream& in) {
  char magic[sizeof kMagic];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw FormatError("not a driftml model file");
  Reader r(in);
  const auto major = r.pod<std::uint16_t>();
  const auto minor = r.pod<std::uint16_t>();
  if (major != kModelFormatMajor || minor > kModelFormatMinor)
    throw FormatError("unsupported model format version " + std::to_string(major) + "." + std::to_string(minor));
  auto config = parse_pipeline_config(r.str());
  auto schema = std::make_shared<const Schema>(read_schema(r));
  auto encoder = read_encoder(r);
  auto selected = r.sizes();
  auto classifier = read_classifier(r);
  const auto fp = r.pod<std::uint64_t>();
  const auto seed = r.pod<std::uint64_t>();
  return TrainedPipeline(std::move(config), std::move(schema), std::move(encoder), std::move(selected),
                         std::move(classifier), fp, seed);
}

}  // namespace driftml
