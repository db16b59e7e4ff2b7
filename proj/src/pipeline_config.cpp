#include "driftml/pipeline_config.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

namespace driftml {

std::string_view family_name(ClassifierFamily f) {
  switch (f) {
    case ClassifierFamily::DecisionTree: return "decision_tree";
    case ClassifierFamily::NaiveBayes: return "naive_bayes";
    case ClassifierFamily::LogisticSgd: return "logistic_sgd";
    case ClassifierFamily::Knn: return "knn";
  }
  return "unknown";
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid pipeline config: " + what);
}

std::string fmt_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double parse_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw ConfigError("'" + key + "' expects a number, got '" + value + "'");
  return v;
}

std::size_t parse_count(const std::string& key, const std::string& value) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw ConfigError("'" + key + "' expects a non-negative integer, got '" + value + "'");
  return v;
}

}  // namespace

void validate(const PipelineConfig& config) {
  using H = HyperparameterSpace;
  std::visit(overloaded{
                 [](const NoSelection&) {},
                 [](const VarianceThreshold& s) {
                   require(std::isfinite(s.threshold) && s.threshold >= 0.0, "variance threshold must be >= 0");
                 },
                 [](const TopKMutualInfo& s) { require(s.k >= 1, "top-k needs k >= 1"); },
             },
             config.selector);
  std::visit(overloaded{
                 [](const DecisionTreeConfig& c) {
                   require(c.max_depth >= H::kMinDepth && c.max_depth <= H::kMaxDepth, "max_depth must be in 1..32");
                   require(c.min_leaf >= 1, "min_leaf must be >= 1");
                 },
                 [](const NaiveBayesConfig& c) {
                   require(std::isfinite(c.laplace_alpha) && c.laplace_alpha > 0.0, "laplace_alpha must be > 0");
                 },
                 [](const LogisticSgdConfig& c) {
                   require(std::isfinite(c.learning_rate) && c.learning_rate > 0.0, "learning_rate must be > 0");
                   require(std::isfinite(c.l2) && c.l2 >= 0.0, "l2 must be >= 0");
                   require(c.epochs >= 1, "epochs must be >= 1");
                 },
                 [](const KnnConfig& c) {
                   require(c.k >= 1 && c.k % 2 == 1, "knn k must be odd and >= 1");
                   require(c.max_reference_points >= 1, "max_reference_points must be >= 1");
                 },
             },
             config.classifier);
}

std::string to_text(const PipelineConfig& config) {
  std::ostringstream os;
  os << "scaling=" << (config.scaling == Scaling::Standardize ? "standardize" : "none")
     << " imputation=" << (config.imputation == Imputation::Mean ? "mean" : "mode")
     << " one_hot=" << (config.one_hot ? "true" : "false");
  std::visit(overloaded{
                 [&](const NoSelection&) { os << " selector=none"; },
                 [&](const VarianceThreshold& s) {
                   os << " selector=variance_threshold threshold=" << fmt_double(s.threshold);
                 },
                 [&](const TopKMutualInfo& s) { os << " selector=top_k_mi top_k=" << s.k; },
             },
             config.selector);
  os << " classifier=" << family_name(family_of(config.classifier));
  std::visit(overloaded{
                 [&](const DecisionTreeConfig& c) {
                   os << " max_depth=" << c.max_depth << " min_leaf=" << c.min_leaf
                      << " criterion=" << (c.criterion == SplitCriterion::Gini ? "gini" : "entropy");
                 },
                 [&](const NaiveBayesConfig& c) { os << " laplace_alpha=" << fmt_double(c.laplace_alpha); },
                 [&](const LogisticSgdConfig& c) {
                   os << " learning_rate=" << fmt_double(c.learning_rate) << " l2=" << fmt_double(c.l2)
                      << " epochs=" << c.epochs;
                 },
                 [&](const KnnConfig& c) { os << " k=" << c.k << " max_reference_points=" << c.max_reference_points; },
             },
             config.classifier);
  return os.str();
}

PipelineConfig parse_pipeline_config(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream is{std::string(text)};
  std::string token;
  while (is >> token) {
    auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("expected key=value, got '" + token + "'");
    auto key = token.substr(0, eq);
    if (!kv.emplace(key, token.substr(eq + 1)).second) throw ConfigError("duplicate key '" + key + "'");
  }
  auto take = [&kv](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    auto v = it->second;
    kv.erase(it);
    return v;
  };

  PipelineConfig config;
  if (auto v = take("scaling")) {
    if (*v == "standardize") config.scaling = Scaling::Standardize;
    else if (*v == "none") config.scaling = Scaling::None;
    else throw ConfigError("unknown scaling '" + *v + "'");
  }
  if (auto v = take("imputation")) {
    if (*v == "mean") config.imputation = Imputation::Mean;
    else if (*v == "mode") config.imputation = Imputation::Mode;
    else throw ConfigError("unknown imputation '" + *v + "'");
  }
  if (auto v = take("one_hot")) {
    if (*v == "true") config.one_hot = true;
    else if (*v == "false") config.one_hot = false;
    else throw ConfigError("one_hot expects true/false, got '" + *v + "'");
  }
  const auto selector = take("selector").value_or("none");
  if (selector == "none") {
    config.selector = NoSelection{};
  } else if (selector == "variance_threshold") {
    VarianceThreshold s;
    if (auto v = take("threshold")) s.threshold = parse_double("threshold", *v);
    config.selector = s;
  } else if (selector == "top_k_mi") {
    TopKMutualInfo s;
    if (auto v = take("top_k")) s.k = parse_count("top_k", *v);
    config.selector = s;
  } else {
    throw ConfigError("unknown selector '" + selector + "'");
  }

  const auto classifier = take("classifier");
  if (!classifier) throw ConfigError("missing 'classifier'");
  if (*classifier == "decision_tree") {
    DecisionTreeConfig c;
    if (auto v = take("max_depth")) c.max_depth = static_cast<int>(parse_count("max_depth", *v));
    if (auto v = take("min_leaf")) c.min_leaf = parse_count("min_leaf", *v);
    if (auto v = take("criterion")) {
      if (*v == "gini") c.criterion = SplitCriterion::Gini;
      else if (*v == "entropy") c.criterion = SplitCriterion::Entropy;
      else throw ConfigError("unknown criterion '" + *v + "'");
    }
    config.classifier = c;
  } else if (*classifier == "naive_bayes") {
    NaiveBayesConfig c;
    if (auto v = take("laplace_alpha")) c.laplace_alpha = parse_double("laplace_alpha", *v);
    config.classifier = c;
  } else if (*classifier == "logistic_sgd") {
    LogisticSgdConfig c;
    if (auto v = take("learning_rate")) c.learning_rate = parse_double("learning_rate", *v);
    if (auto v = take("l2")) c.l2 = parse_double("l2", *v);
    if (auto v = take("epochs")) c.epochs = parse_count("epochs", *v);
    config.classifier = c;
  } else if (*classifier == "knn") {
    KnnConfig c;
    if (auto v = take("k")) c.k = parse_count("k", *v);
    if (auto v = take("max_reference_points")) c.max_reference_points = parse_count("max_reference_points", *v);
    config.classifier = c;
  } else {
    throw ConfigError("unknown classifier '" + *classifier + "'");
  }
  if (!kv.empty()) throw ConfigError("unexpected key '" + kv.begin()->first + "'");
  validate(config);
  return config;
}

std::vector<PipelineConfig> default_config_portfolio() {
  auto make = [](Scaling s, bool one_hot, SelectorConfig sel, ClassifierConfig clf) {
    return PipelineConfig{s, Imputation::Mean, one_hot, sel, clf};
  };
  constexpr auto kStd = Scaling::Standardize;
  constexpr auto kRaw = Scaling::None;
  return {
      make(kRaw, true, NoSelection{}, DecisionTreeConfig{8, 1, SplitCriterion::Gini}),
      make(kRaw, false, NoSelection{}, DecisionTreeConfig{12, 2, SplitCriterion::Entropy}),
      make(kRaw, true, NoSelection{}, DecisionTreeConfig{4, 5, SplitCriterion::Gini}),
      make(kRaw, false, NoSelection{}, DecisionTreeConfig{20, 10, SplitCriterion::Gini}),
      make(kRaw, true, NoSelection{}, NaiveBayesConfig{1.0}),
      make(kRaw, false, VarianceThreshold{0.0}, NaiveBayesConfig{0.1}),
      make(kStd, true, NoSelection{}, LogisticSgdConfig{0.1, 1e-4, 20}),
      make(kStd, true, VarianceThreshold{0.0}, LogisticSgdConfig{0.03, 1e-3, 40}),
      make(kStd, true, NoSelection{}, KnnConfig{5, 2000}),
      make(kStd, true, NoSelection{}, KnnConfig{15, 2000}),
      make(kStd, false, TopKMutualInfo{8}, KnnConfig{3, 1000}),
      make(kStd, true, TopKMutualInfo{16}, DecisionTreeConfig{10, 3, SplitCriterion::Entropy}),
  };
}

}  // namespace driftml
