#include "driftml/experiment.hpp"

#include <spdlog/spdlog.h>

#include <charconv>
#include <fstream>
#include <future>
#include <map>
#include <set>
#include <sstream>

#include "driftml/report.hpp"

namespace driftml {

namespace {

struct Value {
  bool is_array = false;
  std::vector<std::string> items;  // one item for scalars
  std::size_t line = 0;
};

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted && c == '\\') {
      ++i;
    } else if (c == '"') {
      quoted = !quoted;
    } else if (c == '#' && !quoted) {
      return std::string(line.substr(0, i));
    }
  }
  return std::string(line);
}

std::string unquote(std::string_view tok, std::size_t line) {
  tok = trim(tok);
  if (tok.empty()) fail(line, "empty value");
  if (tok.front() != '"') {
    if (tok.find_first_of("\"[]=") != std::string_view::npos) fail(line, "malformed value '" + std::string(tok) + "'");
    return std::string(tok);
  }
  if (tok.size() < 2 || tok.back() != '"') fail(line, "unterminated string");
  std::string out;
  for (std::size_t i = 1; i + 1 < tok.size(); ++i) {
    char c = tok[i];
    if (c == '\\') {
      if (i + 2 >= tok.size()) fail(line, "dangling escape");
      c = tok[++i];
      if (c != '"' && c != '\\') fail(line, std::string("unknown escape \\") + c);
    } else if (c == '"') {
      fail(line, "unexpected quote inside string");
    }
    out += c;
  }
  return out;
}

// Arrays split on commas outside quotes, then each element is unquoted.
Value parse_value(std::string_view text, std::size_t line) {
  Value v;
  v.line = line;
  text = trim(text);
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') fail(line, "unterminated array");
    v.is_array = true;
    const std::string_view body = trim(text.substr(1, text.size() - 2));
    if (body.empty()) return v;
    bool quoted = false;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= body.size(); ++i) {
      if (i < body.size() && quoted && body[i] == '\\') {
        ++i;
        continue;
      }
      if (i < body.size() && body[i] == '"') quoted = !quoted;
      if (i == body.size() || (body[i] == ',' && !quoted)) {
        const auto item = trim(body.substr(start, i - start));
        // A trailing comma is allowed.
        if (!(item.empty() && i == body.size() && !v.items.empty())) v.items.push_back(unquote(item, line));
        start = i + 1;
      }
    }
    if (quoted) fail(line, "unterminated string");
    return v;
  }
  v.items.push_back(unquote(text, line));
  return v;
}

using Section = std::map<std::string, Value>;
using Document = std::map<std::string, Section>;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"dataset", {"source", "path", "label_column", "n_instances", "drift_points", "concepts", "noise", "seed"}},
      {"experiment", {"batch_size", "strategies", "metric"}},
      {"budget", {"max_candidates", "max_seconds", "validation_fraction", "seed"}},
      {"detector", {"window", "delta"}},
      {"ensemble", {"rounds"}},
      {"adaptation", {"add_new_candidates", "validation_cap"}},
      {"portfolio", {"configs"}},
  };
  return keys;
}

Document parse_document(std::string_view text) {
  Document doc;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = std::string(trim(strip_comment(raw)));
    if (line.empty()) continue;
    if (line.front() == '[' && line.find('=') == std::string::npos) {
      if (line.back() != ']') fail(line_no, "malformed section header");
      section = std::string(trim(std::string_view(line).substr(1, line.size() - 2)));
      if (!known_keys().contains(section)) fail(line_no, "unknown section [" + section + "]");
      if (doc.contains(section)) fail(line_no, "duplicate section [" + section + "]");
      doc[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
    if (section.empty()) fail(line_no, "key outside of any section");
    const std::string key{trim(std::string_view(line).substr(0, eq))};
    if (key.empty()) fail(line_no, "missing key");
    if (!known_keys().at(section).contains(key)) fail(line_no, "unknown key '" + key + "' in [" + section + "]");
    std::string rhs{trim(std::string_view(line).substr(eq + 1))};
    const std::size_t key_line = line_no;
    // Arrays may continue over several lines.
    if (!rhs.empty() && rhs.front() == '[') {
      while (rhs.back() != ']') {
        if (!std::getline(in, raw)) fail(key_line, "unterminated array");
        ++line_no;
        const std::string more{trim(strip_comment(raw))};
        if (!more.empty()) rhs += " " + more;
      }
    }
    auto& sec = doc[section];
    if (sec.contains(key)) fail(key_line, "duplicate key '" + key + "'");
    sec.emplace(key, parse_value(rhs, key_line));
  }
  return doc;
}

const std::string& scalar(const Value& v) {
  if (v.is_array || v.items.size() != 1) fail(v.line, "expected a single value");
  return v.items.front();
}

template <class T>
T parse_number(const std::string& s, std::size_t line) {
  T out{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{} || p != s.data() + s.size()) fail(line, "invalid number '" + s + "'");
  return out;
}

std::size_t as_count(const Value& v) { return parse_number<std::size_t>(scalar(v), v.line); }
std::uint64_t as_u64(const Value& v) { return parse_number<std::uint64_t>(scalar(v), v.line); }
double as_double(const Value& v) { return parse_number<double>(scalar(v), v.line); }

std::vector<std::string> as_list(const Value& v) {
  if (!v.is_array) fail(v.line, "expected an array [..]");
  return v.items;
}

ConceptSpec parse_concept(const std::string& s, std::size_t line) {
  static const std::map<std::string, ConceptSpec> names = {
      {"c1", {1, false}}, {"c2", {2, false}}, {"c3", {3, false}},
      {"c1-inverted", {1, true}}, {"c2-inverted", {2, true}}, {"c3-inverted", {3, true}},
  };
  const auto it = names.find(s);
  if (it == names.end()) fail(line, "unknown concept '" + s + "' (expected c1..c3, optionally with -inverted)");
  return it->second;
}

std::string concept_text(const ConceptSpec& c) {
  return "c" + std::to_string(c.concept_id) + (c.inverted ? "-inverted" : "");
}

std::string number_text(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

template <class F>
void with(const Section& sec, const std::string& key, F&& f) {
  const auto it = sec.find(key);
  if (it != sec.end()) f(it->second);
}

// Runs a validator and reattaches the key's line to its message.
template <class F>
void checked(std::size_t line, F&& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    if (what.rfind("line ", 0) == 0) throw;
    fail(line, what);
  } catch (const std::exception& e) {
    fail(line, e.what());
  }
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view text) {
  const Document doc = parse_document(text);
  static const Section empty;
  auto section = [&](const std::string& name) -> const Section& {
    const auto it = doc.find(name);
    return it == doc.end() ? empty : it->second;
  };

  ExperimentConfig cfg;
  const Section& ds = section("dataset");
  std::size_t source_line = 0;
  with(ds, "source", [&](const Value& v) {
    source_line = v.line;
    const auto& s = scalar(v);
    if (s == "stagger") cfg.dataset.kind = DatasetSource::Kind::Stagger;
    else if (s == "csv") cfg.dataset.kind = DatasetSource::Kind::Csv;
    else fail(v.line, "unknown dataset source '" + s + "' (expected stagger or csv)");
  });
  const bool stagger = cfg.dataset.kind == DatasetSource::Kind::Stagger;
  with(ds, "path", [&](const Value& v) { cfg.dataset.path = scalar(v); });
  with(ds, "label_column", [&](const Value& v) { cfg.dataset.label_column = scalar(v); });
  if (!stagger && cfg.dataset.path.empty()) fail(source_line, "csv source requires 'path'");
  if (stagger && ds.contains("path")) fail(ds.at("path").line, "'path' only applies to csv sources");

  auto& sc = cfg.dataset.stagger;
  std::size_t stagger_line = source_line;
  with(ds, "n_instances", [&](const Value& v) {
    // Rescale the default schedule unless drift points are given explicitly.
    sc = default_stagger_config(as_count(v), sc.seed);
    stagger_line = v.line;
  });
  with(ds, "seed", [&](const Value& v) { sc.seed = as_u64(v); });
  with(ds, "noise", [&](const Value& v) { sc.noise_rate = as_double(v); });
  with(ds, "drift_points", [&](const Value& v) {
    sc.drift_points.clear();
    for (const auto& s : as_list(v)) sc.drift_points.push_back(parse_number<std::size_t>(s, v.line));
    stagger_line = v.line;
  });
  with(ds, "concepts", [&](const Value& v) {
    sc.concept_schedule.clear();
    for (const auto& s : as_list(v)) sc.concept_schedule.push_back(parse_concept(s, v.line));
    stagger_line = v.line;
  });
  if (!stagger) {
    for (const char* k : {"n_instances", "seed", "noise", "drift_points", "concepts"})
      if (ds.contains(k)) fail(ds.at(k).line, std::string("'") + k + "' only applies to stagger sources");
  }
  if (stagger) checked(stagger_line, [&] { sc.validate(); });

  const Section& ex = section("experiment");
  cfg.batch_size = stagger ? kDefaultStaggerBatchSize : kDefaultCsvBatchSize;
  with(ex, "batch_size", [&](const Value& v) {
    cfg.batch_size = as_count(v);
    if (cfg.batch_size == 0) fail(v.line, "batch_size must be positive");
  });
  with(ex, "strategies", [&](const Value& v) {
    cfg.strategies.clear();
    for (const auto& s : as_list(v)) {
      Strategy st{};
      checked(v.line, [&] { st = parse_strategy(s); });
      for (auto existing : cfg.strategies)
        if (existing == st) fail(v.line, "strategy '" + s + "' listed twice");
      cfg.strategies.push_back(st);
    }
    if (cfg.strategies.empty()) fail(v.line, "at least one strategy is required");
  });
  with(ex, "metric", [&](const Value& v) { checked(v.line, [&] { cfg.metric = parse_metric(scalar(v)); }); });

  const Section& bu = section("budget");
  std::size_t budget_line = 0;
  with(bu, "max_candidates", [&](const Value& v) { cfg.budget.max_candidates = as_count(v); budget_line = v.line; });
  with(bu, "max_seconds", [&](const Value& v) {
    const auto& s = scalar(v);
    cfg.budget.max_seconds = s == "none" ? std::nullopt : std::optional<double>(as_double(v));
    budget_line = v.line;
  });
  with(bu, "validation_fraction", [&](const Value& v) {
    cfg.budget.validation_fraction = as_double(v);
    budget_line = v.line;
  });
  with(bu, "seed", [&](const Value& v) { cfg.budget.seed = as_u64(v); });
  cfg.budget.metric = cfg.metric;
  checked(budget_line, [&] { cfg.budget.validate(); });

  const Section& de = section("detector");
  with(de, "window", [&](const Value& v) {
    cfg.detector.window = as_count(v);
    if (cfg.detector.window == 0) fail(v.line, "window must be positive");
  });
  with(de, "delta", [&](const Value& v) {
    cfg.detector.delta = as_double(v);
    if (!(cfg.detector.delta > 0.0 && cfg.detector.delta < 1.0)) fail(v.line, "delta must be in (0, 1)");
  });

  with(section("ensemble"), "rounds", [&](const Value& v) {
    cfg.ensemble_rounds = as_count(v);
    if (cfg.ensemble_rounds == 0) fail(v.line, "rounds must be positive");
  });

  const Section& ad = section("adaptation");
  with(ad, "add_new_candidates", [&](const Value& v) { cfg.add_new_candidates = as_count(v); });
  with(ad, "validation_cap", [&](const Value& v) {
    cfg.validation_cap = as_count(v);
    if (cfg.validation_cap < 2) fail(v.line, "validation_cap must be at least 2");
  });

  with(section("portfolio"), "configs", [&](const Value& v) {
    cfg.portfolio.clear();
    for (const auto& s : as_list(v)) checked(v.line, [&] { cfg.portfolio.push_back(parse_pipeline_config(s)); });
    if (cfg.portfolio.empty()) fail(v.line, "portfolio must not be empty");
  });
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_experiment_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ":" + e.what());
  }
}

std::string to_text(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "[dataset]\n";
  if (c.dataset.kind == DatasetSource::Kind::Stagger) {
    const auto& s = c.dataset.stagger;
    os << "source = stagger\n";
    os << "label_column = " << quoted(c.dataset.label_column) << '\n';
    os << "n_instances = " << s.n_instances << '\n';
    os << "drift_points = [";
    for (std::size_t i = 0; i < s.drift_points.size(); ++i) os << (i ? ", " : "") << s.drift_points[i];
    os << "]\nconcepts = [";
    for (std::size_t i = 0; i < s.concept_schedule.size(); ++i)
      os << (i ? ", " : "") << quoted(concept_text(s.concept_schedule[i]));
    os << "]\nnoise = " << number_text(s.noise_rate) << '\n';
    os << "seed = " << s.seed << '\n';
  } else {
    os << "source = csv\n";
    os << "path = " << quoted(c.dataset.path) << '\n';
    os << "label_column = " << quoted(c.dataset.label_column) << '\n';
  }
  os << "\n[experiment]\nbatch_size = " << c.batch_size << "\nstrategies = [";
  for (std::size_t i = 0; i < c.strategies.size(); ++i) os << (i ? ", " : "") << quoted(std::string(strategy_name(c.strategies[i])));
  os << "]\nmetric = " << metric_name(c.metric) << '\n';
  os << "\n[budget]\nmax_candidates = " << c.budget.max_candidates << '\n';
  os << "max_seconds = " << (c.budget.max_seconds ? number_text(*c.budget.max_seconds) : "none") << '\n';
  os << "validation_fraction = " << number_text(c.budget.validation_fraction) << '\n';
  os << "seed = " << c.budget.seed << '\n';
  os << "\n[detector]\nwindow = " << c.detector.window << "\ndelta = " << number_text(c.detector.delta) << '\n';
  os << "\n[ensemble]\nrounds = " << c.ensemble_rounds << '\n';
  os << "\n[adaptation]\nadd_new_candidates = " << c.add_new_candidates << "\nvalidation_cap = " << c.validation_cap
     << '\n';
  os << "\n[portfolio]\nconfigs = [\n";
  for (const auto& p : c.portfolio) os << "  " << quoted(to_text(p)) << ",\n";
  os << "]\n";
  return os.str();
}

LifelongOptions options_for(const ExperimentConfig& c, Strategy strategy) {
  LifelongOptions o;
  o.strategy = strategy;
  o.metric = c.metric;
  o.budget = c.budget;
  o.budget.metric = c.metric;
  o.detector = c.detector;
  o.ensemble_rounds = c.ensemble_rounds;
  o.add_new_candidates = c.add_new_candidates;
  o.validation_cap = c.validation_cap;
  o.portfolio = c.portfolio;
  return o;
}

std::vector<Batch> load_stream(const ExperimentConfig& c) {
  Batch data;
  if (c.dataset.kind == DatasetSource::Kind::Stagger) {
    data = generate_stagger(c.dataset.stagger);
  } else {
    data = load_csv(c.dataset.path, std::nullopt, c.dataset.label_column).batch;
  }
  if (data.empty()) throw DataError("dataset is empty");
  return split_stream(data, c.batch_size);
}

ExperimentResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  const std::vector<Batch> batches = load_stream(config);
  const Batch& train = batches.front();
  const std::span<const Batch> tests(batches.data() + 1, batches.size() - 1);
  spdlog::info("stream: {} batches of up to {} instances ({} test batches)", batches.size(), config.batch_size,
               tests.size());

  // Strategy arms share nothing but the read-only stream.
  std::vector<std::future<RunReport>> arms;
  for (auto s : config.strategies) {
    arms.push_back(std::async(std::launch::async, [&, s] {
      spdlog::info("starting {}", strategy_name(s));
      auto r = run_lifelong(train, tests, options_for(config, s));
      spdlog::info("{}: mean {} = {:.4f}, {} drift events", strategy_name(s), metric_name(r.metric), r.mean_metric,
                   r.drift_events.size());
      return r;
    }));
  }
  ExperimentResult result;
  for (auto& f : arms) result.reports.push_back(f.get());
  write_run_reports(out_dir, result.reports, to_text(config));
  return result;
}

}  // namespace driftml
