#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "driftml/experiment.hpp"
#include "driftml/report.hpp"
#include "fixtures.hpp"

using namespace driftml;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("driftml_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::string error_of(const std::string& text) {
  try {
    parse_experiment_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("empty config gets the documented defaults") {
  const auto c = parse_experiment_config("");
  CHECK(c.dataset.kind == DatasetSource::Kind::Stagger);
  CHECK(c.dataset.stagger == default_stagger_config());
  CHECK(c.batch_size == 1000);
  CHECK(c.strategies.size() == 5);
  CHECK(c.metric == Metric::Accuracy);
  CHECK(c.budget.max_candidates == 16);
  CHECK(c.detector == DetectorConfig{25, 1e-7});
  CHECK(c.ensemble_rounds == 50);
  CHECK(c.validation_cap == 10000);
  CHECK(c.add_new_candidates == 8);
  CHECK(c.portfolio == default_config_portfolio());

  const auto csv = parse_experiment_config("[dataset]\nsource = csv\npath = data/electricity.csv\n");
  CHECK(csv.batch_size == 1500);
}

TEST_CASE("config text round trip reaches a fixed point") {
  const std::string text = R"(
# a comment
[experiment]
strategies = ["base", "wu-batch"]   # alias
metric = auc
batch_size = 250

[dataset]
source = stagger
n_instances = 4000
concepts = ["c2", "c3-inverted"]
drift_points = [1000]
noise = 0.05
seed = 9

[budget]
max_candidates = 5
max_seconds = 12.5
validation_fraction = 0.25

[detector]
delta = 0.001
window = 30

[portfolio]
configs = [
  "scaling=none imputation=mode one_hot=false selector=none classifier=naive_bayes laplace_alpha=0.5",
  "classifier=knn k=3 max_reference_points=512",
]
)";
  const auto c = parse_experiment_config(text);
  CHECK(c.strategies == std::vector<Strategy>{Strategy::Base, Strategy::WULatest});
  CHECK(c.metric == Metric::NormalizedAuc);
  CHECK(c.dataset.stagger.concept_schedule == std::vector<ConceptSpec>{{2, false}, {3, true}});
  CHECK(c.budget.max_seconds == 12.5);
  CHECK(c.portfolio.size() == 2);
  const auto normalized = to_text(c);
  CHECK(parse_experiment_config(normalized) == c);
  CHECK(to_text(parse_experiment_config(normalized)) == normalized);
}

TEST_CASE("config errors name the line") {
  CHECK(error_of("[dataset]\nsource = stagger\n\nbogus = 1\n").rfind("line 4:", 0) == 0);
  CHECK(error_of("[nowhere]\n").rfind("line 1:", 0) == 0);
  CHECK(error_of("x = 1\n").rfind("line 1:", 0) == 0);
  CHECK(error_of("[experiment]\nbatch_size = ten\n").rfind("line 2:", 0) == 0);
  CHECK(error_of("[experiment]\nstrategies = [\"base\", \"magic\"]\n").rfind("line 2:", 0) == 0);
  CHECK(error_of("[experiment]\nbatch_size = 1\nbatch_size = 2\n").rfind("line 3:", 0) == 0);
  CHECK(error_of("[dataset]\nsource = csv\n").rfind("line 2:", 0) == 0);
  CHECK(error_of("[dataset]\ndrift_points = [10, 5]\nconcepts = [\"c1\", \"c2\", \"c3\"]\n").find("line ") == 0);
  CHECK(error_of("[budget]\nvalidation_fraction = 2\n").rfind("line 2:", 0) == 0);
  CHECK(error_of("[detector]\ndelta = 0\n").rfind("line 2:", 0) == 0);
  CHECK(error_of("[portfolio]\nconfigs = [\"classifier=knn k=0\"]\n").rfind("line 2:", 0) == 0);
  CHECK(error_of("[experiment]\nstrategies = [\"base\"\n").rfind("line 2:", 0) == 0);
}

TEST_CASE("base-only run on a four-batch csv writes one report with four rows") {
  const auto dir = scratch("four_batches");
  {
    std::ofstream csv(dir / "data.csv");
    write_csv(csv, fixtures::linear_batch(250, 3));
  }
  const auto cfg = parse_experiment_config("[dataset]\nsource = csv\npath = \"" + (dir / "data.csv").string() +
                                           "\"\nlabel_column = y\n[experiment]\nbatch_size = 50\nstrategies = [\"base\"]\n"
                                           "[budget]\nmax_candidates = 4\n");
  const auto result = run_experiment(cfg, dir / "out");
  REQUIRE(result.reports.size() == 1);
  CHECK(result.reports[0].batches.size() == 4);
  CHECK(count_lines(slurp(dir / "out" / "base.batches.tsv")) == 5);
  CHECK(count_lines(slurp(dir / "out" / "comparison.tsv")) == 2);
  const auto report = slurp(dir / "out" / "base.report.txt");
  CHECK(report.find("config: [dataset]") != std::string::npos);
  CHECK(report.find("config: batch_size = 50") != std::string::npos);
}

TEST_CASE("comparison of all strategies: five rows, midranks, byte-identical reruns") {
  const auto dir = scratch("compare");
  const std::string text =
      "[dataset]\nn_instances = 6000\n[experiment]\nbatch_size = 500\n[budget]\nmax_candidates = 4\n[ensemble]\nrounds = 10\n";
  const auto cfg = parse_experiment_config(text);
  run_experiment(cfg, dir / "a");
  run_experiment(cfg, dir / "b");

  const auto table = slurp(dir / "a" / "comparison.tsv");
  CHECK(count_lines(table) == 6);
  std::istringstream in(table);
  std::string line;
  std::getline(in, line);
  double rank_sum = 0;
  while (std::getline(in, line)) rank_sum += std::stod(line.substr(line.rfind('\t') + 1));
  CHECK(rank_sum == 15.0);

  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    const auto name = entry.path().filename().string();
    if (name.find(".timing.") != std::string::npos) continue;
    CHECK_MESSAGE(slurp(entry.path()) == slurp(dir / "b" / name), name);
  }

  const auto delta = render_delta_table(read_batch_series(dir / "a"));
  CHECK(count_lines(delta) == 12);
}

TEST_CASE("midranks") {
  CHECK(rank_means({0.5, 0.9, 0.7}) == std::vector<double>{3, 1, 2});
  CHECK(rank_means({0.4, 0.4, 0.8, 0.1, 0.4}) == std::vector<double>{3, 3, 1, 5, 3});
  CHECK(rank_means({0.4, std::nan(""), 0.6}) == std::vector<double>{2, 3, 1});
}

TEST_CASE("delta table") {
  BatchSeries base{Strategy::Base, {1, 2, 3}, {0.5, 0.6, 0.7}};
  SUBCASE("base against base is all zeros") {
    const auto t = render_delta_table({base});
    CHECK(t == "batch\tbase\n1\t0.000000\n2\t0.000000\n3\t0.000000\n");
  }
  SUBCASE("missing base") {
    CHECK_THROWS_WITH_AS(render_delta_table({BatchSeries{Strategy::Replacement, {1}, {0.1}}}),
                         doctest::Contains("Base"), std::runtime_error);
  }
  SUBCASE("two strategies over ten batches") {
    BatchSeries b{Strategy::Base, {}, {}}, r{Strategy::Replacement, {}, {}};
    for (std::size_t i = 1; i <= 10; ++i) {
      b.batches.push_back(i);
      r.batches.push_back(i);
      b.metrics.push_back(0.5);
      r.metrics.push_back(0.5 + 0.01 * static_cast<double>(i));
    }
    const auto t = render_delta_table({b, r});
    CHECK(count_lines(t) == 11);
    std::istringstream in(t);
    std::string line;
    std::getline(in, line);
    CHECK(line == "batch\tbase\treplacement");
    std::getline(in, line);
    CHECK(line == "1\t0.000000\t0.010000");
  }
}

TEST_CASE("report directory without a base arm") {
  const auto dir = scratch("no_base");
  std::ofstream(dir / "replacement.batches.tsv") << "batch\tmetric\tdrift\tdrift_offset\tadapted\n1\t0.5\t0\t-\t0\n";
  CHECK_THROWS(render_delta_table(read_batch_series(dir)));
}

TEST_CASE("dataset problems surface as data errors") {
  auto cfg = parse_experiment_config("[dataset]\nsource = csv\npath = /nonexistent/file.csv\n");
  CHECK_THROWS_AS(load_stream(cfg), DataError);
}
