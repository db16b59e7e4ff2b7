#include "driftml/ensemble.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace driftml {

namespace {

bool better(double candidate, double incumbent) {
  if (std::isnan(candidate)) return false;
  return std::isnan(incumbent) || candidate > incumbent;
}

void check_refs(const EnsembleModel& ens, const ModelLibrary& lib) {
  if (ens.member_refs.empty()) throw EnsembleError("ensemble has no members");
  for (auto r : ens.member_refs)
    if (r >= lib.size()) throw EnsembleError("ensemble references member " + std::to_string(r) + " of a library of " +
                                             std::to_string(lib.size()));
}

template <class Rows>
Matrix weighted_sum(const EnsembleModel& ens, Rows&& member_proba) {
  Matrix out;
  for (std::size_t i = 0; i < ens.member_refs.size(); ++i) {
    const Matrix& p = member_proba(ens.member_refs[i]);
    if (i == 0) out = Matrix(p.rows(), p.cols(), 0.0);
    const double w = ens.weights[i];
    auto& dst = out.data();
    const auto& src = p.data();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += w * src[k];
  }
  return out;
}

}  // namespace

EnsembleModel ensemble_from_trace(std::vector<std::size_t> trace) {
  if (trace.empty()) throw EnsembleError("empty selection trace");
  std::map<std::size_t, std::size_t> counts;
  for (auto i : trace) ++counts[i];
  EnsembleModel ens;
  ens.rounds = trace.size();
  for (auto [idx, n] : counts) {
    ens.member_refs.push_back(idx);
    ens.weights.push_back(static_cast<double>(n) / static_cast<double>(ens.rounds));
  }
  ens.selection_trace = std::move(trace);
  return ens;
}

std::vector<std::size_t> greedy_trace(const ModelLibrary& lib, std::size_t rounds, Metric metric) {
  if (lib.empty()) throw EnsembleError("cannot select an ensemble from an empty library");
  if (rounds < 1) throw EnsembleError("rounds must be at least 1");
  const auto& labels = lib.validation_labels;
  const Matrix& first = lib.members.front().validation_proba;
  Matrix running(first.rows(), first.cols(), 0.0);
  Matrix candidate(first.rows(), first.cols(), 0.0);

  std::vector<std::size_t> trace;
  for (std::size_t t = 1; t <= rounds; ++t) {
    const double denom = static_cast<double>(t);
    std::size_t pick = 0;
    double pick_score = kUndefinedScore;
    for (std::size_t i = 0; i < lib.size(); ++i) {
      const auto& p = lib.members[i].validation_proba.data();
      auto& c = candidate.data();
      const auto& s = running.data();
      for (std::size_t k = 0; k < c.size(); ++k) c[k] = (s[k] + p[k]) / denom;
      const double sc = score(metric, labels, candidate);
      if (i == 0 || better(sc, pick_score)) {
        pick = i;
        pick_score = sc;
      }
    }
    trace.push_back(pick);
    const auto& p = lib.members[pick].validation_proba.data();
    auto& s = running.data();
    for (std::size_t k = 0; k < s.size(); ++k) s[k] += p[k];
  }
  return trace;
}

EnsembleModel select_ensemble(const ModelLibrary& lib, std::size_t rounds, Metric metric) {
  const auto trace = greedy_trace(lib, rounds, metric);
  const auto& labels = lib.validation_labels;

  // Prefixes are compared on the same weighted form used for prediction.
  EnsembleModel best;
  for (std::size_t len = 1; len <= trace.size(); ++len) {
    auto ens = ensemble_from_trace({trace.begin(), trace.begin() + static_cast<std::ptrdiff_t>(len)});
    ens.validation_score = score(metric, labels, ensemble_validation_proba(ens, lib));
    if (len == 1 || better(ens.validation_score, best.validation_score)) best = std::move(ens);
  }
  return best;
}

Matrix ensemble_validation_proba(const EnsembleModel& ens, const ModelLibrary& lib) {
  check_refs(ens, lib);
  return weighted_sum(ens, [&lib](std::size_t i) -> const Matrix& { return lib.members[i].validation_proba; });
}

Matrix ensemble_predict_proba(const EnsembleModel& ens, const ModelLibrary& lib, const Batch& batch) {
  check_refs(ens, lib);
  std::vector<Matrix> per_member(lib.size());
  for (auto r : ens.member_refs) per_member[r] = predict_proba(*lib.members[r].model, batch);
  return weighted_sum(ens, [&per_member](std::size_t i) -> const Matrix& { return per_member[i]; });
}

std::vector<int> ensemble_predict(const EnsembleModel& ens, const ModelLibrary& lib, const Batch& batch) {
  return argmax_rows(ensemble_predict_proba(ens, lib, batch));
}

std::string ensemble_summary(const EnsembleModel& ens, const ModelLibrary& lib) {
  std::ostringstream os;
  char buf[32];
  for (std::size_t i = 0; i < ens.member_refs.size(); ++i) {
    const auto r = ens.member_refs[i];
    std::snprintf(buf, sizeof buf, "%.4f", ens.weights[i]);
    os << r << '\t' << buf << '\t' << (r < lib.size() ? to_text(lib.members[r].model->config()) : "?") << '\n';
  }
  return os.str();
}

}  // namespace driftml
