#include <algorithm>
#include <random>

#include "xclone/errors.hpp"
#include "xclone/eval.hpp"
#include "xclone/parallel.hpp"

namespace xclone::eval {

std::vector<Fold> stratified_kfold(const std::vector<Label>& labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorKind::kUsage, "k must be at least 2");
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i] == Label::kClone ? 0 : 1].push_back(i);
  for (const auto& members : by_class) {
    if (members.size() < k) throw TooFewPerClass(members.size(), k);
  }

  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> test(k);
  std::size_t fold = 0;
  for (auto& members : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t idx : members) {
      test[fold].push_back(idx);
      fold = (fold + 1) % k;
    }
  }

  std::vector<Fold> folds(k);
  for (std::size_t f = 0; f < k; ++f) {
    std::sort(test[f].begin(), test[f].end());
    std::vector<bool> in_test(labels.size(), false);
    for (std::size_t idx : test[f]) in_test[idx] = true;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (!in_test[i]) folds[f].train.push_back(i);
    }
    folds[f].test = std::move(test[f]);
  }
  return folds;
}

CvResult cross_validate(const Benchmark& pairs, const detectors::SnippetEmbeddings& embeddings,
                        const ml::LearnerSpec& spec, std::size_t k, std::uint64_t seed, std::size_t workers) {
  std::vector<ml::Vector> features;
  std::vector<int> signs;
  std::vector<Label> labels;
  features.reserve(pairs.size());
  for (const auto& p : pairs) {
    features.push_back(detectors::pair_features(p, embeddings));
    labels.push_back(p.label);
    signs.push_back(to_sign(p.label));
  }
  const auto folds = stratified_kfold(labels, k, seed);
  const std::string backend = "classifier(" + spec.describe() + ")";

  std::vector<detectors::Prediction> predictions(pairs.size());
  parallel_for(folds.size(), workers, [&](std::size_t f) {
    const auto& fold = folds[f];
    std::vector<ml::Vector> xs;
    std::vector<int> ys;
    xs.reserve(fold.train.size());
    for (std::size_t i : fold.train) {
      xs.push_back(features[i]);
      ys.push_back(signs[i]);
    }
    const auto model = ml::train_learner(spec, xs, ys);
    // Each index lives in exactly one test fold, so writes never collide.
    for (std::size_t i : fold.test) {
      const auto out = ml::predict(model, features[i]);
      auto& p = predictions[i];
      p.pair_id = pairs[i].pair_id;
      p.backend = backend;
      p.predicted = from_sign(out.label);
      p.raw_score = out.margin;
    }
  });

  CvResult r;
  r.report = compute_metrics(predictions, pairs);
  r.predictions = std::move(predictions);
  return r;
}

}  // namespace xclone::eval
