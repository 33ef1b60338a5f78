// Copyright 2026 The soundsieve Authors
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

#include "soundsieve/explainer.hpp"

#include "soundsieve/classifier.hpp"
#include "soundsieve/model_io.hpp"
#include "soundsieve/random.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace soundsieve {

double GlobalImportance::at(int position) const {
  if (position < 0 || position >= size()) {
    return 0.0;
  }
  return mean_score[static_cast<std::size_t>(position)];
}

std::vector<SegmentMask> perturb(int n_segments, int n_aug, double keep_prob, std::uint64_t seed) {
  if (n_segments < 1 || n_aug < 1) {
    throw std::invalid_argument("perturb needs at least one segment and one augmentation");
  }
  if (!(keep_prob > 0.0) || keep_prob > 1.0) {
    throw std::invalid_argument("keep_prob must lie in (0, 1]");
  }
  Rng rng(seed);
  std::vector<SegmentMask> masks;
  masks.reserve(static_cast<std::size_t>(n_aug));
  std::vector<bool> bits(static_cast<std::size_t>(n_segments));
  while (static_cast<int>(masks.size()) < n_aug) {
    bool any = false;
    for (std::size_t i = 0; i < bits.size(); ++i) {
      bits[i] = rng.bernoulli(keep_prob);
      any = any || bits[i];
    }
    if (any) {
      masks.emplace_back(bits);
    }
  }
  return masks;
}

double locality_weight(const SegmentMask& mask, double sigma) {
  const int k = mask.count();
  if (k == 0) {
    throw std::invalid_argument("locality weight undefined for an empty mask");
  }
  const double cos_sim = std::sqrt(static_cast<double>(k) / mask.size());
  const double d = 1.0 - cos_sim;
  return std::exp(-(d * d) / (sigma * sigma));
}

RidgeSolution solve_weighted_ridge(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets,
                                   const Eigen::VectorXd& weights, double lambda) {
  const Eigen::Index rows = features.rows();
  const Eigen::Index p = features.cols();
  if (targets.size() != rows || weights.size() != rows) {
    throw std::invalid_argument("ridge: features, targets and weights disagree in length");
  }
  if (lambda < 0.0) {
    throw std::invalid_argument("ridge: lambda must be non-negative");
  }
  Eigen::MatrixXd design(rows, p + 1);
  design.leftCols(p) = features;
  design.col(p).setOnes();

  const Eigen::MatrixXd weighted = weights.asDiagonal() * design;
  Eigen::MatrixXd normal = design.transpose() * weighted;
  normal.diagonal().head(p).array() += lambda;
  const Eigen::VectorXd rhs = weighted.transpose() * targets;

  const Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
  const Eigen::VectorXd pivots = ldlt.vectorD().cwiseAbs();
  if (ldlt.info() != Eigen::Success || !(pivots.minCoeff() > 1e-12 * pivots.maxCoeff()) ||
      !(ldlt.rcond() > 1e-13)) {
    throw std::runtime_error("ridge: normal equations are singular (set lambda > 0)");
  }
  const Eigen::VectorXd beta = ldlt.solve(rhs);
  return {beta.head(p), beta(p)};
}

RidgeSolution fit_surrogate(const std::vector<Perturbation>& perturbations, double lambda) {
  if (perturbations.empty()) {
    throw std::invalid_argument("no perturbations to fit");
  }
  const int n = perturbations.front().mask.size();
  const auto rows = static_cast<Eigen::Index>(perturbations.size());
  Eigen::MatrixXd x(rows, n);
  Eigen::VectorXd y(rows);
  Eigen::VectorXd w(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Perturbation& pr = perturbations[static_cast<std::size_t>(r)];
    if (pr.mask.size() != n) {
      throw std::invalid_argument("perturbation masks differ in length");
    }
    for (int c = 0; c < n; ++c) {
      x(r, c) = pr.mask[c] ? 1.0 : 0.0;
    }
    y(r) = pr.classifier_output;
    w(r) = pr.weight;
  }
  return solve_weighted_ridge(x, y, w, lambda);
}

std::vector<double> normalize_scores(const std::vector<double>& raw, double reference_scale) {
  double peak = 0.0;
  for (double v : raw) {
    peak = std::max(peak, std::abs(v));
  }
  std::vector<double> out(raw.size(), 0.0);
  if (peak == 0.0 || peak <= 1e-9 * std::abs(reference_scale)) {
    return out;
  }
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out[i] = raw[i] / peak;
  }
  return out;
}

ImportanceVector fit_local(const AnalyzedClip& clip, const PerturbationScorer& scorer,
                           const ExplainerConfig& cfg, std::uint64_t seed) {
  const int n = clip.n_segments();
  if (n < 2) {
    throw std::invalid_argument("clip '" + clip.clip_id + "' needs at least 2 segments to explain");
  }
  const auto masks = perturb(n, cfg.n_aug, cfg.keep_prob, seed);
  std::vector<Perturbation> perturbations;
  perturbations.reserve(masks.size());
  double scale = 0.0;
  for (const auto& mask : masks) {
    Perturbation p;
    p.mask = mask;
    p.classifier_output = mask.all_set() ? scorer(clip.mel, mask)
                                         : scorer(impute(clip.mel, mask, clip.view), mask);
    if (!std::isfinite(p.classifier_output)) {
      throw std::runtime_error("clip '" + clip.clip_id + "': non-finite classifier output");
    }
    p.weight = locality_weight(mask, cfg.sigma);
    scale = std::max(scale, std::abs(p.classifier_output));
    perturbations.push_back(std::move(p));
  }
  const RidgeSolution sol = fit_surrogate(perturbations, cfg.lambda);
  const std::vector<double> raw(sol.coefficients.data(),
                                sol.coefficients.data() + sol.coefficients.size());
  return {clip.clip_id, normalize_scores(raw, scale)};
}

ImportanceVector fit_local(const AnalyzedClip& clip, const ClassifierModel& classifier,
                           const ExplainerConfig& cfg, std::uint64_t seed) {
  if (!clip.label) {
    throw std::invalid_argument("clip '" + clip.clip_id + "' has no label to explain");
  }
  const int label = *clip.label;
  return fit_local(
      clip,
      [&](const Spectrogram& imputed, const SegmentMask&) {
        return true_class_score(classifier, imputed, label);
      },
      cfg, seed);
}

GlobalImportance aggregate_global(const std::vector<ImportanceVector>& importances) {
  if (importances.empty()) {
    throw std::invalid_argument("cannot aggregate an empty set of importance vectors");
  }
  std::size_t longest = 0;
  for (const auto& iv : importances) {
    longest = std::max(longest, iv.scores.size());
  }
  GlobalImportance g;
  g.mean_score.assign(longest, 0.0);
  g.support_count.assign(longest, 0);
  for (const auto& iv : importances) {
    for (std::size_t i = 0; i < iv.scores.size(); ++i) {
      g.mean_score[i] += iv.scores[i];
      ++g.support_count[i];
    }
  }
  for (std::size_t i = 0; i < longest; ++i) {
    g.mean_score[i] /= g.support_count[i];
  }
  return g;
}

double score_percentile(const std::vector<ImportanceVector>& importances, double fraction) {
  std::vector<double> all;
  for (const auto& iv : importances) {
    all.insert(all.end(), iv.scores.begin(), iv.scores.end());
  }
  if (all.empty()) {
    throw std::invalid_argument("no scores for percentile");
  }
  std::sort(all.begin(), all.end());
  const double pos = std::clamp(fraction, 0.0, 1.0) * static_cast<double>(all.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, all.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return (1.0 - frac) * all[lo] + frac * all[hi];
}

void write_importance_csv(const std::filesystem::path& path,
                          const std::vector<ImportanceVector>& importances) {
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  os << "clip_id,position,score\n";
  for (const auto& iv : importances) {
    for (std::size_t i = 0; i < iv.scores.size(); ++i) {
      os << iv.clip_id << ',' << i << ',' << format_double(iv.scores[i]) << '\n';
    }
  }
}

std::vector<ImportanceVector> read_importance_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) {
    throw std::runtime_error("cannot open " + path.string());
  }
  std::string line;
  if (!std::getline(is, line) || line != "clip_id,position,score") {
    throw std::runtime_error(path.string() + ": expected header clip_id,position,score");
  }
  std::vector<ImportanceVector> out;
  std::map<std::string, std::size_t> index;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    std::istringstream ls(line);
    std::string id, pos_s, score_s;
    if (!std::getline(ls, id, ',') || !std::getline(ls, pos_s, ',') || !std::getline(ls, score_s)) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": malformed row");
    }
    auto [it, inserted] = index.try_emplace(id, out.size());
    if (inserted) {
      out.push_back({id, {}});
    }
    ImportanceVector& iv = out[it->second];
    const auto pos = static_cast<std::size_t>(std::stoul(pos_s));
    if (pos != iv.scores.size()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": positions for '" + id + "' are not contiguous");
    }
    iv.scores.push_back(std::stod(score_s));
  }
  return out;
}

void write_global_csv(const std::filesystem::path& path, const GlobalImportance& global) {
  write_importance_csv(path, {{"global", global.mean_score}});
}

}  // namespace soundsieve
