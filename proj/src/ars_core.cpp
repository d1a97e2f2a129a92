#include "arsq/ars_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace arsq {

void normalizer_observe(NormalizerStats& stats, const Eigen::VectorXd& x) {
  if (stats.dim() == 0) {
    stats.mean = Eigen::VectorXd::Zero(x.size());
    stats.m2 = Eigen::VectorXd::Zero(x.size());
  }
  if (x.size() != stats.mean.size())
    throw std::invalid_argument("normalizer_observe: dimension mismatch");
  stats.count += 1;
  const Eigen::VectorXd delta = x - stats.mean;
  stats.mean += delta / static_cast<double>(stats.count);
  stats.m2 += delta.cwiseProduct(x - stats.mean);
}

void normalizer_merge(NormalizerStats& into, const NormalizerStats& other) {
  if (other.count == 0) return;
  if (into.count == 0) {
    into = other;
    return;
  }
  if (into.mean.size() != other.mean.size())
    throw std::invalid_argument("normalizer_merge: dimension mismatch");
  const double na = static_cast<double>(into.count);
  const double nb = static_cast<double>(other.count);
  const double n = na + nb;
  const Eigen::VectorXd delta = other.mean - into.mean;
  into.mean += delta * (nb / n);
  into.m2 += other.m2 + delta.cwiseProduct(delta) * (na * nb / n);
  into.count += other.count;
}

FrozenNormalizer freeze(const NormalizerStats& stats) {
  FrozenNormalizer f;
  f.count = stats.count;
  if (stats.count == 0) {
    f.mean = stats.mean;
    f.variance = Eigen::VectorXd::Ones(stats.mean.size());
    return f;
  }
  f.mean = stats.mean;
  f.variance = stats.m2 / static_cast<double>(stats.count);
  return f;
}

Eigen::VectorXd normalize(const Eigen::VectorXd& x,
                          const FrozenNormalizer& stats) {
  if (stats.count == 0) return x;
  if (x.size() != stats.mean.size())
    throw std::invalid_argument("normalize: dimension mismatch");
  return (x - stats.mean).cwiseQuotient(
      stats.variance.cwiseMax(kVarianceFloor).cwiseSqrt());
}

Eigen::VectorXd normalize(const Eigen::VectorXd& x,
                          const NormalizerStats& stats) {
  return normalize(x, freeze(stats));
}

Eigen::VectorXd policy_action(const Eigen::MatrixXd& m,
                              const Eigen::MatrixXd* delta, int sign,
                              double noise_std, const FrozenNormalizer& stats,
                              const Eigen::VectorXd& x) {
  if (x.size() != m.cols())
    throw std::invalid_argument("policy_action: state dimension mismatch");
  if (sign != 0 && delta == nullptr)
    throw std::invalid_argument("policy_action: perturbed policy needs delta");
  if (delta != nullptr &&
      (delta->rows() != m.rows() || delta->cols() != m.cols()))
    throw std::invalid_argument("policy_action: delta dimension mismatch");

  const Eigen::VectorXd z = normalize(x, stats);
  if (sign == 0) return m * z;
  return (m + static_cast<double>(sign) * noise_std * (*delta)) * z;
}

DirectionBatch sample_directions(const NoiseTable& table, SplitMix64& rng,
                                 int num_directions, int rows, int cols) {
  const std::size_t block = static_cast<std::size_t>(rows) * cols;
  if (table.size() < block)
    throw std::invalid_argument("sample_directions: noise table too small");

  DirectionBatch batch;
  batch.deltas.reserve(num_directions);
  batch.noise_offsets.reserve(num_directions);
  batch.rewards_plus.assign(num_directions, 0.0);
  batch.rewards_minus.assign(num_directions, 0.0);

  const std::uint64_t span = table.size() - block + 1;
  for (int k = 0; k < num_directions; ++k) {
    const std::uint64_t offset = rng.next_below(span);
    Eigen::MatrixXd delta(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        delta(r, c) = table[offset + static_cast<std::size_t>(r) * cols + c];
    batch.deltas.push_back(std::move(delta));
    batch.noise_offsets.push_back(offset);
  }
  return batch;
}

std::vector<DirectionReward> select_top(const DirectionBatch& batch,
                                        int top_count) {
  const int n = batch.size();
  if (top_count < 1 || top_count > n)
    throw std::invalid_argument("select_top: top_count out of range");

  std::vector<DirectionReward> all;
  all.reserve(n);
  for (int k = 0; k < n; ++k)
    all.push_back({k, batch.rewards_plus[k], batch.rewards_minus[k]});

  std::stable_sort(all.begin(), all.end(),
                   [](const DirectionReward& a, const DirectionReward& b) {
                     return std::max(a.reward_plus, a.reward_minus) >
                            std::max(b.reward_plus, b.reward_minus);
                   });
  all.resize(top_count);
  return all;
}

double retained_reward_std(const std::vector<DirectionReward>& top) {
  std::vector<DirectionReward> ordered = top;
  std::sort(ordered.begin(), ordered.end(),
            [](const DirectionReward& a, const DirectionReward& b) {
              return a.index < b.index;
            });
  const double n = 2.0 * static_cast<double>(ordered.size());
  double sum = 0.0;
  for (const auto& t : ordered) {
    sum += t.reward_plus;
    sum += t.reward_minus;
  }
  const double mean = sum / n;
  double ss = 0.0;
  for (const auto& t : ordered) {
    ss += (t.reward_plus - mean) * (t.reward_plus - mean);
    ss += (t.reward_minus - mean) * (t.reward_minus - mean);
  }
  return std::sqrt(ss / n);
}

Eigen::MatrixXd ars_update(const Eigen::MatrixXd& m,
                           const DirectionBatch& batch,
                           const std::vector<DirectionReward>& top,
                           double step_size) {
  if (top.empty()) throw std::invalid_argument("ars_update: empty selection");
  const double sigma = retained_reward_std(top);
  if (sigma < kSigmaRewardEps) return m;

  std::vector<DirectionReward> ordered = top;
  std::sort(ordered.begin(), ordered.end(),
            [](const DirectionReward& a, const DirectionReward& b) {
              return a.index < b.index;
            });

  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  for (const auto& t : ordered)
    acc += (t.reward_plus - t.reward_minus) * batch.deltas[t.index];

  const double scale =
      step_size / (static_cast<double>(top.size()) * sigma);
  return m + scale * acc;
}

void ArsHyperparams::validate() const {
  const bool ok = step_size > 0.0 && noise_std > 0.0 && num_directions >= 1 &&
                  top_directions >= 1 && top_directions <= num_directions &&
                  num_iterations >= 0 && episode_length >= 1;
  if (!ok) throw std::invalid_argument("ArsHyperparams: invalid values");
}

}  // namespace arsq
