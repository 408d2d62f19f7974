#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "axlesim/train_config.hpp"

namespace axlesim {

enum class VisibleKind { Gaussian, Bernoulli };

/// Restricted Boltzmann machine with sigmoid (Bernoulli) hidden units.
/// Gaussian visible units assume unit variance, so inputs must be standardized.
/// Data matrices hold one sample per row.
struct RbmLayer {
    Eigen::MatrixXd weights; // visible x hidden
    Eigen::RowVectorXd visible_bias;
    Eigen::RowVectorXd hidden_bias;
    VisibleKind visible_kind = VisibleKind::Bernoulli;

    std::size_t visible() const { return static_cast<std::size_t>(weights.rows()); }
    std::size_t hidden() const { return static_cast<std::size_t>(weights.cols()); }

    Eigen::MatrixXd hidden_probabilities(const Eigen::MatrixXd& visible) const;
    Eigen::MatrixXd visible_mean(const Eigen::MatrixXd& hidden) const;

    /// Mean per-sample error of a deterministic up-down pass: cross-entropy for
    /// Bernoulli visibles, squared error for Gaussian ones.
    double reconstruction_error(const Eigen::MatrixXd& data) const;
};

RbmLayer make_rbm(std::size_t visible, std::size_t hidden, VisibleKind kind, std::mt19937_64& rng,
                  double init_stddev = 0.01);

struct RbmSchedule {
    std::size_t epochs = 10;
    std::size_t batch_size = 32;
    double learning_rate = 0.05;
    double momentum = 0.9;
};

/// CD-1 with momentum. Throws TrainingError naming the layer and epoch on a non-finite update.
void train_rbm(RbmLayer& rbm, const Eigen::MatrixXd& data, const RbmSchedule& schedule,
               std::mt19937_64& rng, std::size_t layer_index = 0);

/// Greedy layer-wise pretraining: layer j trains on the hidden probabilities of
/// layer j-1. The first layer is Gaussian-visible, the rest Bernoulli.
std::vector<RbmLayer> pretrain_dbn(const Eigen::MatrixXd& inputs, std::span<const std::size_t> widths,
                                   const TrainConfig& cfg, std::mt19937_64& rng);

std::vector<RbmLayer> pretrain_dbn(const Eigen::MatrixXd& inputs, std::span<const std::size_t> widths,
                                   const TrainConfig& cfg);

} // namespace axlesim
