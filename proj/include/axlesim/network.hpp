#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "axlesim/dataset.hpp"
#include "axlesim/regression_metrics.hpp"
#include "axlesim/train_config.hpp"

namespace axlesim {

enum class HeadKind { LocallyConnected, Dense };

struct DenseLayer {
    Eigen::MatrixXd weights; // inputs x outputs
    Eigen::RowVectorXd bias;
};

/// Per-input standardization, plus the training range used to flag extrapolation.
struct InputScaler {
    DesignVector mean{};
    DesignVector stddev{};
    DesignVector min{};
    DesignVector max{};
};

/// Min-max map of each target onto [kLow, kHigh], inside the sigmoid range.
struct TargetScaler {
    static constexpr double kLow = 0.1;
    static constexpr double kHigh = 0.9;
    TargetVector min{};
    TargetVector max{};

    double normalize(std::size_t task, double value) const;
    double denormalize(std::size_t task, double normalized) const;
};

/// Sigmoid feedforward stack with a multitask sigmoid head.
///
/// For HeadKind::LocallyConnected each output unit sees only its window of the
/// last hidden layer; the 0/1 mask is fixed at construction. HeadKind::Dense
/// is the fully connected baseline (mask of ones).
struct MtlNetwork {
    HeadKind head_kind = HeadKind::LocallyConnected;
    std::size_t window = 0;
    std::size_t stride = 0;
    std::vector<DenseLayer> hidden;
    DenseLayer head;
    Eigen::MatrixXd head_mask; // last hidden x tasks
    InputScaler inputs;
    TargetScaler targets;

    std::size_t tasks() const { return static_cast<std::size_t>(head.weights.cols()); }
    std::vector<std::size_t> hidden_widths() const;

    /// Normalized outputs for standardized inputs (one sample per row).
    Eigen::MatrixXd forward(const Eigen::MatrixXd& standardized) const;
};

Eigen::MatrixXd make_head_mask(HeadKind kind, std::size_t last_width, std::size_t tasks, std::size_t window,
                               std::size_t stride);

InputScaler fit_input_scaler(std::span<const DatasetRow> rows);
TargetScaler fit_target_scaler(std::span<const DatasetRow> rows);

Eigen::MatrixXd standardize(const InputScaler& scaler, std::span<const DatasetRow> rows);
Eigen::MatrixXd normalize_targets(const TargetScaler& scaler, std::span<const DatasetRow> rows);

/// Parameter-shaped gradient container.
struct Gradients {
    std::vector<DenseLayer> hidden;
    DenseLayer head;
};

/// Sum over tasks of squared error, averaged over rows.
double batch_loss(const MtlNetwork& net, const Eigen::MatrixXd& standardized, const Eigen::MatrixXd& normalized);

/// Backpropagated gradient of (1 / denominator) * sum of squared errors over
/// the given rows. With denominator = rows it is the gradient of batch_loss;
/// shards of one batch pass the full batch size. Head entries outside the mask
/// are exactly zero.
Gradients loss_gradients(const MtlNetwork& net, const Eigen::MatrixXd& standardized,
                         const Eigen::MatrixXd& normalized, double denominator);

Gradients loss_gradients(const MtlNetwork& net, const Eigen::MatrixXd& standardized,
                         const Eigen::MatrixXd& normalized);

struct DatasetSplit {
    std::vector<DatasetRow> train;
    std::vector<DatasetRow> validation;
    std::vector<DatasetRow> test;
};

/// Seeded shuffle followed by a train/validation/test cut.
DatasetSplit split_dataset(std::span<const DatasetRow> rows, const TrainConfig& cfg);

/// Network with fitted scalers and seeded random weights (no pretraining).
/// Hidden layers use Glorot-uniform initialization for the dense baseline and
/// RBM-style N(0, 0.01^2) initialization when `rbm_init` is set.
MtlNetwork init_network(HeadKind kind, const Architecture& arch, const InputScaler& inputs,
                        const TargetScaler& targets, std::mt19937_64& rng, bool rbm_init);

struct EpochRecord {
    std::size_t epoch = 0;
    double train_loss = 0.0;
    RegressionReport validation;
};

struct TrainResult {
    MtlNetwork net;
    std::vector<EpochRecord> trace;
};

/// Mini-batch SGD with momentum on batch_loss. Throws TrainingError on a
/// non-finite loss, naming epoch and batch.
TrainResult fine_tune(MtlNetwork net, const DatasetSplit& split, const TrainConfig& cfg, std::mt19937_64& rng);

/// Greedy RBM pretraining of the hidden stack, locally connected head, fine-tuning.
TrainResult train_mtl_dbn_dnn(const DatasetSplit& split, const Architecture& arch, const TrainConfig& cfg);

/// Same widths and protocol with a dense head and no pretraining.
TrainResult train_baseline_dnn(const DatasetSplit& split, const Architecture& arch, const TrainConfig& cfg);

struct Prediction {
    TargetVector values{};
    bool extrapolated = false; // some input outside the training range
};

Prediction predict(const MtlNetwork& net, const DesignVector& inputs);

/// Predictions for many rows at once; same values as predict() row by row.
std::vector<TargetVector> predict_rows(const MtlNetwork& net, std::span<const DatasetRow> rows);

RegressionReport evaluate(const MtlNetwork& net, std::span<const DatasetRow> rows);

} // namespace axlesim
