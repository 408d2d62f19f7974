#include "axlesim/rbm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "axlesim/errors.hpp"

namespace axlesim {

namespace {

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& x)
{
    return x.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

} // namespace

Eigen::MatrixXd RbmLayer::hidden_probabilities(const Eigen::MatrixXd& visible) const
{
    Eigen::MatrixXd pre = visible * weights;
    pre.rowwise() += hidden_bias;
    return sigmoid(pre);
}

Eigen::MatrixXd RbmLayer::visible_mean(const Eigen::MatrixXd& hidden) const
{
    Eigen::MatrixXd pre = hidden * weights.transpose();
    pre.rowwise() += visible_bias;
    if (visible_kind == VisibleKind::Gaussian) {
        return pre;
    }
    return sigmoid(pre);
}

double RbmLayer::reconstruction_error(const Eigen::MatrixXd& data) const
{
    const Eigen::MatrixXd recon = visible_mean(hidden_probabilities(data));
    double total = 0.0;
    if (visible_kind == VisibleKind::Gaussian) {
        total = (data - recon).squaredNorm();
    } else {
        constexpr double eps = 1e-12;
        for (Eigen::Index r = 0; r < data.rows(); ++r) {
            for (Eigen::Index c = 0; c < data.cols(); ++c) {
                const double p = std::clamp(recon(r, c), eps, 1.0 - eps);
                const double v = data(r, c);
                total -= v * std::log(p) + (1.0 - v) * std::log(1.0 - p);
            }
        }
    }
    return total / static_cast<double>(data.rows());
}

RbmLayer make_rbm(std::size_t visible, std::size_t hidden, VisibleKind kind, std::mt19937_64& rng,
                  double init_stddev)
{
    std::normal_distribution<double> normal(0.0, init_stddev);
    RbmLayer rbm;
    rbm.visible_kind = kind;
    rbm.weights.resize(static_cast<Eigen::Index>(visible), static_cast<Eigen::Index>(hidden));
    for (Eigen::Index c = 0; c < rbm.weights.cols(); ++c) {
        for (Eigen::Index r = 0; r < rbm.weights.rows(); ++r) {
            rbm.weights(r, c) = normal(rng);
        }
    }
    rbm.visible_bias = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(visible));
    rbm.hidden_bias = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(hidden));
    return rbm;
}

void train_rbm(RbmLayer& rbm, const Eigen::MatrixXd& data, const RbmSchedule& schedule,
               std::mt19937_64& rng, std::size_t layer_index)
{
    if (schedule.epochs == 0 || data.rows() == 0) {
        return;
    }
    if (schedule.batch_size == 0) {
        throw ValidationError("RBM batch size must be positive");
    }
    const auto rows = static_cast<std::size_t>(data.rows());
    std::vector<Eigen::Index> order(rows);
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Eigen::MatrixXd w_vel = Eigen::MatrixXd::Zero(rbm.weights.rows(), rbm.weights.cols());
    Eigen::RowVectorXd vb_vel = Eigen::RowVectorXd::Zero(rbm.visible_bias.size());
    Eigen::RowVectorXd hb_vel = Eigen::RowVectorXd::Zero(rbm.hidden_bias.size());

    for (std::size_t epoch = 0; epoch < schedule.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < rows; start += schedule.batch_size) {
            const std::size_t count = std::min(schedule.batch_size, rows - start);
            Eigen::MatrixXd v0(static_cast<Eigen::Index>(count), data.cols());
            for (std::size_t i = 0; i < count; ++i) {
                v0.row(static_cast<Eigen::Index>(i)) = data.row(order[start + i]);
            }

            // positive phase, one Gibbs step, negative phase on probabilities
            const Eigen::MatrixXd p0 = rbm.hidden_probabilities(v0);
            Eigen::MatrixXd h0(p0.rows(), p0.cols());
            for (Eigen::Index c = 0; c < p0.cols(); ++c) {
                for (Eigen::Index r = 0; r < p0.rows(); ++r) {
                    h0(r, c) = unit(rng) < p0(r, c) ? 1.0 : 0.0;
                }
            }
            const Eigen::MatrixXd v1 = rbm.visible_mean(h0);
            const Eigen::MatrixXd p1 = rbm.hidden_probabilities(v1);

            const double inv = 1.0 / static_cast<double>(count);
            const double lr = schedule.learning_rate;
            w_vel = schedule.momentum * w_vel + lr * inv * (v0.transpose() * p0 - v1.transpose() * p1);
            vb_vel = schedule.momentum * vb_vel + lr * inv * (v0 - v1).colwise().sum();
            hb_vel = schedule.momentum * hb_vel + lr * inv * (p0 - p1).colwise().sum();
            rbm.weights += w_vel;
            rbm.visible_bias += vb_vel;
            rbm.hidden_bias += hb_vel;
        }
        if (!rbm.weights.allFinite() || !rbm.visible_bias.allFinite() || !rbm.hidden_bias.allFinite()) {
            throw TrainingError("RBM layer " + std::to_string(layer_index) + " produced non-finite weights at epoch " +
                                std::to_string(epoch + 1));
        }
    }
}

std::vector<RbmLayer> pretrain_dbn(const Eigen::MatrixXd& inputs, std::span<const std::size_t> widths,
                                   const TrainConfig& cfg, std::mt19937_64& rng)
{
    std::vector<RbmLayer> layers;
    layers.reserve(widths.size());
    Eigen::MatrixXd data = inputs;
    std::size_t visible = static_cast<std::size_t>(inputs.cols());
    const RbmSchedule schedule{cfg.pretrain_epochs, cfg.batch_size, cfg.pretrain_rate, cfg.momentum};

    for (std::size_t j = 0; j < widths.size(); ++j) {
        const auto kind = j == 0 ? VisibleKind::Gaussian : VisibleKind::Bernoulli;
        RbmLayer rbm = make_rbm(visible, widths[j], kind, rng);
        train_rbm(rbm, data, schedule, rng, j);
        if (j + 1 < widths.size()) {
            data = rbm.hidden_probabilities(data);
        }
        visible = widths[j];
        layers.push_back(std::move(rbm));
    }
    return layers;
}

std::vector<RbmLayer> pretrain_dbn(const Eigen::MatrixXd& inputs, std::span<const std::size_t> widths,
                                   const TrainConfig& cfg)
{
    std::mt19937_64 rng(cfg.seed);
    return pretrain_dbn(inputs, widths, cfg, rng);
}

} // namespace axlesim
