#include "axlesim/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "axlesim/errors.hpp"
#include "axlesim/parallel.hpp"
#include "axlesim/rbm.hpp"

namespace axlesim {

void TrainConfig::validate() const
{
    if (batch_size < 1) {
        throw ValidationError("batch_size must be at least 1");
    }
    if (!(finetune_rate >= 0.0) || !(pretrain_rate >= 0.0)) {
        throw ValidationError("learning rates must be non-negative");
    }
    if (!(momentum >= 0.0 && momentum < 1.0)) {
        throw ValidationError("momentum must lie in [0, 1)");
    }
    const double sum = train_fraction + validation_fraction + test_fraction;
    if (!(train_fraction > 0.0) || validation_fraction < 0.0 || test_fraction < 0.0 ||
        std::abs(sum - 1.0) > 1e-9) {
        throw ValidationError("split fractions must be non-negative, train positive, summing to 1");
    }
    if (gradient_shards < 1) {
        throw ValidationError("gradient_shards must be at least 1");
    }
}

void Architecture::validate(std::size_t tasks) const
{
    if (hidden.empty()) {
        throw ValidationError("architecture needs at least one hidden layer");
    }
    for (auto w : hidden) {
        if (w == 0) {
            throw ValidationError("hidden widths must be positive");
        }
    }
    if (window == 0 || stride == 0) {
        throw ValidationError("task window and stride must be positive");
    }
    if (window <= stride) {
        throw ValidationError("task window must exceed the stride so adjacent windows share units");
    }
    const std::size_t needed = (tasks - 1) * stride + window;
    if (hidden.back() < needed) {
        throw ValidationError("last hidden width " + std::to_string(hidden.back()) + " is smaller than the " +
                              std::to_string(needed) + " units spanned by the task windows");
    }
}

double TargetScaler::normalize(std::size_t task, double value) const
{
    const double span = max[task] - min[task];
    if (span == 0.0) {
        return 0.5 * (kLow + kHigh);
    }
    return kLow + (value - min[task]) / span * (kHigh - kLow);
}

double TargetScaler::denormalize(std::size_t task, double normalized) const
{
    const double span = max[task] - min[task];
    return min[task] + (normalized - kLow) / (kHigh - kLow) * span;
}

std::vector<std::size_t> MtlNetwork::hidden_widths() const
{
    std::vector<std::size_t> widths;
    for (const auto& layer : hidden) {
        widths.push_back(static_cast<std::size_t>(layer.weights.cols()));
    }
    return widths;
}

namespace {

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& x)
{
    return x.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

struct ForwardPass {
    std::vector<Eigen::MatrixXd> activations; // input, then each hidden layer
    Eigen::MatrixXd output;
};

ForwardPass run_forward(const MtlNetwork& net, const Eigen::MatrixXd& x)
{
    ForwardPass pass;
    pass.activations.reserve(net.hidden.size() + 1);
    pass.activations.push_back(x);
    for (const auto& layer : net.hidden) {
        Eigen::MatrixXd pre = pass.activations.back() * layer.weights;
        pre.rowwise() += layer.bias;
        pass.activations.push_back(sigmoid(pre));
    }
    Eigen::MatrixXd pre = pass.activations.back() * net.head.weights.cwiseProduct(net.head_mask);
    pre.rowwise() += net.head.bias;
    pass.output = sigmoid(pre);
    return pass;
}

Gradients zero_like(const MtlNetwork& net)
{
    Gradients g;
    for (const auto& layer : net.hidden) {
        g.hidden.push_back({Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()),
                            Eigen::RowVectorXd::Zero(layer.bias.size())});
    }
    g.head = {Eigen::MatrixXd::Zero(net.head.weights.rows(), net.head.weights.cols()),
              Eigen::RowVectorXd::Zero(net.head.bias.size())};
    return g;
}

void accumulate(Gradients& into, const Gradients& g)
{
    for (std::size_t l = 0; l < into.hidden.size(); ++l) {
        into.hidden[l].weights += g.hidden[l].weights;
        into.hidden[l].bias += g.hidden[l].bias;
    }
    into.head.weights += g.head.weights;
    into.head.bias += g.head.bias;
}

void glorot_fill(Eigen::MatrixXd& w, std::size_t fan_in, std::size_t fan_out, std::mt19937_64& rng)
{
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            w(r, c) = dist(rng);
        }
    }
}

void init_head(MtlNetwork& net, std::size_t last_width, std::size_t tasks, std::mt19937_64& rng)
{
    net.head_mask = make_head_mask(net.head_kind, last_width, tasks, net.window, net.stride);
    net.head.weights.resize(static_cast<Eigen::Index>(last_width), static_cast<Eigen::Index>(tasks));
    const std::size_t fan_in = net.head_kind == HeadKind::Dense ? last_width : net.window;
    glorot_fill(net.head.weights, fan_in, 1, rng);
    net.head.weights = net.head.weights.cwiseProduct(net.head_mask);
    net.head.bias = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(tasks));
}

std::vector<std::size_t> identity_order(std::size_t n)
{
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    return order;
}

} // namespace

Eigen::MatrixXd MtlNetwork::forward(const Eigen::MatrixXd& standardized) const
{
    return run_forward(*this, standardized).output;
}

Eigen::MatrixXd make_head_mask(HeadKind kind, std::size_t last_width, std::size_t tasks, std::size_t window,
                               std::size_t stride)
{
    const auto rows = static_cast<Eigen::Index>(last_width);
    const auto cols = static_cast<Eigen::Index>(tasks);
    if (kind == HeadKind::Dense) {
        return Eigen::MatrixXd::Ones(rows, cols);
    }
    Eigen::MatrixXd mask = Eigen::MatrixXd::Zero(rows, cols);
    for (std::size_t t = 0; t < tasks; ++t) {
        const std::size_t begin = t * stride;
        if (begin + window > last_width) {
            throw ValidationError("task window exceeds the last hidden layer");
        }
        mask.block(static_cast<Eigen::Index>(begin), static_cast<Eigen::Index>(t),
                   static_cast<Eigen::Index>(window), 1)
            .setOnes();
    }
    return mask;
}

InputScaler fit_input_scaler(std::span<const DatasetRow> rows)
{
    if (rows.empty()) {
        throw ValidationError("cannot fit input scaler on an empty set");
    }
    InputScaler s;
    const auto n = static_cast<double>(rows.size());
    for (std::size_t p = 0; p < kDesignSize; ++p) {
        double sum = 0.0;
        s.min[p] = rows.front().inputs[p];
        s.max[p] = rows.front().inputs[p];
        for (const auto& r : rows) {
            sum += r.inputs[p];
            s.min[p] = std::min(s.min[p], r.inputs[p]);
            s.max[p] = std::max(s.max[p], r.inputs[p]);
        }
        s.mean[p] = sum / n;
        double sq = 0.0;
        for (const auto& r : rows) {
            const double d = r.inputs[p] - s.mean[p];
            sq += d * d;
        }
        const double sd = std::sqrt(sq / n);
        // constant column: leave it centred, unscaled
        s.stddev[p] = sd > 0.0 ? sd : 1.0;
    }
    return s;
}

TargetScaler fit_target_scaler(std::span<const DatasetRow> rows)
{
    if (rows.empty()) {
        throw ValidationError("cannot fit target scaler on an empty set");
    }
    TargetScaler s;
    s.min = rows.front().targets;
    s.max = rows.front().targets;
    for (const auto& r : rows) {
        for (std::size_t t = 0; t < kTargetSize; ++t) {
            s.min[t] = std::min(s.min[t], r.targets[t]);
            s.max[t] = std::max(s.max[t], r.targets[t]);
        }
    }
    return s;
}

Eigen::MatrixXd standardize(const InputScaler& scaler, std::span<const DatasetRow> rows)
{
    Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(kDesignSize));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t p = 0; p < kDesignSize; ++p) {
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p)) =
                (rows[i].inputs[p] - scaler.mean[p]) / scaler.stddev[p];
        }
    }
    return x;
}

Eigen::MatrixXd normalize_targets(const TargetScaler& scaler, std::span<const DatasetRow> rows)
{
    Eigen::MatrixXd y(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(kTargetSize));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t t = 0; t < kTargetSize; ++t) {
            y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = scaler.normalize(t, rows[i].targets[t]);
        }
    }
    return y;
}

double batch_loss(const MtlNetwork& net, const Eigen::MatrixXd& standardized, const Eigen::MatrixXd& normalized)
{
    const Eigen::MatrixXd out = net.forward(standardized);
    return (out - normalized).squaredNorm() / static_cast<double>(standardized.rows());
}

Gradients loss_gradients(const MtlNetwork& net, const Eigen::MatrixXd& standardized,
                         const Eigen::MatrixXd& normalized, double denominator)
{
    const ForwardPass pass = run_forward(net, standardized);
    const Eigen::MatrixXd& out = pass.output;

    Gradients g;
    g.hidden.resize(net.hidden.size());

    // dL/d(pre-activation) of the head
    Eigen::MatrixXd delta =
        ((2.0 / denominator) * (out - normalized)).cwiseProduct(out.cwiseProduct((1.0 - out.array()).matrix()));
    const Eigen::MatrixXd masked = net.head.weights.cwiseProduct(net.head_mask);
    g.head.weights = (pass.activations.back().transpose() * delta).cwiseProduct(net.head_mask);
    g.head.bias = delta.colwise().sum();

    Eigen::MatrixXd back = delta * masked.transpose();
    for (std::size_t l = net.hidden.size(); l-- > 0;) {
        const Eigen::MatrixXd& a = pass.activations[l + 1];
        delta = back.cwiseProduct(a.cwiseProduct((1.0 - a.array()).matrix()));
        g.hidden[l].weights = pass.activations[l].transpose() * delta;
        g.hidden[l].bias = delta.colwise().sum();
        if (l > 0) {
            back = delta * net.hidden[l].weights.transpose();
        }
    }
    return g;
}

Gradients loss_gradients(const MtlNetwork& net, const Eigen::MatrixXd& standardized,
                         const Eigen::MatrixXd& normalized)
{
    return loss_gradients(net, standardized, normalized, static_cast<double>(standardized.rows()));
}

DatasetSplit split_dataset(std::span<const DatasetRow> rows, const TrainConfig& cfg)
{
    cfg.validate();
    std::vector<std::size_t> order = identity_order(rows.size());
    std::mt19937_64 rng(cfg.seed);
    std::shuffle(order.begin(), order.end(), rng);

    const auto n = static_cast<double>(rows.size());
    const auto n_train = static_cast<std::size_t>(std::floor(cfg.train_fraction * n + 1e-9));
    const auto n_val = static_cast<std::size_t>(std::floor(cfg.validation_fraction * n + 1e-9));

    DatasetSplit split;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const DatasetRow& row = rows[order[i]];
        if (i < n_train) {
            split.train.push_back(row);
        } else if (i < n_train + n_val) {
            split.validation.push_back(row);
        } else {
            split.test.push_back(row);
        }
    }
    return split;
}

MtlNetwork init_network(HeadKind kind, const Architecture& arch, const InputScaler& inputs,
                        const TargetScaler& targets, std::mt19937_64& rng, bool rbm_init)
{
    arch.validate(kTargetSize);
    MtlNetwork net;
    net.head_kind = kind;
    net.window = arch.window;
    net.stride = arch.stride;
    net.inputs = inputs;
    net.targets = targets;

    std::size_t fan_in = kDesignSize;
    std::normal_distribution<double> normal(0.0, 0.01);
    for (auto width : arch.hidden) {
        DenseLayer layer;
        layer.weights.resize(static_cast<Eigen::Index>(fan_in), static_cast<Eigen::Index>(width));
        if (rbm_init) {
            for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
                for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
                    layer.weights(r, c) = normal(rng);
                }
            }
        } else {
            glorot_fill(layer.weights, fan_in, width, rng);
        }
        layer.bias = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(width));
        net.hidden.push_back(std::move(layer));
        fan_in = width;
    }
    init_head(net, arch.hidden.back(), kTargetSize, rng);
    return net;
}

TrainResult fine_tune(MtlNetwork net, const DatasetSplit& split, const TrainConfig& cfg, std::mt19937_64& rng)
{
    cfg.validate();
    if (split.train.empty()) {
        throw ValidationError("training split is empty");
    }
    const Eigen::MatrixXd x = standardize(net.inputs, split.train);
    const Eigen::MatrixXd y = normalize_targets(net.targets, split.train);
    const std::size_t rows = split.train.size();

    Gradients velocity = zero_like(net);
    std::vector<std::size_t> order = identity_order(rows);

    TrainResult result;
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double loss_sum = 0.0;
        std::size_t batch_index = 0;
        for (std::size_t start = 0; start < rows; start += cfg.batch_size, ++batch_index) {
            const std::size_t count = std::min(cfg.batch_size, rows - start);
            Eigen::MatrixXd xb(static_cast<Eigen::Index>(count), x.cols());
            Eigen::MatrixXd yb(static_cast<Eigen::Index>(count), y.cols());
            for (std::size_t i = 0; i < count; ++i) {
                xb.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(order[start + i]));
                yb.row(static_cast<Eigen::Index>(i)) = y.row(static_cast<Eigen::Index>(order[start + i]));
            }

            const std::size_t shards = std::min(cfg.gradient_shards, count);
            Gradients grad;
            double loss = 0.0;
            if (shards == 1) {
                grad = loss_gradients(net, xb, yb);
                loss = batch_loss(net, xb, yb);
            } else {
                std::vector<Gradients> parts(shards);
                std::vector<double> part_loss(shards);
                parallel_for(shards, cfg.threads, [&](std::size_t s) {
                    const std::size_t lo = s * count / shards;
                    const std::size_t hi = (s + 1) * count / shards;
                    const auto len = static_cast<Eigen::Index>(hi - lo);
                    const Eigen::MatrixXd xs = xb.middleRows(static_cast<Eigen::Index>(lo), len);
                    const Eigen::MatrixXd ys = yb.middleRows(static_cast<Eigen::Index>(lo), len);
                    parts[s] = loss_gradients(net, xs, ys, static_cast<double>(count));
                    part_loss[s] = (net.forward(xs) - ys).squaredNorm();
                });
                grad = zero_like(net);
                for (std::size_t s = 0; s < shards; ++s) {
                    accumulate(grad, parts[s]);
                    loss += part_loss[s];
                }
                loss /= static_cast<double>(count);
            }

            if (!std::isfinite(loss)) {
                throw TrainingError("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                                    std::to_string(batch_index));
            }
            loss_sum += loss * static_cast<double>(count);

            const double lr = cfg.finetune_rate;
            const double mu = cfg.momentum;
            for (std::size_t l = 0; l < net.hidden.size(); ++l) {
                velocity.hidden[l].weights = mu * velocity.hidden[l].weights - lr * grad.hidden[l].weights;
                velocity.hidden[l].bias = mu * velocity.hidden[l].bias - lr * grad.hidden[l].bias;
                net.hidden[l].weights += velocity.hidden[l].weights;
                net.hidden[l].bias += velocity.hidden[l].bias;
            }
            velocity.head.weights = mu * velocity.head.weights - lr * grad.head.weights;
            velocity.head.bias = mu * velocity.head.bias - lr * grad.head.bias;
            net.head.weights += velocity.head.weights;
            net.head.bias += velocity.head.bias;
        }

        EpochRecord record;
        record.epoch = epoch;
        record.train_loss = loss_sum / static_cast<double>(rows);
        if (!split.validation.empty()) {
            record.validation = evaluate(net, split.validation);
        }
        result.trace.push_back(record);
    }
    result.net = std::move(net);
    return result;
}

TrainResult train_mtl_dbn_dnn(const DatasetSplit& split, const Architecture& arch, const TrainConfig& cfg)
{
    cfg.validate();
    arch.validate(kTargetSize);
    if (split.train.empty()) {
        throw ValidationError("training split is empty");
    }
    std::mt19937_64 rng(cfg.seed);

    MtlNetwork net;
    net.head_kind = HeadKind::LocallyConnected;
    net.window = arch.window;
    net.stride = arch.stride;
    net.inputs = fit_input_scaler(split.train);
    net.targets = fit_target_scaler(split.train);

    const Eigen::MatrixXd x = standardize(net.inputs, split.train);
    for (auto& rbm : pretrain_dbn(x, arch.hidden, cfg, rng)) {
        net.hidden.push_back({std::move(rbm.weights), std::move(rbm.hidden_bias)});
    }
    init_head(net, arch.hidden.back(), kTargetSize, rng);
    return fine_tune(std::move(net), split, cfg, rng);
}

TrainResult train_baseline_dnn(const DatasetSplit& split, const Architecture& arch, const TrainConfig& cfg)
{
    cfg.validate();
    if (split.train.empty()) {
        throw ValidationError("training split is empty");
    }
    std::mt19937_64 rng(cfg.seed);
    MtlNetwork net = init_network(HeadKind::Dense, arch, fit_input_scaler(split.train),
                                  fit_target_scaler(split.train), rng, false);
    return fine_tune(std::move(net), split, cfg, rng);
}

Prediction predict(const MtlNetwork& net, const DesignVector& inputs)
{
    const DatasetRow row{inputs, {}};
    Prediction p;
    p.values = predict_rows(net, std::span<const DatasetRow>(&row, 1)).front();
    for (std::size_t i = 0; i < kDesignSize; ++i) {
        if (inputs[i] < net.inputs.min[i] || inputs[i] > net.inputs.max[i]) {
            p.extrapolated = true;
        }
    }
    return p;
}

std::vector<TargetVector> predict_rows(const MtlNetwork& net, std::span<const DatasetRow> rows)
{
    const Eigen::MatrixXd out = net.forward(standardize(net.inputs, rows));
    std::vector<TargetVector> preds(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t t = 0; t < kTargetSize; ++t) {
            preds[i][t] = net.targets.denormalize(t, out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)));
        }
    }
    return preds;
}

RegressionReport evaluate(const MtlNetwork& net, std::span<const DatasetRow> rows)
{
    std::vector<TargetVector> truth(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        truth[i] = rows[i].targets;
    }
    const auto preds = predict_rows(net, rows);
    return regression_metrics(truth, preds);
}

} // namespace axlesim
