#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace axlesim {

struct TrainConfig {
    std::size_t epochs = 50;
    std::size_t batch_size = 32;
    std::size_t pretrain_epochs = 10; // per RBM layer
    double pretrain_rate = 0.05;
    double finetune_rate = 0.01;
    double momentum = 0.9;
    std::uint64_t seed = 7;
    double train_fraction = 0.8;
    double validation_fraction = 0.1;
    double test_fraction = 0.1;
    /// Fixed number of gradient shards per batch; results depend on this, never on `threads`.
    std::size_t gradient_shards = 1;
    unsigned threads = 1;

    void validate() const;
};

/// Hidden widths and the task windows of the locally connected head.
/// Task t reads last-hidden units [t * stride, t * stride + window).
struct Architecture {
    std::vector<std::size_t> hidden = {64, 64, 76};
    std::size_t window = 16;
    std::size_t stride = 12;

    void validate(std::size_t tasks) const;
    std::size_t overlap() const { return window > stride ? window - stride : 0; }
};

} // namespace axlesim
