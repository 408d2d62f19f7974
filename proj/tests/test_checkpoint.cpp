#include <sstream>

#include <gtest/gtest.h>

#include "axlesim/checkpoint.hpp"
#include "axlesim/errors.hpp"
#include "support/fixtures.hpp"

using namespace axlesim;

namespace {

TrainResult trained(HeadKind kind)
{
    const auto rows = support::synthetic_rows(300, 21);
    TrainConfig cfg;
    cfg.epochs = 2;
    cfg.pretrain_epochs = 1;
    const DatasetSplit split = split_dataset(rows, cfg);
    return kind == HeadKind::Dense ? train_baseline_dnn(split, Architecture{}, cfg)
                                   : train_mtl_dbn_dnn(split, Architecture{}, cfg);
}

} // namespace

TEST(Checkpoint, RoundTripIsBitExact)
{
    for (HeadKind kind : {HeadKind::LocallyConnected, HeadKind::Dense}) {
        const MtlNetwork net = trained(kind).net;
        std::stringstream buf;
        write_checkpoint(buf, net);
        const std::string bytes = buf.str();
        const MtlNetwork back = read_checkpoint(buf);

        EXPECT_EQ(back.head_kind, net.head_kind);
        EXPECT_EQ(back.window, net.window);
        EXPECT_EQ(back.stride, net.stride);
        ASSERT_EQ(back.hidden.size(), net.hidden.size());
        for (std::size_t l = 0; l < net.hidden.size(); ++l) {
            EXPECT_EQ(back.hidden[l].weights, net.hidden[l].weights);
            EXPECT_EQ(back.hidden[l].bias, net.hidden[l].bias);
        }
        EXPECT_EQ(back.head.weights, net.head.weights);
        EXPECT_EQ(back.head.bias, net.head.bias);
        EXPECT_EQ(back.head_mask, net.head_mask);
        EXPECT_EQ(back.inputs.mean, net.inputs.mean);
        EXPECT_EQ(back.inputs.stddev, net.inputs.stddev);
        EXPECT_EQ(back.targets.min, net.targets.min);
        EXPECT_EQ(back.targets.max, net.targets.max);

        std::stringstream again;
        write_checkpoint(again, back);
        EXPECT_EQ(again.str(), bytes);
    }
}

TEST(Checkpoint, HeaderIsReadableText)
{
    std::stringstream buf;
    write_checkpoint(buf, trained(HeadKind::LocallyConnected).net);
    std::string first;
    std::getline(buf, first);
    EXPECT_EQ(first, "axlesim-checkpoint 1");
    const std::string all = buf.str();
    EXPECT_NE(all.find("hidden 64 64 76"), std::string::npos);
    EXPECT_NE(all.find("window 16"), std::string::npos);
    EXPECT_NE(all.find("\nend\n"), std::string::npos);
}

TEST(Checkpoint, RejectsDamagedFiles)
{
    std::stringstream buf;
    write_checkpoint(buf, trained(HeadKind::Dense).net);
    const std::string bytes = buf.str();

    std::istringstream wrong_magic("not-a-checkpoint 1\n");
    EXPECT_THROW(read_checkpoint(wrong_magic), IoError);

    std::string future = bytes;
    future.replace(future.find(" 1\n"), 3, " 9\n");
    std::istringstream newer(future);
    EXPECT_THROW(read_checkpoint(newer), IoError);

    std::istringstream truncated(bytes.substr(0, bytes.size() - 100));
    EXPECT_THROW(read_checkpoint(truncated), IoError);

    EXPECT_THROW(load_checkpoint("/nonexistent/model.ckpt"), IoError);
}
