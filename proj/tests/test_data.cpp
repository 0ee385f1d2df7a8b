#include <zlib.h>

#include <fstream>
#include <set>

#include "al/data/dataset.hpp"
#include "support.hpp"

using namespace al::data;
using al::linalg::Matrix;
using al::linalg::Rng;

namespace {

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8)
        out.push_back(static_cast<std::uint8_t>(v >> shift));
}

std::vector<std::uint8_t> idx_images(std::uint32_t n, std::uint32_t rows, std::uint32_t cols,
                                     const std::vector<std::uint8_t>& pixels, std::uint32_t magic = 0x803) {
    std::vector<std::uint8_t> out;
    put_be32(out, magic);
    put_be32(out, n);
    put_be32(out, rows);
    put_be32(out, cols);
    out.insert(out.end(), pixels.begin(), pixels.end());
    return out;
}

std::vector<std::uint8_t> idx_labels(const std::vector<std::uint8_t>& labels, std::uint32_t magic = 0x801) {
    std::vector<std::uint8_t> out;
    put_be32(out, magic);
    put_be32(out, static_cast<std::uint32_t>(labels.size()));
    out.insert(out.end(), labels.begin(), labels.end());
    return out;
}

void write_file(const std::filesystem::path& p, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(p, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void write_gzip(const std::filesystem::path& p, const std::vector<std::uint8_t>& bytes) {
    gzFile f = gzopen(p.string().c_str(), "wb");
    ASSERT_NE(f, nullptr);
    gzwrite(f, bytes.data(), static_cast<unsigned>(bytes.size()));
    gzclose(f);
}

}  // namespace

TEST(Idx, SingleZeroImage) {
    const auto ds = parse_idx(idx_images(1, 28, 28, std::vector<std::uint8_t>(784, 0)), idx_labels({7}));
    EXPECT_EQ(ds.size(), 1u);
    EXPECT_EQ(ds.dim(), 784u);
    EXPECT_EQ(ds.x, Matrix(1, 784));
    EXPECT_EQ(ds.y, (std::vector<std::size_t>{7}));
}

TEST(Idx, PixelsScaledRowMajor) {
    const auto ds = parse_idx(idx_images(2, 1, 2, {0, 255, 51, 102}), idx_labels({0, 9}));
    EXPECT_EQ(ds.x, Matrix::from_rows({{0.0, 1.0}, {0.2, 0.4}}));
}

TEST(Idx, WrongMagicRejected) {
    const auto labels = idx_labels({1});
    EXPECT_THROW(parse_idx(idx_images(1, 1, 1, {0}, 0x802), labels), IdxMagicError);
    EXPECT_THROW(parse_idx(idx_images(1, 1, 1, {0}), idx_labels({1}, 0x803)), IdxMagicError);
    // Little-endian magic is a different number.
    EXPECT_THROW(parse_idx(idx_images(1, 1, 1, {0}, 0x03080000), labels), IdxMagicError);
}

TEST(Idx, TruncationRejected) {
    auto images = idx_images(2, 2, 2, {1, 2, 3, 4, 5, 6, 7});
    EXPECT_THROW(parse_idx(images, idx_labels({1, 2})), IdxTruncatedError);
    EXPECT_THROW(parse_idx(std::vector<std::uint8_t>(10), idx_labels({1})), IdxTruncatedError);
    auto labels = idx_labels({1, 2});
    labels.pop_back();
    EXPECT_THROW(parse_idx(idx_images(2, 1, 1, {0, 0}), labels), IdxTruncatedError);
}

TEST(Idx, CountMismatchRejected) {
    EXPECT_THROW(parse_idx(idx_images(2, 1, 1, {0, 0}), idx_labels({1, 2, 3})), IdxCountMismatchError);
}

TEST(Idx, LabelOutOfRangeRejected) {
    EXPECT_THROW(parse_idx(idx_images(1, 1, 1, {0}), idx_labels({10})), DataError);
}

TEST(Idx, GzipAndPlainFilesLoadIdentically) {
    const auto dir = al::test::tmp_dir("idx");
    const auto images = idx_images(3, 2, 2, {0, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 110});
    const auto labels = idx_labels({3, 1, 4});
    write_file(dir / "a-images", images);
    write_file(dir / "a-labels", labels);
    write_gzip(dir / "b-images.gz", images);
    write_gzip(dir / "b-labels.gz", labels);
    const auto plain = load_idx(dir / "a-images", dir / "a-labels");
    const auto gz = load_idx(resolve_data_file(dir, "b-images"), resolve_data_file(dir, "b-labels"));
    EXPECT_EQ(plain.x, gz.x);
    EXPECT_EQ(plain.y, gz.y);
    EXPECT_THROW(resolve_data_file(dir, "c-images"), DataError);
    EXPECT_THROW(load_idx(dir / "nope", dir / "a-labels"), DataError);
}

TEST(OneHot, Example) {
    const std::vector<std::size_t> labels{2, 0};
    EXPECT_EQ(one_hot(labels, 3), Matrix::from_rows({{0, 0, 1}, {1, 0, 0}}));
    const std::vector<std::size_t> bad{3};
    EXPECT_THROW(one_hot(bad, 3), DataError);
}

TEST(Synthetic, XorPoints) {
    const auto ds = synth_xor();
    EXPECT_EQ(ds.x, Matrix::from_rows({{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
    EXPECT_EQ(ds.y, (std::vector<std::size_t>{0, 1, 1, 0}));
    EXPECT_EQ(ds.n_classes, 2u);
}

TEST(Synthetic, BlobsDeterministicAndBalanced) {
    Rng a(5), b(5);
    const auto x = synth_blobs(90, 3, 3, 5.0, a), y = synth_blobs(90, 3, 3, 5.0, b);
    EXPECT_EQ(x.x, y.x);
    EXPECT_EQ(x.y, y.y);
    std::vector<std::size_t> counts(3);
    for (auto label : x.y)
        ++counts[label];
    EXPECT_EQ(counts, (std::vector<std::size_t>{30, 30, 30}));
    EXPECT_NO_THROW(x.validate());
}

TEST(BatchIterator, CoversEveryRowOncePerEpoch) {
    Rng rng(6);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + rng.index(200), bs = 1 + rng.index(40);
        BatchIterator it(n, bs, rng.next_u64());
        for (std::size_t epoch = 1; epoch <= 2; ++epoch) {
            it.start_epoch(epoch);
            std::multiset<std::size_t> seen;
            std::size_t batches = 0;
            for (auto b = it.next(); !b.empty(); b = it.next(), ++batches) {
                EXPECT_LE(b.size(), bs);
                seen.insert(b.begin(), b.end());
            }
            EXPECT_EQ(batches, it.batch_count());
            EXPECT_EQ(batches, (n + bs - 1) / bs);
            ASSERT_EQ(seen.size(), n);
            std::size_t expect = 0;
            for (auto v : seen)
                EXPECT_EQ(v, expect++);
        }
    }
}

TEST(BatchIterator, SeedAndEpochDetermineOrder) {
    BatchIterator a(100, 10, 7), b(100, 10, 7), c(100, 10, 8);
    a.start_epoch(1);
    b.start_epoch(1);
    c.start_epoch(1);
    const std::vector<std::size_t> pa(a.permutation().begin(), a.permutation().end());
    EXPECT_TRUE(std::equal(pa.begin(), pa.end(), b.permutation().begin()));
    EXPECT_FALSE(std::equal(pa.begin(), pa.end(), c.permutation().begin()));
    a.start_epoch(2);
    EXPECT_FALSE(std::equal(pa.begin(), pa.end(), a.permutation().begin()));
    BatchIterator plain(5, 2, 7, false);
    plain.start_epoch(3);
    EXPECT_EQ(std::vector<std::size_t>(plain.permutation().begin(), plain.permutation().end()),
              (std::vector<std::size_t>{0, 1, 2, 3, 4}));
}

TEST(Batch, GathersRowsAndTargets) {
    Dataset ds;
    ds.x = Matrix::from_rows({{1, 1}, {2, 2}, {3, 3}});
    ds.y = {0, 2, 1};
    ds.n_classes = 3;
    const std::vector<std::size_t> idx{2, 0};
    const auto b = make_batch(ds, idx);
    EXPECT_EQ(b.x, Matrix::from_rows({{3, 3}, {1, 1}}));
    EXPECT_EQ(b.t, Matrix::from_rows({{0, 1, 0}, {1, 0, 0}}));
    EXPECT_EQ(b.labels, (std::vector<std::size_t>{1, 0}));
}

TEST(Stratified, KeepsClassProportions) {
    Dataset ds;
    ds.n_classes = 2;
    ds.x = Matrix(100, 1);
    for (std::size_t i = 0; i < 100; ++i) {
        ds.y.push_back(i < 80 ? 0 : 1);
        ds.x(i, 0) = static_cast<double>(i);
    }
    Rng rng(9);
    const auto sub = stratified_subset(ds, 10, rng);
    EXPECT_EQ(std::count(sub.y.begin(), sub.y.end(), 0u), 8);
    EXPECT_EQ(std::count(sub.y.begin(), sub.y.end(), 1u), 2);
    for (std::size_t i = 1; i < sub.size(); ++i)
        EXPECT_LT(sub.x(i - 1, 0), sub.x(i, 0));
    EXPECT_THROW(stratified_subset(ds, 101, rng), DataError);
}

class Mnist : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = al::test::mnist_dir();
        if (dir_.empty() || !has_mnist(dir_))
            GTEST_SKIP() << "MNIST not available (set AL_DATA_DIR)";
    }
    std::string dir_;
};

TEST_F(Mnist, FullSplitShapes) {
    const auto split = load_mnist(dir_);
    EXPECT_EQ(split.train.size(), 60000u);
    EXPECT_EQ(split.train.dim(), 784u);
    EXPECT_EQ(split.train.n_classes, 10u);
    EXPECT_EQ(split.test.size(), 10000u);
    EXPECT_GE(*std::min_element(split.train.x.data().begin(), split.train.x.data().end()), 0.0);
    EXPECT_LE(*std::max_element(split.train.x.data().begin(), split.train.x.data().end()), 1.0);
}

TEST_F(Mnist, SubsetIsStratifiedAndReproducible) {
    const auto a = load_mnist_subset(dir_), b = load_mnist_subset(dir_);
    EXPECT_EQ(a.train.size(), 6000u);
    EXPECT_EQ(a.test.size(), 1000u);
    EXPECT_EQ(a.train.x, b.train.x);
    std::vector<std::size_t> counts(10);
    for (auto y : a.train.y)
        ++counts[y];
    for (auto c : counts) {
        EXPECT_GT(c, 500u);
        EXPECT_LT(c, 700u);
    }
}
