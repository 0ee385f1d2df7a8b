#include <zlib.h>

#include <algorithm>
#include <array>

#include "al/data/dataset.hpp"

namespace al::data {

namespace {

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset) {
    return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
           (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

}  // namespace

std::vector<std::uint8_t> read_maybe_gzip(const std::filesystem::path& path) {
    // gzread passes non-gzip files through unchanged.
    gzFile file = gzopen(path.string().c_str(), "rb");
    if (!file)
        throw DataError("cannot open " + path.string());
    std::vector<std::uint8_t> out;
    std::array<std::uint8_t, 1 << 16> chunk{};
    for (;;) {
        const int got = gzread(file, chunk.data(), static_cast<unsigned>(chunk.size()));
        if (got < 0) {
            int code = 0;
            const std::string msg = gzerror(file, &code);
            gzclose(file);
            throw DataError("error reading " + path.string() + ": " + msg);
        }
        if (got == 0)
            break;
        out.insert(out.end(), chunk.begin(), chunk.begin() + got);
    }
    gzclose(file);
    return out;
}

Dataset parse_idx(std::span<const std::uint8_t> images, std::span<const std::uint8_t> labels,
                  std::size_t n_classes) {
    if (images.size() < 16)
        throw IdxTruncatedError("image file shorter than its 16-byte header");
    if (labels.size() < 8)
        throw IdxTruncatedError("label file shorter than its 8-byte header");
    if (const auto magic = read_be32(images, 0); magic != kIdxImageMagic)
        throw IdxMagicError("image file has magic " + std::to_string(magic) + ", expected 2051 (0x00000803)");
    if (const auto magic = read_be32(labels, 0); magic != kIdxLabelMagic)
        throw IdxMagicError("label file has magic " + std::to_string(magic) + ", expected 2049 (0x00000801)");

    const std::size_t n_images = read_be32(images, 4);
    const std::size_t rows = read_be32(images, 8);
    const std::size_t cols = read_be32(images, 12);
    const std::size_t n_labels = read_be32(labels, 4);
    const std::size_t dim = rows * cols;

    if (images.size() - 16 < n_images * dim)
        throw IdxTruncatedError("image file declares " + std::to_string(n_images) + " images of " +
                                std::to_string(rows) + "x" + std::to_string(cols) + " but holds only " +
                                std::to_string(images.size() - 16) + " pixel bytes");
    if (labels.size() - 8 < n_labels)
        throw IdxTruncatedError("label file declares " + std::to_string(n_labels) + " labels but holds only " +
                                std::to_string(labels.size() - 8));
    if (n_images != n_labels)
        throw IdxCountMismatchError(std::to_string(n_images) + " images but " + std::to_string(n_labels) +
                                    " labels");

    Dataset ds;
    ds.n_classes = n_classes;
    ds.x = Matrix(n_images, dim);
    auto px = ds.x.data();
    const auto pixels = images.subspan(16, n_images * dim);
    for (std::size_t i = 0; i < pixels.size(); ++i)
        px[i] = static_cast<double>(pixels[i]) / 255.0;
    ds.y.resize(n_labels);
    for (std::size_t i = 0; i < n_labels; ++i) {
        ds.y[i] = labels[8 + i];
        if (ds.y[i] >= n_classes)
            throw DataError("label " + std::to_string(ds.y[i]) + " at index " + std::to_string(i) +
                            " is outside [0, " + std::to_string(n_classes) + ")");
    }
    return ds;
}

Dataset load_idx(const std::filesystem::path& images, const std::filesystem::path& labels, std::size_t n_classes) {
    if (!std::filesystem::exists(images))
        throw DataError("image file " + images.string() + " does not exist");
    if (!std::filesystem::exists(labels))
        throw DataError("label file " + labels.string() + " does not exist");
    const auto image_bytes = read_maybe_gzip(images);
    const auto label_bytes = read_maybe_gzip(labels);
    return parse_idx(image_bytes, label_bytes, n_classes);
}

std::filesystem::path resolve_data_file(const std::filesystem::path& dir, const std::string& name) {
    for (const auto& candidate : {dir / name, dir / (name + ".gz")})
        if (std::filesystem::exists(candidate))
            return candidate;
    throw DataError("neither " + (dir / name).string() + " nor its .gz variant exists");
}

bool has_mnist(const std::filesystem::path& dir) {
    try {
        for (const char* name : {"train-images-idx3-ubyte", "train-labels-idx1-ubyte", "t10k-images-idx3-ubyte",
                                 "t10k-labels-idx1-ubyte"})
            resolve_data_file(dir, name);
        return true;
    } catch (const DataError&) {
        return false;
    }
}

Split load_mnist(const std::filesystem::path& dir) {
    Split split;
    split.train = load_idx(resolve_data_file(dir, "train-images-idx3-ubyte"),
                           resolve_data_file(dir, "train-labels-idx1-ubyte"));
    split.test = load_idx(resolve_data_file(dir, "t10k-images-idx3-ubyte"),
                          resolve_data_file(dir, "t10k-labels-idx1-ubyte"));
    return split;
}

Split load_mnist_subset(const std::filesystem::path& dir, std::size_t n_train, std::size_t n_test,
                        std::uint64_t seed) {
    const Split full = load_mnist(dir);
    linalg::Rng rng(seed);
    Split split;
    split.train = stratified_subset(full.train, n_train, rng);
    split.test = stratified_subset(full.test, n_test, rng);
    return split;
}

}  // namespace al::data
