#include "al/core/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

namespace al::core {

namespace {

constexpr std::array<char, 8> kMagic{'A', 'L', 'C', 'K', 'P', 'T', '1', '\n'};

void put_u64(std::ostream& os, std::uint64_t v) {
    std::array<char, 8> bytes{};
    for (int i = 0; i < 8; ++i)
        bytes[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xFF);
    os.write(bytes.data(), bytes.size());
}

std::uint64_t get_u64(std::istream& is, const std::filesystem::path& path) {
    std::array<unsigned char, 8> bytes{};
    if (!is.read(reinterpret_cast<char*>(bytes.data()), bytes.size()))
        throw CheckpointError("checkpoint " + path.string() + " is truncated");
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i)
        v = (v << 8) | bytes[static_cast<std::size_t>(i)];
    return v;
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path, nlohmann::json header,
                      const std::vector<NamedTensor>& tensors) {
    header["format"] = 1;
    header["tensors"] = nlohmann::json::array();
    for (const auto& t : tensors)
        header["tensors"].push_back({{"name", t.name}, {"rows", t.value->rows()}, {"cols", t.value->cols()}});
    const std::string text = header.dump();

    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os)
            throw CheckpointError("cannot open " + tmp.string() + " for writing");
        os.write(kMagic.data(), kMagic.size());
        put_u64(os, text.size());
        os.write(text.data(), static_cast<std::streamsize>(text.size()));
        for (const auto& t : tensors)
            for (double v : t.value->data())
                put_u64(os, std::bit_cast<std::uint64_t>(v));
        if (!os)
            throw CheckpointError("write to " + tmp.string() + " failed");
    }
    std::filesystem::rename(tmp, path);
}

CheckpointData read_checkpoint(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw CheckpointError("cannot open checkpoint " + path.string());
    std::array<char, 8> magic{};
    if (!is.read(magic.data(), magic.size()) || magic != kMagic)
        throw CheckpointError(path.string() + " is not a checkpoint (bad magic)");
    const std::uint64_t header_len = get_u64(is, path);
    std::string text(header_len, '\0');
    if (!is.read(text.data(), static_cast<std::streamsize>(header_len)))
        throw CheckpointError("checkpoint " + path.string() + " is truncated");

    CheckpointData data;
    try {
        data.header = nlohmann::json::parse(text);
        for (const auto& entry : data.header.at("tensors")) {
            const auto rows = entry.at("rows").get<std::size_t>();
            const auto cols = entry.at("cols").get<std::size_t>();
            Matrix m(rows, cols);
            for (double& v : m.data())
                v = std::bit_cast<double>(get_u64(is, path));
            data.tensors.emplace_back(entry.at("name").get<std::string>(), std::move(m));
        }
    } catch (const nlohmann::json::exception& e) {
        throw CheckpointError("checkpoint " + path.string() + " has a malformed header: " + e.what());
    }
    return data;
}

void append_block(std::vector<NamedTensor>& out, const std::string& prefix, const nn::MLPBlock& block) {
    for (std::size_t i = 0; i < block.depth(); ++i) {
        const auto& layer = block.layers()[i];
        out.push_back({prefix + "." + std::to_string(i) + ".weights", &layer.weights()});
        out.push_back({prefix + "." + std::to_string(i) + ".bias", &layer.bias()});
    }
}

void restore_block(const CheckpointData& data, std::size_t& cursor, const std::string& prefix,
                   nn::MLPBlock& block) {
    const auto params = block.parameters();
    for (std::size_t p = 0; p < params.size(); ++p) {
        const std::string expected =
            prefix + "." + std::to_string(p / 2) + (p % 2 == 0 ? ".weights" : ".bias");
        if (cursor >= data.tensors.size())
            throw CheckpointError("checkpoint is missing tensor " + expected);
        const auto& [name, value] = data.tensors[cursor++];
        if (name != expected || !value.same_shape(*params[p]))
            throw CheckpointError("checkpoint tensor " + name + " " + value.shape_str() + " does not match " +
                                  expected + " " + params[p]->shape_str());
        *params[p] = value;
    }
}

void save_checkpoint(const std::filesystem::path& path, const ALNetwork& net, std::uint64_t seed,
                     std::size_t epoch) {
    std::vector<NamedTensor> tensors;
    for (const auto& c : net.components()) {
        const std::string p = "c" + std::to_string(c.index());
        append_block(tensors, p + ".f", c.f());
        append_block(tensors, p + ".g", c.g());
        append_block(tensors, p + ".b", c.b());
        append_block(tensors, p + ".h", c.h());
    }
    nlohmann::json header{{"tag", "al"}, {"plan", to_json(net.plan())}, {"seed", seed}, {"epoch", epoch}};
    write_checkpoint(path, std::move(header), tensors);
}

ALNetwork load_al_checkpoint(const std::filesystem::path& path, nlohmann::json* header) {
    const CheckpointData data = read_checkpoint(path);
    if (data.header.value("tag", std::string()) != "al")
        throw CheckpointError("checkpoint " + path.string() + " is not an AL checkpoint");
    const NetworkPlan plan = plan_from_json(data.header.at("plan"));
    linalg::Rng rng(0);
    ALNetwork net = ALNetwork::build(plan, rng);
    std::size_t cursor = 0;
    for (auto& c : net.components()) {
        const std::string p = "c" + std::to_string(c.index());
        restore_block(data, cursor, p + ".f", c.f());
        restore_block(data, cursor, p + ".g", c.g());
        restore_block(data, cursor, p + ".b", c.b());
        restore_block(data, cursor, p + ".h", c.h());
    }
    if (cursor != data.tensors.size())
        throw CheckpointError("checkpoint " + path.string() + " has " +
                              std::to_string(data.tensors.size() - cursor) + " unexpected trailing tensors");
    if (header)
        *header = data.header;
    return net;
}

}  // namespace al::core
