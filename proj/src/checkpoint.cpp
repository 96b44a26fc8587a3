#include "slrbench/checkpoint.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace slr {

namespace {

constexpr char kMagic[4] = {'S', 'L', 'C', 'K'};
constexpr uint32_t kVersion = 1;

const std::array<uint32_t, 256>& crc_table() {
    static const std::array<uint32_t, 256> table = [] {
        std::array<uint32_t, 256> t{};
        for (uint32_t i = 0; i < 256; ++i) {
            uint32_t c = i;
            for (int bit = 0; bit < 8; ++bit)
                c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[i] = c;
        }
        return t;
    }();
    return table;
}

void put_u32(std::string& buf, uint32_t v) {
    buf.push_back(static_cast<char>(v & 0xFF));
    buf.push_back(static_cast<char>((v >> 8) & 0xFF));
    buf.push_back(static_cast<char>((v >> 16) & 0xFF));
    buf.push_back(static_cast<char>((v >> 24) & 0xFF));
}

uint32_t get_u32(const unsigned char* p) {
    return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
           static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

nlohmann::json config_to_json(const ModelConfig& c) {
    return {{"kind", to_string(c.kind)},
            {"num_classes", c.num_classes},
            {"conv_filters", c.conv_filters},
            {"lstm_units", c.lstm_units},
            {"layers", c.layers},
            {"heads", c.heads},
            {"model_dim", c.model_dim},
            {"ffn_dim", c.ffn_dim},
            {"dropout", c.dropout},
            {"positional_encoding", c.positional_encoding}};
}

ModelConfig config_from_json(const nlohmann::json& j) {
    ModelConfig c;
    c.kind = model_kind_from_string(j.at("kind").get<std::string>());
    c.num_classes = j.at("num_classes").get<int>();
    c.conv_filters = j.at("conv_filters").get<int>();
    c.lstm_units = j.at("lstm_units").get<int>();
    c.layers = j.at("layers").get<int>();
    c.heads = j.at("heads").get<int>();
    c.model_dim = j.at("model_dim").get<int>();
    c.ffn_dim = j.at("ffn_dim").get<int>();
    c.dropout = j.at("dropout").get<double>();
    c.positional_encoding = j.at("positional_encoding").get<bool>();
    return c;
}

} // namespace

uint32_t crc32(const void* data, size_t length, uint32_t seed) {
    const auto& table = crc_table();
    uint32_t c = seed ^ 0xFFFFFFFFu;
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < length; ++i) c = table[(c ^ p[i]) & 0xFF] ^ (c >> 8);
    return c ^ 0xFFFFFFFFu;
}

void save_checkpoint(const std::filesystem::path& path, const ModelConfig& config,
                     const ParamSet<float>& params) {
    validate_params(config, params);

    nlohmann::json header;
    header["config"] = config_to_json(config);
    auto& plist = header["params"] = nlohmann::json::array();
    for (size_t i = 0; i < params.count(); ++i)
        plist.push_back({{"name", params.name(i)}, {"shape", params.tensor(i).shape()}});
    const std::string header_text = header.dump();

    std::string buf;
    buf.append(kMagic, 4);
    put_u32(buf, kVersion);
    put_u32(buf, static_cast<uint32_t>(header_text.size()));
    buf += header_text;
    for (size_t i = 0; i < params.count(); ++i) {
        const TensorF& t = params.tensor(i);
        for (size_t j = 0; j < t.size(); ++j) {
            uint32_t bits;
            std::memcpy(&bits, &t[j], sizeof bits);
            put_u32(buf, bits);
        }
    }
    put_u32(buf, crc32(buf.data(), buf.size()));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("save_checkpoint: cannot open " + path.string());
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw DataError("save_checkpoint: write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("load_checkpoint: cannot open " + path.string());
    std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto* p = reinterpret_cast<const unsigned char*>(raw.data());

    if (raw.size() < 16 || std::memcmp(raw.data(), kMagic, 4) != 0)
        throw FormatError("load_checkpoint: bad magic in " + path.string());

    // Checksum gate comes before any parsing of the payload.
    const uint32_t stored = get_u32(p + raw.size() - 4);
    const uint32_t actual = crc32(raw.data(), raw.size() - 4);
    if (stored != actual)
        throw FormatError("load_checkpoint: checksum mismatch in " + path.string());

    const uint32_t version = get_u32(p + 4);
    if (version != kVersion)
        throw FormatError("load_checkpoint: unsupported version " + std::to_string(version));
    const uint32_t header_len = get_u32(p + 8);
    if (raw.size() < 16 + header_len)
        throw FormatError("load_checkpoint: truncated header in " + path.string());

    nlohmann::json header;
    try {
        header = nlohmann::json::parse(raw.substr(12, header_len));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("load_checkpoint: invalid header JSON: " + std::string(e.what()));
    }

    Checkpoint ckpt;
    try {
        ckpt.config = config_from_json(header.at("config"));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("load_checkpoint: bad config block: " + std::string(e.what()));
    }

    const auto manifest = shape_manifest(ckpt.config);
    const auto& plist = header.at("params");
    if (plist.size() != manifest.size())
        throw FormatError("load_checkpoint: header lists " + std::to_string(plist.size()) +
                          " tensors, config implies " + std::to_string(manifest.size()));

    size_t offset = 12 + header_len;
    for (size_t i = 0; i < manifest.size(); ++i) {
        const std::string name = plist[i].at("name").get<std::string>();
        const auto shape = plist[i].at("shape").get<std::vector<size_t>>();
        if (name != manifest[i].name || shape != manifest[i].shape)
            throw FormatError("load_checkpoint: tensor " + name +
                              " does not match the config-derived manifest");
        size_t count = 1;
        for (size_t e : shape) count *= e;
        if (offset + count * 4 > raw.size() - 4)
            throw FormatError("load_checkpoint: truncated payload in " + path.string());
        std::vector<float> values(count);
        for (size_t j = 0; j < count; ++j) {
            const uint32_t bits = get_u32(p + offset + j * 4);
            std::memcpy(&values[j], &bits, sizeof(float));
        }
        offset += count * 4;
        ckpt.params.add(name, TensorF(shape, std::move(values)));
    }
    if (offset != raw.size() - 4)
        throw FormatError("load_checkpoint: trailing bytes in " + path.string());
    return ckpt;
}

} // namespace slr
