#include "slrbench/landmark.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace slr {

namespace {

constexpr char kMagic[4] = {'S', 'L', 'R', 'B'};
constexpr uint32_t kVersion = 1;

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

void put_f32(std::string& buf, float v) {
    uint32_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    put_u32(buf, bits);
}

float get_f32(const unsigned char* p) {
    const uint32_t bits = get_u32(p);
    float v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

} // namespace

void save_slrb(const std::filesystem::path& path, const LandmarkSequence& seq) {
    const size_t t = seq.num_frames();
    if (t < 2) throw DataError("save_slrb: sequence must have at least 2 frames");
    if (seq.frames.size() != t * kFeatDim)
        throw DimensionError("save_slrb: frame buffer is not a whole number of frames");

    std::string buf;
    buf.reserve(16 + seq.frames.size() * 4);
    buf.append(kMagic, 4);
    put_u32(buf, kVersion);
    put_u32(buf, static_cast<uint32_t>(t));
    put_u32(buf, static_cast<uint32_t>(kFeatDim));
    for (const float v : seq.frames) put_f32(buf, v);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("save_slrb: cannot open " + path.string());
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw DataError("save_slrb: write failed for " + path.string());
}

LandmarkSequence load_slrb(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("load_slrb: cannot open " + path.string());
    std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto* p = reinterpret_cast<const unsigned char*>(raw.data());

    if (raw.size() < 16 || std::memcmp(raw.data(), kMagic, 4) != 0)
        throw FormatError("load_slrb: bad magic in " + path.string());
    const uint32_t version = get_u32(p + 4);
    if (version != kVersion)
        throw FormatError("load_slrb: unsupported version " + std::to_string(version) + " in " +
                          path.string());
    const uint32_t num_frames = get_u32(p + 8);
    const uint32_t feat_dim = get_u32(p + 12);
    if (feat_dim != kFeatDim)
        throw FormatError("load_slrb: feat_dim " + std::to_string(feat_dim) + " in " +
                          path.string() + ", expected " + std::to_string(kFeatDim));
    if (num_frames < 2)
        throw FormatError("load_slrb: sequence in " + path.string() +
                          " has fewer than 2 frames");
    const size_t payload = static_cast<size_t>(num_frames) * feat_dim * 4;
    if (raw.size() != 16 + payload)
        throw FormatError("load_slrb: payload size mismatch in " + path.string() + " (got " +
                          std::to_string(raw.size()) + " bytes, want " +
                          std::to_string(16 + payload) + ")");

    LandmarkSequence seq;
    seq.frames.resize(static_cast<size_t>(num_frames) * feat_dim);
    for (size_t i = 0; i < seq.frames.size(); ++i) {
        seq.frames[i] = get_f32(p + 16 + i * 4);
        if (!std::isfinite(seq.frames[i]))
            throw DataError("load_slrb: non-finite value in " + path.string());
    }
    return seq;
}

void save_manifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
    nlohmann::json doc;
    doc["classes"] = manifest.num_classes;
    auto& samples = doc["samples"] = nlohmann::json::array();
    for (const auto& s : manifest.samples) {
        samples.push_back({{"id", s.id},
                           {"label", s.label},
                           {"signer", s.signer},
                           {"file", s.file},
                           {"frames", s.num_frames}});
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("save_manifest: cannot open " + path.string());
    out << doc.dump(2) << "\n";
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("load_manifest: cannot open " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("load_manifest: invalid JSON in " + path.string() + ": " + e.what());
    }

    DatasetManifest m;
    m.root = path.parent_path();
    try {
        m.num_classes = doc.at("classes").get<int>();
        for (const auto& s : doc.at("samples")) {
            SampleInfo info;
            info.id = s.at("id").get<std::string>();
            info.label = s.at("label").get<int>();
            info.signer = s.at("signer").get<std::string>();
            info.file = s.at("file").get<std::string>();
            info.num_frames = s.at("frames").get<size_t>();
            m.samples.push_back(std::move(info));
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("load_manifest: missing or mistyped field in " + path.string() + ": " +
                          e.what());
    }

    if (m.num_classes <= 0) throw DataError("load_manifest: classes must be positive");
    std::set<std::string> ids;
    for (const auto& s : m.samples) {
        if (s.label < 0 || s.label >= m.num_classes)
            throw DataError("load_manifest: sample " + s.id + " has label " +
                            std::to_string(s.label) + " outside [0, " +
                            std::to_string(m.num_classes) + ")");
        if (!ids.insert(s.id).second)
            throw DataError("load_manifest: duplicate sample id " + s.id);
        m.signers.insert(s.signer);
    }
    return m;
}

const SampleInfo& DatasetManifest::find(const std::string& sample_id) const {
    for (const auto& s : samples)
        if (s.id == sample_id) return s;
    throw DataError("manifest: unknown sample id " + sample_id);
}

LandmarkSequence load_sequence(const DatasetManifest& manifest, const SampleInfo& info) {
    LandmarkSequence seq = load_slrb(manifest.root / info.file);
    if (seq.num_frames() != info.num_frames)
        throw FormatError("load_sequence: " + info.id + " holds " +
                          std::to_string(seq.num_frames()) + " frames, manifest says " +
                          std::to_string(info.num_frames));
    seq.id = info.id;
    seq.label = info.label;
    seq.signer = info.signer;
    return seq;
}

} // namespace slr
