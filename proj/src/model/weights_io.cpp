#include "hmdrec/model/weights_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "hmdrec/error.hpp"

namespace hmdrec::model {

namespace {

class Writer {
public:
    void bytes(std::string_view s) { out_.insert(out_.end(), s.begin(), s.end()); }
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void count(std::size_t n) {
        if (n > UINT32_MAX) throw ConfigError("weights: count does not fit the file format");
        u32(static_cast<std::uint32_t>(n));
    }

    std::vector<std::uint8_t> take() { return std::move(out_); }

private:
    std::vector<std::uint8_t> out_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

    std::span<const std::uint8_t> take(std::size_t n, const char* what) {
        if (in_.size() - pos_ < n) {
            throw TruncatedFileError(std::string("weights file truncated while reading ") + what + " at byte " +
                                     std::to_string(pos_));
        }
        auto s = in_.subspan(pos_, n);
        pos_ += n;
        return s;
    }
    std::uint8_t u8(const char* what) { return take(1, what)[0]; }
    std::uint32_t u32(const char* what) {
        auto s = take(4, what);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | s[static_cast<std::size_t>(i)];
        return v;
    }
    std::uint64_t u64(const char* what) {
        auto s = take(8, what);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | s[static_cast<std::size_t>(i)];
        return v;
    }
    std::int32_t i32(const char* what) { return static_cast<std::int32_t>(u32(what)); }
    double f64(const char* what) { return std::bit_cast<double>(u64(what)); }

    std::size_t remaining() const { return in_.size() - pos_; }

private:
    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

// A count field larger than this cannot belong to a sane network.
constexpr std::uint32_t kMaxCount = 1u << 20;

std::uint32_t bounded(std::uint32_t v, const char* what) {
    if (v > kMaxCount) throw TopologyMismatchError(std::string("weights: implausible ") + what + " " + std::to_string(v));
    return v;
}

}  // namespace

std::vector<std::uint8_t> encode_weights(const NetworkWeights& weights) {
    const NetworkConfig& c = weights.config;
    Writer w;
    w.bytes(kWeightsMagic);
    w.u32(kWeightsVersion);
    w.count(c.window_len);
    w.count(c.streams.size());
    for (const auto& s : c.streams) {
        w.count(s.groups.size());
        for (auto g : s.groups) w.u8(static_cast<std::uint8_t>(g));
    }
    w.count(c.conv_channels.size());
    for (auto ch : c.conv_channels) w.count(ch);
    w.count(c.kernel);
    w.count(c.stride);
    w.count(c.padding);
    w.count(c.pool);
    w.count(c.fc.size());
    for (auto d : c.fc) w.count(d);
    w.count(c.classes.size());
    for (auto l : c.classes) w.i32(index_of(l));
    w.f64(c.dropout);
    w.u64(weights.parameter_count());
    for (auto a : weights.parameter_arrays()) {
        for (double v : a) w.f64(v);
    }
    return w.take();
}

NetworkWeights decode_weights(std::span<const std::uint8_t> bytes, const std::optional<NetworkConfig>& expected) {
    Reader r(bytes);
    if (bytes.size() < kWeightsMagic.size()) {
        if (!std::equal(bytes.begin(), bytes.end(), kWeightsMagic.begin())) {
            throw MagicMismatchError("weights: not a weight file (bad magic)");
        }
        throw TruncatedFileError("weights file truncated inside the magic string");
    }
    auto magic = r.take(kWeightsMagic.size(), "magic");
    if (!std::equal(magic.begin(), magic.end(), kWeightsMagic.begin())) {
        throw MagicMismatchError("weights: not a weight file (bad magic)");
    }
    const std::uint32_t version = r.u32("version");
    if (version != kWeightsVersion) {
        throw VersionMismatchError("weights: unsupported format version " + std::to_string(version));
    }

    NetworkConfig c;
    c.window_len = r.u32("window_len");
    c.streams.resize(bounded(r.u32("stream count"), "stream count"));
    for (auto& s : c.streams) {
        s.groups.resize(bounded(r.u32("group count"), "group count"));
        for (auto& g : s.groups) {
            const std::uint8_t id = r.u8("channel group");
            if (id > static_cast<std::uint8_t>(data::ChannelGroup::AngularAcceleration)) {
                throw TopologyMismatchError("weights: unknown channel group id " + std::to_string(id));
            }
            g = static_cast<data::ChannelGroup>(id);
        }
    }
    c.conv_channels.resize(bounded(r.u32("conv count"), "conv count"));
    for (auto& ch : c.conv_channels) ch = bounded(r.u32("conv channels"), "conv channels");
    c.kernel = r.u32("kernel");
    c.stride = r.u32("stride");
    c.padding = r.u32("padding");
    c.pool = r.u32("pool");
    c.fc.resize(bounded(r.u32("dense count"), "dense count"));
    for (auto& d : c.fc) d = bounded(r.u32("dense size"), "dense size");
    c.classes.resize(bounded(r.u32("class count"), "class count"));
    for (auto& l : c.classes) {
        const std::int32_t idx = r.i32("class index");
        if (idx < 0 || idx >= static_cast<std::int32_t>(kNumClasses)) {
            throw TopologyMismatchError("weights: class index " + std::to_string(idx) + " out of range");
        }
        l = label_at(static_cast<std::size_t>(idx));
    }
    c.dropout = r.f64("dropout");

    if (expected && !(*expected == c)) {
        throw TopologyMismatchError("weights: stored topology does not match the expected network");
    }
    try {
        validate(c);
    } catch (const ConfigError& e) {
        throw TopologyMismatchError(std::string("weights: invalid stored topology: ") + e.what());
    }

    NetworkWeights w = init_weights(c, 0);
    const std::uint64_t count = r.u64("parameter count");
    if (count != w.parameter_count()) {
        throw TopologyMismatchError("weights: parameter count " + std::to_string(count) + " does not match topology (" +
                                    std::to_string(w.parameter_count()) + ")");
    }
    if (r.remaining() < count * 8) {
        throw TruncatedFileError("weights file truncated: " + std::to_string(r.remaining()) + " bytes for " +
                                 std::to_string(count) + " parameters");
    }
    for (auto a : w.parameter_arrays()) {
        for (double& v : a) v = r.f64("parameters");
    }
    if (r.remaining() != 0) {
        throw TopologyMismatchError("weights: " + std::to_string(r.remaining()) + " trailing bytes after parameters");
    }
    return w;
}

void save_weights(const NetworkWeights& weights, const std::filesystem::path& path) {
    const auto bytes = encode_weights(weights);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing " + path.string());
}

NetworkWeights load_weights(const std::filesystem::path& path, const std::optional<NetworkConfig>& expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_weights(bytes, expected);
}

}  // namespace hmdrec::model
