#include "speckle/extractor.hpp"

#include <fstream>

#include "json.hpp"

#include "speckle/parallel.hpp"
#include "speckle/sha256.hpp"

namespace speckle {

void ExtractorConfig::validate() const {
    if (block_bits < out_bits_per_block)
        throw InvalidArgument("extractor: block_bits must be >= " +
                              std::to_string(out_bits_per_block));
    if (block_bits % 8 != 0)
        throw InvalidArgument("extractor: block_bits must be a multiple of 8");
}

std::vector<uint8_t> image_to_bytes(const SpeckleImage& img) { return img.data(); }

uint64_t extracted_bits_for(std::span<const uint64_t> image_bits, const ExtractorConfig& cfg) {
    cfg.validate();
    if (cfg.span_images) {
        uint64_t total = 0;
        for (uint64_t b : image_bits) total += b;
        return total / cfg.block_bits * ExtractorConfig::out_bits_per_block;
    }
    uint64_t out = 0;
    for (uint64_t b : image_bits)
        out += b / cfg.block_bits * ExtractorConfig::out_bits_per_block;
    return out;
}

namespace {

// (byte offset, block count) per input segment; segments are whole images
// unless spanning is enabled, in which case there is one segment.
struct BlockLayout {
    std::vector<std::pair<size_t, size_t>> segments;  // (start byte, num blocks)
    size_t total_blocks = 0;
};

BlockLayout layout_blocks(std::span<const SpeckleImage> images, const ExtractorConfig& cfg) {
    const size_t block_bytes = cfg.block_bits / 8;
    BlockLayout layout;
    size_t offset = 0;
    if (cfg.span_images) {
        size_t total = 0;
        for (const auto& img : images) total += img.pixels();
        const size_t blocks = total / block_bytes;
        layout.segments.emplace_back(0, blocks);
        layout.total_blocks = blocks;
        return layout;
    }
    for (const auto& img : images) {
        const size_t blocks = img.pixels() / block_bytes;
        layout.segments.emplace_back(offset, blocks);
        layout.total_blocks += blocks;
        offset += img.pixels();
    }
    return layout;
}

}  // namespace

RandomBitstream extract(std::span<const SpeckleImage> images, const ExtractorConfig& cfg,
                        int threads) {
    cfg.validate();
    if (images.empty()) throw InvalidArgument("extract: no images");

    // One contiguous raster buffer in image order.
    size_t total_bytes = 0;
    for (const auto& img : images) total_bytes += img.pixels();
    std::vector<uint8_t> raw;
    raw.reserve(total_bytes);
    for (const auto& img : images) raw.insert(raw.end(), img.data().begin(), img.data().end());

    const size_t block_bytes = cfg.block_bits / 8;
    const BlockLayout layout = layout_blocks(images, cfg);

    // Flat table of block start offsets so hashing can be index-parallel.
    std::vector<size_t> block_starts;
    block_starts.reserve(layout.total_blocks);
    for (const auto& [seg_start, blocks] : layout.segments)
        for (size_t b = 0; b < blocks; ++b) block_starts.push_back(seg_start + b * block_bytes);

    std::vector<uint8_t> out(block_starts.size() * 32);
    parallel_for(block_starts.size(), threads, [&](size_t b) {
        const Sha256::Digest d =
            Sha256::hash(std::span<const uint8_t>(raw.data() + block_starts[b], block_bytes));
        std::copy(d.begin(), d.end(), out.begin() + static_cast<ptrdiff_t>(b * 32));
    });

    RandomBitstream stream;
    stream.bits = BitString::from_bytes(std::move(out));
    stream.provenance.block_bits = cfg.block_bits;
    return stream;
}

GreyHistogram hashed_image_view(const SpeckleImage& img, const ExtractorConfig& cfg) {
    const RandomBitstream stream = extract(std::span<const SpeckleImage>(&img, 1), cfg);
    GreyHistogram hist;
    hist.add_bytes(stream.bits.bytes());
    return hist;
}

std::string StreamProvenance::to_json() const {
    nlohmann::json j;
    j["puf_seed"] = puf_seed;
    j["pattern_seeds"] = pattern_seeds;
    j["config_digest"] = config_digest;
    j["block_bits"] = block_bits;
    return j.dump(2);
}

void write_bitstream(const RandomBitstream& stream, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path.string(), "cannot open bitstream for writing");
    const auto& bytes = stream.bits.bytes();
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError(path.string(), "failed writing bitstream");
}

void write_bitstream_ascii(const RandomBitstream& stream, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError(path.string(), "cannot open ASCII bitstream for writing");
    const size_t n = stream.bits.size();
    std::string line;
    line.reserve(65);
    for (size_t i = 0; i < n; ++i) {
        line.push_back(stream.bits.get(i) ? '1' : '0');
        if (line.size() == 64 || i + 1 == n) {
            line.push_back('\n');
            out << line;
            line.clear();
        }
    }
    if (!out) throw IoError(path.string(), "failed writing ASCII bitstream");
}

BitString read_bitstream(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open bitstream for reading");
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    return BitString::from_bytes(std::move(bytes));
}

}  // namespace speckle
