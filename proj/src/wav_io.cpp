#include "susbam/wav_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "susbam/error.hpp"

namespace susbam {

namespace {

constexpr std::uint16_t kFormatPcm = 1;

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
           (static_cast<std::uint32_t>(b[at + 2]) << 16) |
           (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) {
        out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xff));
    }
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
    out.insert(out.end(), tag, tag + 4);
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
    return std::memcmp(b.data() + at, tag, 4) == 0;
}

bool looks_like_mp3(std::span<const std::uint8_t> b) {
    if (b.size() >= 3 && b[0] == 'I' && b[1] == 'D' && b[2] == '3') return true;
    // MPEG audio frame sync: 11 set bits.
    return b.size() >= 2 && b[0] == 0xff && (b[1] & 0xe0) == 0xe0;
}

}  // namespace

PcmClip::PcmClip(std::vector<std::int16_t> samples, std::uint32_t sample_rate_hz,
                 std::uint16_t channels)
    : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz), channels_(channels) {
    if (sample_rate_hz_ == 0) {
        throw Error(ErrorCode::InvalidArgument, "sample rate must be positive");
    }
    if (channels_ == 0) {
        throw Error(ErrorCode::InvalidArgument, "channel count must be positive");
    }
    if (samples_.size() % channels_ != 0) {
        throw Error(ErrorCode::InvalidArgument, "sample count is not a multiple of channels");
    }
}

std::vector<std::uint8_t> encode_wav(const PcmClip& clip) {
    const auto data_bytes = static_cast<std::uint32_t>(clip.samples().size() * 2);
    const std::uint16_t block_align = static_cast<std::uint16_t>(clip.channels() * 2);

    std::vector<std::uint8_t> out;
    out.reserve(kWavHeaderBytes + data_bytes);
    put_tag(out, "RIFF");
    put_u32(out, 36 + data_bytes);
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put_u32(out, 16);
    put_u16(out, kFormatPcm);
    put_u16(out, clip.channels());
    put_u32(out, clip.sample_rate_hz());
    put_u32(out, clip.sample_rate_hz() * block_align);
    put_u16(out, block_align);
    put_u16(out, 16);
    put_tag(out, "data");
    put_u32(out, data_bytes);
    for (std::int16_t s : clip.samples()) {
        put_u16(out, static_cast<std::uint16_t>(s));
    }
    return out;
}

PcmClip decode_wav(std::span<const std::uint8_t> bytes) {
    if (looks_like_mp3(bytes)) {
        throw Error(ErrorCode::UnsupportedFormat, "MPEG audio is not supported, only PCM16 WAV");
    }
    if (bytes.size() < 4 || !tag_is(bytes, 0, "RIFF")) {
        throw Error(ErrorCode::NotWav, "missing RIFF header");
    }
    if (bytes.size() < 12) {
        throw Error(ErrorCode::TruncatedFile, "RIFF header cut short");
    }
    if (!tag_is(bytes, 8, "WAVE")) {
        throw Error(ErrorCode::NotWav, "RIFF form type is not WAVE");
    }

    bool have_fmt = false;
    std::uint16_t channels = 0;
    std::uint32_t rate = 0;
    std::size_t pos = 12;
    while (true) {
        if (pos + 8 > bytes.size()) {
            throw Error(ErrorCode::TruncatedFile, "no data chunk before end of file");
        }
        const std::uint32_t chunk_size = read_u32(bytes, pos + 4);
        const std::size_t body = pos + 8;

        if (tag_is(bytes, pos, "fmt ")) {
            if (chunk_size < 16 || body + 16 > bytes.size()) {
                throw Error(ErrorCode::TruncatedFile, "fmt chunk cut short");
            }
            const std::uint16_t format = read_u16(bytes, body);
            channels = read_u16(bytes, body + 2);
            rate = read_u32(bytes, body + 4);
            const std::uint16_t bits = read_u16(bytes, body + 14);
            if (format != kFormatPcm) {
                throw Error(ErrorCode::UnsupportedFormat,
                            "format code " + std::to_string(format) + " is not uncompressed PCM");
            }
            if (bits != 16) {
                throw Error(ErrorCode::UnsupportedFormat,
                            std::to_string(bits) + "-bit samples are not supported");
            }
            if (channels == 0 || rate == 0) {
                throw Error(ErrorCode::NotWav, "fmt chunk declares zero channels or rate");
            }
            have_fmt = true;
        } else if (tag_is(bytes, pos, "data")) {
            if (!have_fmt) {
                throw Error(ErrorCode::NotWav, "data chunk precedes fmt chunk");
            }
            if (body + chunk_size > bytes.size()) {
                throw Error(ErrorCode::TruncatedFile,
                            "data chunk declares " + std::to_string(chunk_size) + " bytes, " +
                                std::to_string(bytes.size() - body) + " present");
            }
            const std::size_t frame_bytes = std::size_t{channels} * 2;
            if (chunk_size % frame_bytes != 0) {
                throw Error(ErrorCode::TruncatedFile, "data chunk ends mid-frame");
            }
            std::vector<std::int16_t> samples(chunk_size / 2);
            for (std::size_t i = 0; i < samples.size(); ++i) {
                samples[i] = static_cast<std::int16_t>(read_u16(bytes, body + 2 * i));
            }
            return PcmClip(std::move(samples), rate, channels);
        }
        // Chunks are word aligned.
        pos = body + chunk_size + (chunk_size & 1u);
    }
}

PcmClip read_wav(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw Error(ErrorCode::IoFailure, "read failed on " + path.string());
    }
    return decode_wav(bytes);
}

void write_wav(const PcmClip& clip, const std::filesystem::path& path) {
    const auto bytes = encode_wav(clip);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
        throw Error(ErrorCode::IoFailure, "write failed on " + path.string());
    }
}

SampleBuffer to_float(const PcmClip& clip, std::size_t channel) {
    if (channel >= clip.channels()) {
        throw Error(ErrorCode::BadChannel, "channel " + std::to_string(channel) + " of " +
                                               std::to_string(clip.channels()));
    }
    const auto in = clip.samples();
    const std::size_t stride = clip.channels();
    std::vector<double> out(clip.frames());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<double>(in[i * stride + channel]) / 32768.0;
    }
    return SampleBuffer(std::move(out), static_cast<double>(clip.sample_rate_hz()));
}

PcmClip to_pcm(const SampleBuffer& buffer) {
    std::vector<std::int16_t> out(buffer.size());
    std::transform(buffer.samples().begin(), buffer.samples().end(), out.begin(), [](double v) {
        const double scaled = std::round(v * 32767.0);
        return static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
    });
    const auto rate = static_cast<std::uint32_t>(std::lround(buffer.sample_rate_hz()));
    return PcmClip(std::move(out), std::max<std::uint32_t>(rate, 1));
}

}  // namespace susbam
