#include "ambiaug/wav_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ambiaug {
namespace {

constexpr uint16_t kFormatPcm = 0x0001;
constexpr uint16_t kFormatFloat = 0x0003;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint32_t read_u32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(v & 0xFF);
  out.push_back((v >> 8) & 0xFF);
  out.push_back((v >> 16) & 0xFF);
  out.push_back((v >> 24) & 0xFF);
}

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(v & 0xFF);
  out.push_back((v >> 8) & 0xFF);
}

void put_tag(std::vector<uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

double n3d_factor(int acn) {
  const int degree = static_cast<int>(std::floor(std::sqrt(static_cast<double>(acn)) + 1e-9));
  return std::sqrt(2.0 * degree + 1.0);
}

int order_for_channels(int channels, const std::string& context) {
  const int root = static_cast<int>(std::lround(std::sqrt(static_cast<double>(channels))));
  if (root * root != channels || root < 1) {
    throw std::runtime_error(context + ": channel count is not (N+1)^2 (got " +
                             std::to_string(channels) + ")");
  }
  return root - 1;
}

}  // namespace

void convert_normalization(AmbisonicClip& clip, ShNormalization target) {
  if (clip.normalization == target) return;
  const bool to_n3d = target == ShNormalization::N3d;
  for (int ch = 0; ch < clip.channels(); ++ch) {
    const double f = n3d_factor(ch);
    clip.samples.row(ch) *= to_n3d ? f : 1.0 / f;
  }
  clip.normalization = target;
}

AmbisonicClip read_audio(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_audio: cannot open " + path.string());
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  const std::string name = path.filename().string();

  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw std::runtime_error("read_audio: malformed header in " + name);
  }

  uint16_t format = 0;
  uint16_t channels = 0;
  uint32_t sample_rate = 0;
  uint16_t bits = 0;
  bool have_fmt = false;
  size_t data_off = 0;
  size_t data_size = 0;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const uint8_t* hdr = bytes.data() + pos;
    const uint32_t chunk_size = read_u32(hdr + 4);
    const size_t body = pos + 8;
    if (body + chunk_size > bytes.size()) {
      throw std::runtime_error("read_audio: truncated chunk in " + name);
    }
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (chunk_size < 16) throw std::runtime_error("read_audio: malformed header in " + name);
      const uint8_t* f = bytes.data() + body;
      format = read_u16(f);
      channels = read_u16(f + 2);
      sample_rate = read_u32(f + 4);
      bits = read_u16(f + 14);
      if (format == kFormatExtensible) {
        // Format code lives in the first two bytes of the SubFormat GUID.
        if (chunk_size < 40) throw std::runtime_error("read_audio: malformed header in " + name);
        format = read_u16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data_off = body;
      data_size = chunk_size;
    }
    pos = body + chunk_size + (chunk_size & 1);
  }

  if (!have_fmt || data_off == 0) {
    throw std::runtime_error("read_audio: malformed header in " + name);
  }

  SampleFormat sample_format;
  if (format == kFormatPcm && bits == 16) {
    sample_format = SampleFormat::Pcm16;
  } else if (format == kFormatPcm && bits == 24) {
    sample_format = SampleFormat::Pcm24;
  } else if (format == kFormatFloat && bits == 32) {
    sample_format = SampleFormat::Float32;
  } else {
    throw std::runtime_error("read_audio: unsupported encoding in " + name + " (format " +
                             std::to_string(format) + ", " + std::to_string(bits) + " bits)");
  }
  if (channels == 0) throw std::runtime_error("read_audio: malformed header in " + name);

  const int order = order_for_channels(channels, "read_audio: " + name);
  const size_t bytes_per_sample = bits / 8;
  const size_t block = bytes_per_sample * channels;
  const size_t frames = data_size / block;

  AmbisonicClip clip;
  clip.sample_rate = static_cast<int>(sample_rate);
  clip.order = order;
  clip.normalization = ShNormalization::Sn3d;
  clip.source_format = sample_format;
  clip.samples.resize(channels, frames);

  const uint8_t* d = bytes.data() + data_off;
  for (size_t fr = 0; fr < frames; ++fr) {
    for (int ch = 0; ch < channels; ++ch) {
      const uint8_t* s = d + fr * block + ch * bytes_per_sample;
      double v = 0.0;
      switch (sample_format) {
        case SampleFormat::Pcm16: {
          const int16_t raw = static_cast<int16_t>(s[0] | (s[1] << 8));
          v = raw / 32768.0;
          break;
        }
        case SampleFormat::Pcm24: {
          int32_t raw = s[0] | (s[1] << 8) | (s[2] << 16);
          if (raw & 0x800000) raw -= 0x1000000;
          v = raw / 8388608.0;
          break;
        }
        case SampleFormat::Float32: {
          float f;
          std::memcpy(&f, s, 4);
          v = f;
          break;
        }
      }
      clip.samples(ch, fr) = v;
    }
  }

  convert_normalization(clip, ShNormalization::N3d);
  return clip;
}

void write_audio(const AmbisonicClip& clip, const std::filesystem::path& path) {
  AmbisonicClip wire = clip;
  convert_normalization(wire, ShNormalization::Sn3d);

  const int channels = wire.channels();
  const int frames = wire.frames();
  order_for_channels(channels, "write_audio: " + path.filename().string());

  uint16_t bits = 0;
  uint16_t format = kFormatPcm;
  switch (wire.source_format) {
    case SampleFormat::Pcm16: bits = 16; break;
    case SampleFormat::Pcm24: bits = 24; break;
    case SampleFormat::Float32: bits = 32; format = kFormatFloat; break;
  }
  const uint32_t block = channels * (bits / 8);
  const uint32_t data_size = block * frames;
  const bool is_float = format == kFormatFloat;
  // Non-PCM formats carry cbSize and a fact chunk.
  const uint32_t fmt_size = is_float ? 18 : 16;
  const uint32_t riff_size = 4 + (8 + fmt_size) + (is_float ? 12 : 0) + 8 + data_size;

  std::vector<uint8_t> out;
  out.reserve(riff_size + 8);
  put_tag(out, "RIFF");
  put_u32(out, riff_size);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, fmt_size);
  put_u16(out, format);
  put_u16(out, static_cast<uint16_t>(channels));
  put_u32(out, static_cast<uint32_t>(wire.sample_rate));
  put_u32(out, static_cast<uint32_t>(wire.sample_rate) * block);
  put_u16(out, static_cast<uint16_t>(block));
  put_u16(out, bits);
  if (is_float) {
    put_u16(out, 0);  // cbSize
    put_tag(out, "fact");
    put_u32(out, 4);
    put_u32(out, static_cast<uint32_t>(frames));
  }
  put_tag(out, "data");
  put_u32(out, data_size);

  for (int fr = 0; fr < frames; ++fr) {
    for (int ch = 0; ch < channels; ++ch) {
      const double v = wire.samples(ch, fr);
      switch (wire.source_format) {
        case SampleFormat::Pcm16: {
          long q = std::lround(v * 32768.0);
          q = std::clamp(q, -32768L, 32767L);
          put_u16(out, static_cast<uint16_t>(static_cast<int16_t>(q)));
          break;
        }
        case SampleFormat::Pcm24: {
          long q = std::lround(v * 8388608.0);
          q = std::clamp(q, -8388608L, 8388607L);
          const uint32_t u = static_cast<uint32_t>(q) & 0xFFFFFF;
          out.push_back(u & 0xFF);
          out.push_back((u >> 8) & 0xFF);
          out.push_back((u >> 16) & 0xFF);
          break;
        }
        case SampleFormat::Float32: {
          const float f = static_cast<float>(v);
          uint8_t b[4];
          std::memcpy(b, &f, 4);
          out.insert(out.end(), b, b + 4);
          break;
        }
      }
    }
  }

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("write_audio: cannot open " + path.string());
  os.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!os) throw std::runtime_error("write_audio: write failed for " + path.string());
}

}  // namespace ambiaug
