#pragma once

#include <filesystem>

#include "ambiaug/clip.hpp"

namespace ambiaug {

// Reads a RIFF/WAVE file holding (order+1)^2 ambisonic channels in SN3D/ACN
// wire convention. Accepts 16/24-bit PCM and 32-bit IEEE float, including
// WAVE_FORMAT_EXTENSIBLE headers. The returned clip is converted to the
// internal N3D normalization; the source sample format is preserved in
// source_format so a later write can round-trip.
AmbisonicClip read_audio(const std::filesystem::path& path);

// Writes the clip in SN3D/ACN wire convention using clip.source_format.
// The clip may be in either normalization; conversion happens on a copy.
void write_audio(const AmbisonicClip& clip, const std::filesystem::path& path);

}  // namespace ambiaug
