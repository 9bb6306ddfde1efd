#pragma once

#include <Eigen/Dense>

namespace ambiaug {

// Channel weighting convention for ambisonic coefficients. The wire format
// of FOA datasets is SN3D; all transformation math here assumes the
// orthonormal N3D weighting. First-order conversion scales the dipole
// channels by sqrt(3).
enum class ShNormalization { Sn3d, N3d };

// Sample encoding of the backing audio file.
enum class SampleFormat { Pcm16, Pcm24, Float32 };

// Multichannel ambisonic signal. Rows are ACN channels, columns are frames.
struct AmbisonicClip {
  Eigen::MatrixXd samples;
  int sample_rate = 24000;
  int order = 0;
  ShNormalization normalization = ShNormalization::N3d;
  SampleFormat source_format = SampleFormat::Float32;

  int channels() const { return static_cast<int>(samples.rows()); }
  int frames() const { return static_cast<int>(samples.cols()); }
};

// Rescales channels in place between SN3D and N3D weighting. A no-op when
// the clip already has the target normalization.
void convert_normalization(AmbisonicClip& clip, ShNormalization target);

}  // namespace ambiaug
