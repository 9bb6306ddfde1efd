#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <map>
#include <vector>

namespace ambiaug {

// One sound event in one label frame. The activity vector points toward the
// event's direction of arrival; its length is the activity in [0, 1], where
// attenuated activity below 1 encodes directional suppression.
struct AccdoaEvent {
  int class_id = 0;
  int track_id = 0;
  Eigen::Vector3d vec = Eigen::Vector3d::Zero();
};

// Frame-indexed event labels (100 ms frames in the DCASE convention).
struct AccdoaFrameLabels {
  std::map<int, std::vector<AccdoaEvent>> frames;

  int event_count() const;
};

constexpr int kNumEventClasses = 12;

// Reads a DCASE metadata CSV: frame,class,track,azimuth_deg,elevation_deg
// per row, angles as integers. A sixth activity column is accepted when
// present (written by write_labels with extended_activity). Lines starting
// with '#' are ignored. Malformed rows raise with their line number.
AccdoaFrameLabels read_labels(const std::filesystem::path& path);

struct LabelWriteOptions {
  // The plain wire format carries only angles, so activity lengths round
  // back to full. Extended output appends the activity as a sixth column
  // and flags it in a '#' header comment.
  bool extended_activity = false;
};

void write_labels(const AccdoaFrameLabels& labels, const std::filesystem::path& path,
                  const LabelWriteOptions& options = {});

}  // namespace ambiaug
