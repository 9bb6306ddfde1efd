#include "ambiaug/labels.hpp"

#include "ambiaug/sph.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ambiaug {
namespace {

constexpr double kPi = 3.14159265358979323846;

std::runtime_error row_error(const std::filesystem::path& path, int line, const std::string& why) {
  return std::runtime_error("read_labels: " + path.filename().string() + " line " +
                            std::to_string(line) + ": " + why);
}

double parse_number(const std::string& field, const std::filesystem::path& path, int line) {
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    throw row_error(path, line, "not a number: '" + field + "'");
  }
  while (used < field.size() && std::isspace(static_cast<unsigned char>(field[used]))) ++used;
  if (used != field.size()) throw row_error(path, line, "trailing junk in '" + field + "'");
  return v;
}

int parse_int(const std::string& field, const std::filesystem::path& path, int line) {
  const double v = parse_number(field, path, line);
  const double r = std::nearbyint(v);
  if (std::abs(v - r) > 1e-9) throw row_error(path, line, "expected integer, got '" + field + "'");
  return static_cast<int>(r);
}

}  // namespace

int AccdoaFrameLabels::event_count() const {
  int n = 0;
  for (const auto& [frame, events] : frames) n += static_cast<int>(events.size());
  return n;
}

AccdoaFrameLabels read_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_labels: cannot open " + path.string());

  AccdoaFrameLabels labels;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 5 && fields.size() != 6) {
      throw row_error(path, line_no, "expected 5 or 6 fields, got " +
                                         std::to_string(fields.size()));
    }

    const int frame = parse_int(fields[0], path, line_no);
    const int class_id = parse_int(fields[1], path, line_no);
    const int track_id = parse_int(fields[2], path, line_no);
    const double az_deg = parse_int(fields[3], path, line_no);
    const double el_deg = parse_int(fields[4], path, line_no);

    if (frame < 0) throw row_error(path, line_no, "negative frame index");
    if (class_id < 0 || class_id >= kNumEventClasses) {
      throw row_error(path, line_no,
                      "class id " + std::to_string(class_id) + " outside [0, " +
                          std::to_string(kNumEventClasses) + ")");
    }

    double activity = 1.0;
    if (fields.size() == 6) {
      activity = parse_number(fields[5], path, line_no);
      if (activity < 0.0 || activity > 1.0 + 1e-6) {
        throw row_error(path, line_no, "activity outside [0, 1]");
      }
    }

    AccdoaEvent e;
    e.class_id = class_id;
    e.track_id = track_id;
    e.vec = activity * Direction(az_deg * kPi / 180.0, el_deg * kPi / 180.0).unit();
    labels.frames[frame].push_back(e);
  }
  return labels;
}

void write_labels(const AccdoaFrameLabels& labels, const std::filesystem::path& path,
                  const LabelWriteOptions& options) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("write_labels: cannot open " + path.string());

  if (options.extended_activity) {
    out << "# columns: frame,class,track,azimuth,elevation,activity\n";
  }
  char buf[160];
  for (const auto& [frame, events] : labels.frames) {
    for (const AccdoaEvent& e : events) {
      const double len = e.vec.norm();
      if (len > 1.0 + 1e-6) {
        throw std::invalid_argument("write_labels: activity vector longer than 1");
      }
      double az_deg = 0.0;
      double el_deg = 0.0;
      if (len > 0.0) {
        const Direction d = Direction::from_unit(e.vec);
        az_deg = d.azimuth() * 180.0 / kPi;
        el_deg = d.elevation() * 180.0 / kPi;
      }
      if (options.extended_activity) {
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%ld,%ld,%.12g\n", frame, e.class_id, e.track_id,
                      std::lround(az_deg), std::lround(el_deg), len);
      } else {
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%ld,%ld\n", frame, e.class_id, e.track_id,
                      std::lround(az_deg), std::lround(el_deg));
      }
      out << buf;
    }
  }
  if (!out) throw std::runtime_error("write_labels: write failed for " + path.string());
}

}  // namespace ambiaug
