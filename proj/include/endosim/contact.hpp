#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "endosim/drivetrain.hpp"

namespace endosim {

enum class SurfaceKind { smooth, foam, tissue, custom };

std::string_view to_string(SurfaceKind kind);
std::optional<SurfaceKind> parse_surface(std::string_view name);

/// Lumen lining with its track-to-wall friction coefficient.
struct SurfaceSpec {
  SurfaceKind kind = SurfaceKind::smooth;
  double wall_friction = 0.2;

  std::string_view name() const { return to_string(kind); }
  void validate() const;
};

/// Default catalog; only the ordering smooth < tissue < foam is measured,
/// the magnitudes are starting points for calibration.
SurfaceSpec default_surface(SurfaceKind kind);

struct Station {
  double position;  // m, unscaled
  double diameter;  // m, unscaled
  SurfaceSpec surface;
};

/// Inner-diameter profile along the pipe axis.
///
/// Stations are stored at 1:1; `scale` multiplies positions, diameters and
/// length on every query. Diameter tapers linearly between stations and is
/// held constant past the last one; the surface is that of the last
/// station at or before the query point.
class PipeProfile {
 public:
  PipeProfile() = default;
  PipeProfile(std::vector<Station> stations, double length, double scale = 1.0);

  double length() const { return length_ * scale_; }
  double scale() const { return scale_; }
  const std::vector<Station>& stations() const { return stations_; }

  PipeProfile with_scale(double scale) const;
  /// Same geometry with every station lined by `surface`.
  PipeProfile with_surface(const SurfaceSpec& surface) const;

  double min_diameter() const;
  double max_diameter() const;

 private:
  std::vector<Station> stations_;
  double length_ = 0.0;
  double scale_ = 1.0;
};

struct PipeSample {
  double diameter;
  SurfaceSpec surface;
};

PipeSample pipe_diameter_at(const PipeProfile& profile, double x);

PipeProfile uniform_pipe(double diameter, double length, const SurfaceSpec& surface);

/// Six averaged colon segments, rectum first, at the given geometric scale.
PipeProfile colon_preset(double scale = 1.0);

/// How the track deflection bracket of the friction law is read.
///
/// `verbatim`: D - (W - d) / 2. `half_difference`: (D - W + d) / 2.
enum class ContactBracket { verbatim, half_difference };

struct ContactState {
  bool engaged = false;
  double deflection = 0.0;              // m
  double normal_force_per_track = 0.0;  // N
};

ContactState contact_state(double tip_diameter, double lumen_diameter, const DriveTrainParams& params,
                           ContactBracket bracket = ContactBracket::verbatim);

/// Maximum static friction the tracks can transmit: n mu_c k (bracket),
/// clamped at zero when the bracket is not positive.
double traction_capacity(double tip_diameter, double lumen_diameter, const DriveTrainParams& params,
                         const SurfaceSpec& surface, ContactBracket bracket = ContactBracket::verbatim);

}  // namespace endosim
