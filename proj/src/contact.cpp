#include "endosim/contact.hpp"

#include <algorithm>
#include <string>

#include "endosim/errors.hpp"

namespace endosim {

std::string_view to_string(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::smooth:
      return "smooth";
    case SurfaceKind::foam:
      return "foam";
    case SurfaceKind::tissue:
      return "tissue";
    case SurfaceKind::custom:
      return "custom";
  }
  return "custom";
}

std::optional<SurfaceKind> parse_surface(std::string_view name) {
  for (SurfaceKind k : {SurfaceKind::smooth, SurfaceKind::foam, SurfaceKind::tissue, SurfaceKind::custom})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

void SurfaceSpec::validate() const {
  if (!(wall_friction > 0.0)) throw InvalidParams("surface friction must be > 0");
}

SurfaceSpec default_surface(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::smooth:
      return {kind, 0.2};
    case SurfaceKind::tissue:
      return {kind, 0.35};
    case SurfaceKind::foam:
      return {kind, 0.5};
    case SurfaceKind::custom:
      return {kind, 0.3};
  }
  return {kind, 0.3};
}

PipeProfile::PipeProfile(std::vector<Station> stations, double length, double scale)
    : stations_(std::move(stations)), length_(length), scale_(scale) {
  if (stations_.empty()) throw InvalidParams("pipe profile needs at least one station");
  if (!(scale_ > 0.0)) throw InvalidParams("pipe scale must be > 0");
  if (!(length_ >= 0.0)) throw InvalidParams("pipe length must be >= 0");
  for (std::size_t i = 0; i < stations_.size(); ++i) {
    const Station& s = stations_[i];
    if (!(s.diameter > 0.0)) throw InvalidParams("station diameter must be > 0");
    if (!(s.position >= 0.0)) throw InvalidParams("station position must be >= 0");
    s.surface.validate();
    if (i > 0 && !(s.position > stations_[i - 1].position))
      throw InvalidParams("station positions must be strictly increasing");
  }
  if (stations_.front().position != 0.0) throw InvalidParams("first station must sit at position 0");
  if (stations_.back().position > length_) throw InvalidParams("station lies beyond the pipe length");
}

PipeProfile PipeProfile::with_scale(double scale) const { return PipeProfile(stations_, length_, scale); }

PipeProfile PipeProfile::with_surface(const SurfaceSpec& surface) const {
  auto st = stations_;
  for (auto& s : st) s.surface = surface;
  return PipeProfile(std::move(st), length_, scale_);
}

double PipeProfile::min_diameter() const {
  double m = stations_.front().diameter;
  for (const auto& s : stations_) m = std::min(m, s.diameter);
  return m * scale_;
}

double PipeProfile::max_diameter() const {
  double m = stations_.front().diameter;
  for (const auto& s : stations_) m = std::max(m, s.diameter);
  return m * scale_;
}

PipeSample pipe_diameter_at(const PipeProfile& profile, double x) {
  if (!(x >= 0.0 && x <= profile.length()))
    throw OutOfRange("position " + std::to_string(x) + " m outside pipe [0, " +
                     std::to_string(profile.length()) + "] m");
  const auto& st = profile.stations();
  const double xs = x / profile.scale();
  auto it = std::upper_bound(st.begin(), st.end(), xs,
                             [](double v, const Station& s) { return v < s.position; });
  const Station& left = *(it - 1);
  if (it == st.end() || xs == left.position) return {left.diameter * profile.scale(), left.surface};
  const Station& right = *it;
  const double u = (xs - left.position) / (right.position - left.position);
  const double d = left.diameter + u * (right.diameter - left.diameter);
  return {d * profile.scale(), left.surface};
}

PipeProfile uniform_pipe(double diameter, double length, const SurfaceSpec& surface) {
  return PipeProfile({{0.0, diameter, surface}}, length);
}

PipeProfile colon_preset(double scale) {
  // Segment order follows insertion; positions are approximate cumulative
  // segment midpoints along a 1.5 m colon.
  const SurfaceSpec tissue = default_surface(SurfaceKind::tissue);
  return PipeProfile({{0.00, 36e-3, tissue},
                      {0.15, 26e-3, tissue},
                      {0.55, 33e-3, tissue},
                      {0.85, 37e-3, tissue},
                      {1.30, 45e-3, tissue},
                      {1.45, 44e-3, tissue}},
                     1.50, scale);
}

ContactState contact_state(double tip_diameter, double lumen_diameter, const DriveTrainParams& params,
                           ContactBracket bracket) {
  if (!(tip_diameter > 0.0 && lumen_diameter > 0.0)) throw OutOfRange("diameters must be > 0");
  const double d = params.worm_diameter;
  const double b = bracket == ContactBracket::verbatim ? tip_diameter - 0.5 * (lumen_diameter - d)
                                                       : 0.5 * (tip_diameter - lumen_diameter + d);
  ContactState c;
  if (b > 0.0) {
    c.engaged = true;
    c.deflection = b;
    c.normal_force_per_track = params.track_stiffness * b;
  }
  return c;
}

double traction_capacity(double tip_diameter, double lumen_diameter, const DriveTrainParams& params,
                         const SurfaceSpec& surface, ContactBracket bracket) {
  const ContactState c = contact_state(tip_diameter, lumen_diameter, params, bracket);
  return static_cast<double>(params.tracks) * surface.wall_friction * c.normal_force_per_track;
}

}  // namespace endosim
