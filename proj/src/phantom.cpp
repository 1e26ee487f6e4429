#include <cmath>
#include <numbers>

#include "spinenav/sim.hpp"

namespace spinenav {

Eigen::Vector3d SurfacePatch::evaluate(double u, double v) const {
  switch (kind) {
    case Kind::CylinderSide: {
      const double theta = 2.0 * std::numbers::pi * u;
      const Eigen::Vector3d radial =
          std::cos(theta) * axis_b + std::sin(theta) * axis_a.cross(axis_b);
      return origin + r0 * radial + v * r1 * axis_a;
    }
    case Kind::Disk: {
      const double theta = 2.0 * std::numbers::pi * u;
      const double rho = r0 + v * (r1 - r0);
      const Eigen::Vector3d radial =
          std::cos(theta) * axis_b + std::sin(theta) * axis_a.cross(axis_b);
      return origin + rho * radial;
    }
    case Kind::Rect:
      return origin + (2.0 * u - 1.0) * axis_a + (2.0 * v - 1.0) * axis_b;
  }
  return origin;
}

void SurfacePatch::metrics(double /*u*/, double v, double& mm_per_u, double& mm_per_v) const {
  switch (kind) {
    case Kind::CylinderSide:
      mm_per_u = 2.0 * std::numbers::pi * r0;
      mm_per_v = r1;
      return;
    case Kind::Disk: {
      const double rho = std::max(r0 + v * (r1 - r0), 0.5);
      mm_per_u = 2.0 * std::numbers::pi * rho;
      mm_per_v = r1 - r0;
      return;
    }
    case Kind::Rect:
      mm_per_u = 2.0 * axis_a.norm();
      mm_per_v = 2.0 * axis_b.norm();
      return;
  }
}

const std::array<std::string, 5>& Phantom::verification_names() {
  static const std::array<std::string, 5> names = {
      "spinous_tip", "transverse_left_tip", "transverse_right_tip", "lamina_left",
      "lamina_right"};
  return names;
}

namespace {

void sample_patch(const Phantom& phantom, int patch_index, double spacing,
                  std::vector<Eigen::Vector3d>& points, std::vector<SurfaceParam>& params) {
  const SurfacePatch& patch = phantom.patches[patch_index];
  double span_u = 0.0;
  double span_v = 0.0;
  patch.metrics(0.0, 0.5, span_u, span_v);

  if (patch.kind == SurfacePatch::Kind::Disk) {
    // Concentric rings so the angular pitch tracks the ring radius.
    const int rings = std::max(1, static_cast<int>(std::llround((patch.r1 - patch.r0) / spacing)));
    for (int j = 0; j < rings; ++j) {
      const double v = (j + 0.5) / rings;
      const double rho = patch.r0 + v * (patch.r1 - patch.r0);
      const int slots = std::max(4, static_cast<int>(
                                        std::llround(2.0 * std::numbers::pi * rho / spacing)));
      for (int i = 0; i < slots; ++i) {
        const double u = (i + 0.5) / slots;
        points.push_back(patch.evaluate(u, v));
        params.push_back({patch_index, u, v});
      }
    }
    return;
  }

  const int nu = std::max(patch.u_periodic() ? 4 : 1,
                          static_cast<int>(std::llround(span_u / spacing)));
  const int nv = std::max(1, static_cast<int>(std::llround(span_v / spacing)));
  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < nu; ++i) {
      const double u = (i + 0.5) / nu;
      const double v = (j + 0.5) / nv;
      points.push_back(patch.evaluate(u, v));
      params.push_back({patch_index, u, v});
    }
  }
}

void add_box(Phantom& phantom, const Eigen::Vector3d& center, const Eigen::Vector3d& half) {
  const Eigen::Vector3d ex = Eigen::Vector3d::UnitX() * half.x();
  const Eigen::Vector3d ey = Eigen::Vector3d::UnitY() * half.y();
  const Eigen::Vector3d ez = Eigen::Vector3d::UnitZ() * half.z();
  const auto rect = [&](const Eigen::Vector3d& c, const Eigen::Vector3d& a,
                        const Eigen::Vector3d& b) {
    SurfacePatch p;
    p.kind = SurfacePatch::Kind::Rect;
    p.origin = c;
    p.axis_a = a;
    p.axis_b = b;
    phantom.patches.push_back(p);
  };
  rect(center + ex, ey, ez);
  rect(center - ex, ey, ez);
  rect(center + ey, ex, ez);
  rect(center - ey, ex, ez);
  rect(center + ez, ex, ey);
  rect(center - ez, ex, ey);
}

}  // namespace

PhantomParams phantom_preset(const std::string& label) {
  if (label == "L3") {
    return PhantomParams{};
  }
  if (label == "T12") {
    PhantomParams p;
    p.body_radius = 19.0;
    p.body_height = 28.0;
    p.canal_gap = 12.0;
    p.spinous_half_depth = 12.5;
    p.spinous_half_width = 4.0;
    p.spinous_half_height = 5.0;
    p.lamina_offset_x = 9.5;
    p.lamina_half_x = 6.0;
    p.lamina_half_y = 3.5;
    p.lamina_half_z = 6.0;
    p.transverse_tip_x = 31.0;
    p.transverse_half_x = 6.5;
    p.transverse_half_y = 3.0;
    p.transverse_half_z = 2.8;
    p.entry_offset_x = 11.5;
    p.entry_offset_y = 6.0;
    p.entry_medial_angle_deg = 12.0;
    return p;
  }
  throw InvalidParamsError("no bundled phantom named '" + label + "' (use L3 or T12)");
}

Phantom generate_phantom(const std::string& label) {
  return generate_phantom(label, phantom_preset(label));
}

Phantom generate_phantom(const std::string& label, const PhantomParams& params) {
  if (params.body_radius <= 0 || params.body_height <= 0 || params.surface_spacing <= 0 ||
      params.canal_diameter <= 0) {
    throw InvalidParamsError("phantom dimensions must be positive");
  }

  Phantom phantom;
  phantom.label = label;
  phantom.canal_diameter = params.canal_diameter;
  phantom.surface.frame = FrameId::CT;

  // Vertebral body: cylinder about +z, centered at the CT origin.
  {
    SurfacePatch side;
    side.kind = SurfacePatch::Kind::CylinderSide;
    side.origin = Eigen::Vector3d(0, 0, -params.body_height / 2.0);
    side.axis_a = Eigen::Vector3d::UnitZ();
    side.axis_b = Eigen::Vector3d::UnitX();
    side.r0 = params.body_radius;
    side.r1 = params.body_height;
    phantom.patches.push_back(side);

    for (const double z : {params.body_height / 2.0, -params.body_height / 2.0}) {
      SurfacePatch cap;
      cap.kind = SurfacePatch::Kind::Disk;
      cap.origin = Eigen::Vector3d(0, 0, z);
      cap.axis_a = Eigen::Vector3d::UnitZ();
      cap.axis_b = Eigen::Vector3d::UnitX();
      cap.r0 = 0.0;
      cap.r1 = params.body_radius;
      phantom.patches.push_back(cap);
    }
  }

  // Posterior elements (+y is posterior): spinous process, laminae, and
  // transverse processes as axis-aligned boxes.
  const double arch_y = params.body_radius + params.canal_gap;
  const Eigen::Vector3d spinous_center(0, arch_y + params.spinous_half_depth, 0);
  add_box(phantom, spinous_center,
          {params.spinous_half_width, params.spinous_half_depth, params.spinous_half_height});

  const double lamina_y = params.body_radius + 2.0 * params.lamina_half_y;
  for (const double side : {-1.0, 1.0}) {
    add_box(phantom, {side * params.lamina_offset_x, lamina_y, 0},
            {params.lamina_half_x, params.lamina_half_y, params.lamina_half_z});
  }

  const double transverse_x = params.transverse_tip_x - params.transverse_half_x;
  const double transverse_y = params.body_radius * 0.35;
  for (const double side : {-1.0, 1.0}) {
    add_box(phantom, {side * transverse_x, transverse_y, 1.5},
            {params.transverse_half_x, params.transverse_half_y, params.transverse_half_z});
  }

  for (int i = 0; i < static_cast<int>(phantom.patches.size()); ++i) {
    sample_patch(phantom, i, params.surface_spacing, phantom.surface.points,
                 phantom.surface_params);
  }

  // Entry point at the pedicle mouth; the drill axis runs anterior with a
  // medial inclination.
  const double angle = params.entry_medial_angle_deg * std::numbers::pi / 180.0;
  const Eigen::Vector3d entry(params.entry_offset_x, params.body_radius + params.entry_offset_y,
                              0.0);
  const Eigen::Vector3d direction(-std::sin(angle), -std::cos(angle), 0.0);
  phantom.canal_axis = {entry, direction};

  phantom.landmarks.frame = FrameId::CT;
  phantom.landmarks.points["spinous_tip"] =
      spinous_center + Eigen::Vector3d(0, params.spinous_half_depth, 0);
  phantom.landmarks.points["transverse_left_tip"] =
      Eigen::Vector3d(-params.transverse_tip_x, transverse_y, 1.5);
  phantom.landmarks.points["transverse_right_tip"] =
      Eigen::Vector3d(params.transverse_tip_x, transverse_y, 1.5);
  phantom.landmarks.points["lamina_left"] =
      Eigen::Vector3d(-params.lamina_offset_x, lamina_y + params.lamina_half_y, 0);
  phantom.landmarks.points["lamina_right"] =
      Eigen::Vector3d(params.lamina_offset_x, lamina_y + params.lamina_half_y, 0);
  phantom.landmarks.points["entry"] = entry;

  // Invariant: landmarks inside the surface bounding box inflated by 5 mm.
  Eigen::Vector3d lo = phantom.surface.points.front();
  Eigen::Vector3d hi = lo;
  for (const auto& p : phantom.surface.points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  for (const auto& [name, p] : phantom.landmarks.points) {
    if ((p.array() < (lo.array() - 5.0)).any() || (p.array() > (hi.array() + 5.0)).any()) {
      throw InvalidParamsError("landmark '" + name + "' falls outside the inflated phantom");
    }
  }

  return phantom;
}

std::vector<Eigen::Vector3d> digitize_surface(const Phantom& phantom, int count,
                                              double scatter_mm, Rng& rng) {
  if (count < 1) {
    throw InvalidParamsError("digitizer sample count must be positive");
  }
  if (phantom.surface.points.empty()) {
    throw InvalidParamsError("phantom has no surface points");
  }

  std::vector<Eigen::Vector3d> touched;
  touched.reserve(count);
  const auto n = phantom.surface.points.size();
  for (int k = 0; k < count; ++k) {
    const auto index = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)) % n;
    const SurfaceParam& sp = phantom.surface_params[index];
    const SurfacePatch& patch = phantom.patches[sp.patch];

    double mm_u = 1.0;
    double mm_v = 1.0;
    patch.metrics(sp.u, sp.v, mm_u, mm_v);
    double u = sp.u + rng.gaussian(scatter_mm) / mm_u;
    double v = sp.v + rng.gaussian(scatter_mm) / mm_v;
    if (patch.u_periodic()) {
      u -= std::floor(u);
    } else {
      u = std::clamp(u, 0.0, 1.0);
    }
    v = std::clamp(v, 0.0, 1.0);
    touched.push_back(patch.evaluate(u, v));
  }
  return touched;
}

}  // namespace spinenav
