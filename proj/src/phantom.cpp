#include "vascalc/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include <json.hpp>

#include "vascalc/errors.hpp"
#include "vascalc/rng.hpp"

namespace vascalc {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Slack for geometry-vs-extent checks, so shapes touching the volume face
// are not rejected over rounding.
constexpr double kExtentEps = 1e-9;

double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

Vec3 sub(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 scale(const Vec3& a, double s) { return {a.x * s, a.y * s, a.z * s}; }

bool all_finite(const Vec3& a) {
    return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

bool cylinder_contains(const CylinderShape& c, const Vec3& axis_unit, const Vec3& p) {
    const Vec3 rel = sub(p, c.center_mm);
    const double axial = dot(rel, axis_unit);
    if (std::abs(axial) > c.half_length_mm) return false;
    const double radial_sq = dot(rel, rel) - axial * axial;
    return radial_sq <= c.radius_mm * c.radius_mm;
}

bool box_contains(const BoxShape& b, const Vec3& p) {
    return std::abs(p.x - b.center_mm.x) <= b.size_mm.x * 0.5 &&
           std::abs(p.y - b.center_mm.y) <= b.size_mm.y * 0.5 &&
           std::abs(p.z - b.center_mm.z) <= b.size_mm.z * 0.5;
}

Vec3 physical_extent(const Dims& dims, const VoxelSpacing& s) {
    return {dims.nx * s.sx, dims.ny * s.sy, dims.nz * s.sz};
}

void require_inside_extent(double lo, double hi, double extent, const std::string& what) {
    if (lo < -kExtentEps || hi > extent + kExtentEps)
        throw InvalidArgumentError("phantom spec: " + what + " extends outside the volume");
}

void check_cylinder_geometry(const CylinderShape& c, const std::string& what) {
    if (!all_finite(c.center_mm) || !all_finite(c.axis))
        throw InvalidArgumentError("phantom spec: " + what + " has a non-finite center or axis");
    if (!(std::isfinite(c.radius_mm) && c.radius_mm > 0.0))
        throw InvalidArgumentError("phantom spec: " + what + " radius_mm must be positive");
    if (!(std::isfinite(c.half_length_mm) && c.half_length_mm > 0.0))
        throw InvalidArgumentError("phantom spec: " + what + " half_length_mm must be positive");
    if (norm(c.axis) == 0.0)
        throw InvalidArgumentError("phantom spec: " + what + " axis must be nonzero");
}

// Tight axis-aligned bounds of a finite cylinder: along each coordinate the
// half-extent is half_length*|a_i| from the axis plus radius*sqrt(1-a_i^2)
// from the circular cross-section.
void check_cylinder_extent(const CylinderShape& c, double radius, const Vec3& ext,
                           const std::string& what) {
    const Vec3 a = scale(c.axis, 1.0 / norm(c.axis));
    const double hx = c.half_length_mm * std::abs(a.x) + radius * std::sqrt(std::max(0.0, 1.0 - a.x * a.x));
    const double hy = c.half_length_mm * std::abs(a.y) + radius * std::sqrt(std::max(0.0, 1.0 - a.y * a.y));
    const double hz = c.half_length_mm * std::abs(a.z) + radius * std::sqrt(std::max(0.0, 1.0 - a.z * a.z));
    require_inside_extent(c.center_mm.x - hx, c.center_mm.x + hx, ext.x, what);
    require_inside_extent(c.center_mm.y - hy, c.center_mm.y + hy, ext.y, what);
    require_inside_extent(c.center_mm.z - hz, c.center_mm.z + hz, ext.z, what);
}

void check_box(const BoxShape& b, const Vec3& ext, const std::string& what) {
    if (!all_finite(b.center_mm) || !all_finite(b.size_mm))
        throw InvalidArgumentError("phantom spec: " + what + " has a non-finite center or size");
    if (!(b.size_mm.x > 0.0 && b.size_mm.y > 0.0 && b.size_mm.z > 0.0))
        throw InvalidArgumentError("phantom spec: " + what + " size_mm must be positive");
    require_inside_extent(b.center_mm.x - b.size_mm.x * 0.5, b.center_mm.x + b.size_mm.x * 0.5, ext.x, what);
    require_inside_extent(b.center_mm.y - b.size_mm.y * 0.5, b.center_mm.y + b.size_mm.y * 0.5, ext.y, what);
    require_inside_extent(b.center_mm.z - b.size_mm.z * 0.5, b.center_mm.z + b.size_mm.z * 0.5, ext.z, what);
}

void check_vessel_index(int index, std::size_t vessel_count, const std::string& what) {
    if (index < 0 || static_cast<std::size_t>(index) >= vessel_count)
        throw InvalidArgumentError("phantom spec: " + what + " references vessel " +
                                   std::to_string(index) + " but the spec has " +
                                   std::to_string(vessel_count) + " vessel(s)");
}

void check_slice_span(int begin, int end, int nz, const std::string& what) {
    if (begin < 0 || end < begin || end >= nz)
        throw InvalidArgumentError("phantom spec: " + what + " slice span [" +
                                   std::to_string(begin) + ", " + std::to_string(end) +
                                   "] is not within 0.." + std::to_string(nz - 1));
}

std::int16_t quantize_hu(double hu) {
    const double r = std::clamp(std::round(hu), -32768.0, 32767.0);
    return static_cast<std::int16_t>(r);
}

}  // namespace

void validate_phantom_spec(const PhantomSpec& spec) {
    check_dims(spec.dims);
    check_spacing(spec.spacing);
    if (!(std::isfinite(spec.noise_sigma) && spec.noise_sigma >= 0.0))
        throw InvalidArgumentError("phantom spec: noise_sigma must be finite and non-negative");

    const Vec3 ext = physical_extent(spec.dims, spec.spacing);

    for (std::size_t i = 0; i < spec.vessels.size(); ++i) {
        const std::string what = "vessel " + std::to_string(i);
        check_cylinder_geometry(spec.vessels[i].shape, what);
        check_cylinder_extent(spec.vessels[i].shape, spec.vessels[i].shape.radius_mm, ext, what);
    }

    for (std::size_t i = 0; i < spec.calcifications.size(); ++i) {
        const Calcification& c = spec.calcifications[i];
        const std::string what = "calcification " + std::to_string(i);
        check_vessel_index(c.vessel, spec.vessels.size(), what);
        check_slice_span(c.slice_begin, c.slice_end, spec.dims.nz, what);
        if (!(std::isfinite(c.r_inner_mm) && c.r_inner_mm >= 0.0))
            throw InvalidArgumentError("phantom spec: " + what + " r_inner_mm must be non-negative");
        if (!(std::isfinite(c.r_outer_mm) && c.r_outer_mm > c.r_inner_mm))
            throw InvalidArgumentError("phantom spec: " + what + " needs r_inner_mm < r_outer_mm");
        if (!std::isfinite(c.angle_begin_deg) || !std::isfinite(c.angle_end_deg))
            throw InvalidArgumentError("phantom spec: " + what + " has a non-finite angle");
        // Bound the shell by the parent cylinder widened to the outer radius.
        check_cylinder_extent(spec.vessels[static_cast<std::size_t>(c.vessel)].shape, c.r_outer_mm,
                              ext, what);
    }

    for (std::size_t i = 0; i < spec.bones.size(); ++i) {
        const std::string what = "bone " + std::to_string(i);
        if (const auto* cyl = std::get_if<CylinderShape>(&spec.bones[i].shape)) {
            check_cylinder_geometry(*cyl, what);
            check_cylinder_extent(*cyl, cyl->radius_mm, ext, what);
        } else {
            check_box(std::get<BoxShape>(spec.bones[i].shape), ext, what);
        }
    }

    for (std::size_t i = 0; i < spec.artifacts.size(); ++i) {
        const std::string what = "artifact " + std::to_string(i);
        if (const auto* screw = std::get_if<ScrewArtifact>(&spec.artifacts[i])) {
            check_cylinder_geometry(screw->rod, what + " rod");
            check_cylinder_extent(screw->rod, screw->rod.radius_mm, ext, what + " rod");
            check_box(screw->streak, ext, what + " streak");
        } else if (const auto* stent = std::get_if<StentArtifact>(&spec.artifacts[i])) {
            check_vessel_index(stent->vessel, spec.vessels.size(), what);
            check_slice_span(stent->slice_begin, stent->slice_end, spec.dims.nz, what);
            if (!(std::isfinite(stent->thickness_mm) && stent->thickness_mm > 0.0))
                throw InvalidArgumentError("phantom spec: " + what + " thickness_mm must be positive");
            const CylinderShape& parent = spec.vessels[static_cast<std::size_t>(stent->vessel)].shape;
            check_cylinder_extent(parent, parent.radius_mm + stent->thickness_mm, ext, what);
        } else {
            const auto& drop = std::get<ContrastDropout>(spec.artifacts[i]);
            check_vessel_index(drop.vessel, spec.vessels.size(), what);
            check_slice_span(drop.slice_begin, drop.slice_end, spec.dims.nz, what);
        }
    }
}

namespace detail {

PhantomEval::PhantomEval(const PhantomSpec& spec) : spec_(spec) {
    frames_.reserve(spec.vessels.size());
    for (const Vessel& v : spec.vessels) {
        VesselFrame f;
        f.center = v.shape.center_mm;
        f.axis_unit = scale(v.shape.axis, 1.0 / norm(v.shape.axis));
        // Angular reference: project the coordinate axis least parallel to
        // the cylinder axis into the cross-section plane. The choice is a
        // pure function of the axis, so angles are reproducible.
        const double ax = std::abs(f.axis_unit.x);
        const double ay = std::abs(f.axis_unit.y);
        const double az = std::abs(f.axis_unit.z);
        Vec3 ref{1.0, 0.0, 0.0};
        if (ay <= ax && ay <= az)
            ref = {0.0, 1.0, 0.0};
        else if (az <= ax && az <= ay)
            ref = {0.0, 0.0, 1.0};
        const Vec3 proj = sub(ref, scale(f.axis_unit, dot(ref, f.axis_unit)));
        f.u = scale(proj, 1.0 / norm(proj));
        f.v = cross(f.axis_unit, f.u);
        f.radius = v.shape.radius_mm;
        f.half_length = v.shape.half_length_mm;
        f.lumen_hu = v.lumen_hu;
        frames_.push_back(f);
    }
    bone_axis_units_.resize(spec.bones.size());
    for (std::size_t i = 0; i < spec.bones.size(); ++i) {
        if (const auto* cyl = std::get_if<CylinderShape>(&spec.bones[i].shape))
            bone_axis_units_[i] = scale(cyl->axis, 1.0 / norm(cyl->axis));
    }
    rod_axis_units_.resize(spec.artifacts.size());
    for (std::size_t i = 0; i < spec.artifacts.size(); ++i) {
        if (const auto* screw = std::get_if<ScrewArtifact>(&spec.artifacts[i]))
            rod_axis_units_[i] = scale(screw->rod.axis, 1.0 / norm(screw->rod.axis));
    }
}

bool PhantomEval::in_lumen(const Vec3& p, std::size_t vessel_idx) const {
    const VesselFrame& f = frames_[vessel_idx];
    const Vec3 rel = sub(p, f.center);
    const double axial = dot(rel, f.axis_unit);
    if (std::abs(axial) > f.half_length) return false;
    return dot(rel, rel) - axial * axial <= f.radius * f.radius;
}

PhantomEval::VoxelClass PhantomEval::classify(const Vec3& p, int slice_index) const {
    double hu = static_cast<double>(spec_.background_hu);
    bool vessel = false;
    bool calcium = false;

    for (std::size_t i = 0; i < spec_.bones.size(); ++i) {
        const Bone& bone = spec_.bones[i];
        if (const auto* cyl = std::get_if<CylinderShape>(&bone.shape)) {
            if (cylinder_contains(*cyl, bone_axis_units_[i], p)) hu = static_cast<double>(bone.hu);
        } else if (box_contains(std::get<BoxShape>(bone.shape), p)) {
            hu = static_cast<double>(bone.hu);
        }
    }

    for (std::size_t i = 0; i < frames_.size(); ++i) {
        if (in_lumen(p, i)) {
            hu = static_cast<double>(frames_[i].lumen_hu);
            vessel = true;
        }
    }

    for (const Calcification& c : spec_.calcifications) {
        if (slice_index < c.slice_begin || slice_index > c.slice_end) continue;
        const VesselFrame& f = frames_[static_cast<std::size_t>(c.vessel)];
        const Vec3 rel = sub(p, f.center);
        const double axial = dot(rel, f.axis_unit);
        const double radial_sq = dot(rel, rel) - axial * axial;
        if (radial_sq < c.r_inner_mm * c.r_inner_mm || radial_sq > c.r_outer_mm * c.r_outer_mm)
            continue;
        // Angle about the axis, measured from u toward v, wrapped to [0, 360).
        double theta = std::atan2(dot(rel, f.v), dot(rel, f.u)) * (180.0 / kPi);
        if (theta < 0.0) theta += 360.0;
        double span = c.angle_end_deg - c.angle_begin_deg;
        if (span < 0.0) span += 360.0;
        double from_begin = std::fmod(theta - c.angle_begin_deg, 360.0);
        if (from_begin < 0.0) from_begin += 360.0;
        const bool full_circle = c.angle_end_deg - c.angle_begin_deg >= 360.0;
        if (!full_circle && from_begin > span) continue;
        hu = static_cast<double>(c.calc_hu);
        calcium = true;
        vessel = true;
    }

    for (std::size_t i = 0; i < spec_.artifacts.size(); ++i) {
        const Artifact& artifact = spec_.artifacts[i];
        if (const auto* screw = std::get_if<ScrewArtifact>(&artifact)) {
            if (box_contains(screw->streak, p)) hu = static_cast<double>(screw->streak_hu);
            if (cylinder_contains(screw->rod, rod_axis_units_[i], p))
                hu = static_cast<double>(screw->rod_hu);
        } else if (const auto* stent = std::get_if<StentArtifact>(&artifact)) {
            if (slice_index < stent->slice_begin || slice_index > stent->slice_end) continue;
            const VesselFrame& f = frames_[static_cast<std::size_t>(stent->vessel)];
            const Vec3 rel = sub(p, f.center);
            const double axial = dot(rel, f.axis_unit);
            const double radial_sq = dot(rel, rel) - axial * axial;
            const double outer = f.radius + stent->thickness_mm;
            if (radial_sq > f.radius * f.radius && radial_sq <= outer * outer)
                hu = static_cast<double>(stent->hu);
        } else {
            const auto& drop = std::get<ContrastDropout>(artifact);
            if (slice_index < drop.slice_begin || slice_index > drop.slice_end) continue;
            if (in_lumen(p, static_cast<std::size_t>(drop.vessel)))
                hu = static_cast<double>(drop.blood_hu);
        }
    }

    return {hu, vessel, calcium};
}

}  // namespace detail

PhantomOutput generate_phantom(const PhantomSpec& spec) {
    validate_phantom_spec(spec);
    const detail::PhantomEval eval(spec);

    PhantomOutput out;
    out.volume.dims = spec.dims;
    out.volume.spacing = spec.spacing;
    out.volume.voxels.resize(spec.dims.total());
    out.vessel_mask.dims = spec.dims;
    out.vessel_mask.spacing = spec.spacing;
    out.vessel_mask.bits.resize(spec.dims.total());
    out.calcium_mask.dims = spec.dims;
    out.calcium_mask.spacing = spec.spacing;
    out.calcium_mask.bits.resize(spec.dims.total());

    const int nx = spec.dims.nx;
    const int ny = spec.dims.ny;
    const std::size_t slice_size = spec.dims.slice_size();
    const bool noisy = spec.noise_sigma > 0.0;

#pragma omp parallel for schedule(static)
    for (std::int64_t z = 0; z < spec.dims.nz; ++z) {
        std::size_t idx = static_cast<std::size_t>(z) * slice_size;
        for (int y = 0; y < ny; ++y) {
            for (int x = 0; x < nx; ++x, ++idx) {
                const Vec3 p = detail::voxel_center(x, y, static_cast<int>(z), spec.spacing);
                const auto cls = eval.classify(p, static_cast<int>(z));
                double hu = cls.hu;
                // Noise is read by voxel index, not by draw order, so the
                // volume does not depend on the thread schedule.
                if (noisy) hu += spec.noise_sigma * gaussian_at(spec.rng_seed, idx);
                out.volume.voxels[idx] = quantize_hu(hu);
                out.vessel_mask.bits[idx] = cls.vessel ? 1 : 0;
                out.calcium_mask.bits[idx] = cls.calcium ? 1 : 0;
            }
        }
    }
    return out;
}

std::uint64_t expected_calcium(const PhantomSpec& spec, const Window& window,
                               std::uint8_t threshold, const SliceRange& range) {
    if (spec.noise_sigma != 0.0)
        throw InvalidArgumentError(
            "expected_calcium requires a noise-free spec (noise_sigma = 0)");
    validate_phantom_spec(spec);
    check_slice_range(range, spec.dims);
    const detail::PhantomEval eval(spec);

    const int nx = spec.dims.nx;
    const int ny = spec.dims.ny;
    std::uint64_t total = 0;

#pragma omp parallel for schedule(static) reduction(+ : total)
    for (std::int64_t z = range.start_slice; z <= range.end_slice; ++z) {
        for (int y = 0; y < ny; ++y) {
            for (int x = 0; x < nx; ++x) {
                const Vec3 p = detail::voxel_center(x, y, static_cast<int>(z), spec.spacing);
                const auto cls = eval.classify(p, static_cast<int>(z));
                if (!cls.calcium) continue;
                const double hu = static_cast<double>(quantize_hu(cls.hu));
                if (window_byte(hu, window) > threshold) ++total;
            }
        }
    }
    return total;
}

namespace {

using nlohmann::json;

const json& member(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end())
        throw InvalidArgumentError("phantom spec: " + where + " is missing field \"" + key + "\"");
    return *it;
}

double get_double(const json& j, const char* key, const std::string& where) {
    const json& v = member(j, key, where);
    if (!v.is_number())
        throw InvalidArgumentError("phantom spec: " + where + " field \"" + key +
                                   "\" must be a number");
    return v.get<double>();
}

int get_int(const json& j, const char* key, const std::string& where) {
    const json& v = member(j, key, where);
    if (!v.is_number_integer())
        throw InvalidArgumentError("phantom spec: " + where + " field \"" + key +
                                   "\" must be an integer");
    return v.get<int>();
}

std::int16_t get_hu(const json& j, const char* key, const std::string& where, std::int16_t fallback) {
    if (!j.contains(key)) return fallback;
    const int v = get_int(j, key, where);
    if (v < std::numeric_limits<std::int16_t>::min() || v > std::numeric_limits<std::int16_t>::max())
        throw InvalidArgumentError("phantom spec: " + where + " field \"" + key +
                                   "\" is outside the 16-bit HU range");
    return static_cast<std::int16_t>(v);
}

Vec3 get_vec3(const json& j, const char* key, const std::string& where) {
    const json& v = member(j, key, where);
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number())
        throw InvalidArgumentError("phantom spec: " + where + " field \"" + key +
                                   "\" must be an array of 3 numbers");
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

std::pair<int, int> get_span(const json& j, const char* key, const std::string& where) {
    const json& v = member(j, key, where);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
        throw InvalidArgumentError("phantom spec: " + where + " field \"" + key +
                                   "\" must be an array of 2 integers");
    return {v[0].get<int>(), v[1].get<int>()};
}

CylinderShape parse_cylinder(const json& j, const std::string& where) {
    CylinderShape c;
    c.center_mm = get_vec3(j, "center_mm", where);
    c.axis = get_vec3(j, "axis", where);
    c.radius_mm = get_double(j, "radius_mm", where);
    c.half_length_mm = get_double(j, "half_length_mm", where);
    return c;
}

BoxShape parse_box(const json& j, const std::string& where) {
    BoxShape b;
    b.center_mm = get_vec3(j, "center_mm", where);
    b.size_mm = get_vec3(j, "size_mm", where);
    return b;
}

}  // namespace

PhantomSpec load_phantom_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("file not found: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw InvalidArgumentError("phantom spec " + path.string() + ": " + e.what());
    }
    if (!j.is_object())
        throw InvalidArgumentError("phantom spec " + path.string() + ": top level must be an object");

    PhantomSpec spec;
    {
        const json& d = member(j, "dims", "top level");
        if (!d.is_array() || d.size() != 3 || !d[0].is_number_integer() ||
            !d[1].is_number_integer() || !d[2].is_number_integer())
            throw InvalidArgumentError(
                "phantom spec: field \"dims\" must be an array of 3 integers");
        spec.dims = {d[0].get<int>(), d[1].get<int>(), d[2].get<int>()};
    }
    {
        const Vec3 s = get_vec3(j, "spacing_mm", "top level");
        spec.spacing = {s.x, s.y, s.z};
    }
    spec.background_hu = get_hu(j, "background_hu", "top level", spec.background_hu);
    if (j.contains("noise_sigma")) spec.noise_sigma = get_double(j, "noise_sigma", "top level");
    if (j.contains("rng_seed")) {
        const json& v = j["rng_seed"];
        if (!v.is_number_unsigned() && !v.is_number_integer())
            throw InvalidArgumentError("phantom spec: field \"rng_seed\" must be an integer");
        spec.rng_seed = v.get<std::uint64_t>();
    }

    for (const json& item : j.value("vessels", json::array())) {
        const std::string where = "vessel " + std::to_string(spec.vessels.size());
        Vessel v;
        v.shape = parse_cylinder(item, where);
        v.lumen_hu = get_hu(item, "lumen_hu", where, v.lumen_hu);
        spec.vessels.push_back(v);
    }

    for (const json& item : j.value("calcifications", json::array())) {
        const std::string where = "calcification " + std::to_string(spec.calcifications.size());
        Calcification c;
        c.vessel = get_int(item, "vessel", where);
        std::tie(c.slice_begin, c.slice_end) = get_span(item, "slices", where);
        if (item.contains("angle_deg")) {
            const json& a = member(item, "angle_deg", where);
            if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
                throw InvalidArgumentError("phantom spec: " + where +
                                           " field \"angle_deg\" must be an array of 2 numbers");
            c.angle_begin_deg = a[0].get<double>();
            c.angle_end_deg = a[1].get<double>();
        }
        const json& r = member(item, "radial_mm", where);
        if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
            throw InvalidArgumentError("phantom spec: " + where +
                                       " field \"radial_mm\" must be an array of 2 numbers");
        c.r_inner_mm = r[0].get<double>();
        c.r_outer_mm = r[1].get<double>();
        c.calc_hu = get_hu(item, "calc_hu", where, c.calc_hu);
        spec.calcifications.push_back(c);
    }

    for (const json& item : j.value("bones", json::array())) {
        const std::string where = "bone " + std::to_string(spec.bones.size());
        const json& shape = member(item, "shape", where);
        if (!shape.is_string())
            throw InvalidArgumentError("phantom spec: " + where +
                                       " field \"shape\" must be \"cylinder\" or \"box\"");
        Bone b;
        const std::string kind = shape.get<std::string>();
        if (kind == "cylinder")
            b.shape = parse_cylinder(item, where);
        else if (kind == "box")
            b.shape = parse_box(item, where);
        else
            throw InvalidArgumentError("phantom spec: " + where + " has unknown shape \"" + kind +
                                       "\"");
        b.hu = get_hu(item, "hu", where, b.hu);
        spec.bones.push_back(b);
    }

    for (const json& item : j.value("artifacts", json::array())) {
        const std::string where = "artifact " + std::to_string(spec.artifacts.size());
        const json& type = member(item, "type", where);
        if (!type.is_string())
            throw InvalidArgumentError("phantom spec: " + where + " field \"type\" must be a string");
        const std::string kind = type.get<std::string>();
        if (kind == "screw") {
            ScrewArtifact a;
            a.rod = parse_cylinder(member(item, "rod", where), where + " rod");
            a.rod_hu = get_hu(item, "rod_hu", where, a.rod_hu);
            a.streak = parse_box(member(item, "streak", where), where + " streak");
            a.streak_hu = get_hu(item, "streak_hu", where, a.streak_hu);
            spec.artifacts.emplace_back(a);
        } else if (kind == "stent") {
            StentArtifact a;
            a.vessel = get_int(item, "vessel", where);
            std::tie(a.slice_begin, a.slice_end) = get_span(item, "slices", where);
            a.thickness_mm = get_double(item, "thickness_mm", where);
            a.hu = get_hu(item, "hu", where, a.hu);
            spec.artifacts.emplace_back(a);
        } else if (kind == "contrast_dropout") {
            ContrastDropout a;
            a.vessel = get_int(item, "vessel", where);
            std::tie(a.slice_begin, a.slice_end) = get_span(item, "slices", where);
            a.blood_hu = get_hu(item, "blood_hu", where, a.blood_hu);
            spec.artifacts.emplace_back(a);
        } else {
            throw InvalidArgumentError("phantom spec: " + where + " has unknown type \"" + kind +
                                       "\"");
        }
    }

    validate_phantom_spec(spec);
    return spec;
}

}  // namespace vascalc
