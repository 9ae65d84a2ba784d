#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>

#include "vascalc/calcium.hpp"
#include "vascalc/ctv_io.hpp"
#include "vascalc/errors.hpp"
#include "vascalc/mask_ops.hpp"
#include "vascalc/metrics.hpp"
#include "vascalc/phantom.hpp"
#include "vascalc/region_grow.hpp"
#include "vascalc/report_io.hpp"
#include "vascalc/text_io.hpp"
#include "vascalc/window.hpp"

namespace fs = std::filesystem;
using namespace vascalc;

namespace {

// Files fully written by the current command. If a later stage throws, the
// run removes what it wrote so a failed command leaves no outputs behind.
class OutputTracker {
public:
    void add(fs::path p) { paths_.push_back(std::move(p)); }
    void discard() {
        for (const fs::path& p : paths_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
        paths_.clear();
    }

private:
    std::vector<fs::path> paths_;
};

fs::path raw_path_for(const fs::path& header) {
    fs::path p = header;
    p.replace_extension(".raw");
    return p;
}

// save_volume/save_mask write the payload first, then the header, each
// atomically. If the header write fails the payload may already be in
// place; remove it so no mixed-run pair survives.
template <typename SaveFn>
void save_tracked(OutputTracker& outs, const fs::path& header, SaveFn&& save) {
    const fs::path raw = raw_path_for(header);
    try {
        save();
    } catch (...) {
        std::error_code ec;
        fs::remove(raw, ec);
        throw;
    }
    outs.add(header);
    outs.add(raw);
}

void write_tracked(OutputTracker& outs, const fs::path& path, const std::string& text) {
    write_text_file_atomic(path, text);
    outs.add(path);
}

template <typename T>
T parse_number(std::string_view s, const std::string& what) {
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw InvalidArgumentError(what + ": cannot parse \"" + std::string(s) + "\"");
    return v;
}

std::pair<std::string_view, std::string_view> split_colon(std::string_view s,
                                                          const std::string& what) {
    const std::size_t pos = s.find(':');
    if (pos == std::string_view::npos || pos == 0 || pos + 1 == s.size())
        throw InvalidArgumentError(what + ": expected two values separated by ':', got \"" +
                                   std::string(s) + "\"");
    return {s.substr(0, pos), s.substr(pos + 1)};
}

std::optional<Window> parse_window(const std::string& s) {
    if (s == "auto") return std::nullopt;
    const auto [l, w] = split_colon(s, "--window");
    return Window{parse_number<double>(l, "--window level"),
                  parse_number<double>(w, "--window width")};
}

std::pair<std::int16_t, std::int16_t> parse_band(const std::string& s) {
    const auto [lo, hi] = split_colon(s, "--band");
    return {parse_number<std::int16_t>(lo, "--band low"),
            parse_number<std::int16_t>(hi, "--band high")};
}

SliceRange parse_range(const std::string& s) {
    const auto [a, b] = split_colon(s, "--range");
    return SliceRange{parse_number<int>(a, "--range start"), parse_number<int>(b, "--range end")};
}

std::vector<Voxel> parse_seeds(const std::vector<std::string>& seed_args,
                               const std::string& seed_file) {
    std::vector<Voxel> seeds;
    for (const std::string& s : seed_args) {
        const std::size_t c1 = s.find(',');
        const std::size_t c2 = c1 == std::string::npos ? std::string::npos : s.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw InvalidArgumentError("--seeds: expected x,y,z, got \"" + s + "\"");
        seeds.push_back({parse_number<int>(std::string_view(s).substr(0, c1), "--seeds x"),
                         parse_number<int>(std::string_view(s).substr(c1 + 1, c2 - c1 - 1),
                                           "--seeds y"),
                         parse_number<int>(std::string_view(s).substr(c2 + 1), "--seeds z")});
    }
    if (!seed_file.empty()) {
        std::ifstream in(seed_file);
        if (!in) throw IoError("file not found: " + seed_file);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            std::istringstream ss(line);
            Voxel v;
            std::string extra;
            if (!(ss >> v.x >> v.y >> v.z) || (ss >> extra))
                throw InvalidArgumentError("seed file " + seed_file + " line " +
                                           std::to_string(lineno) + ": expected x y z");
            seeds.push_back(v);
        }
    }
    return seeds;
}

struct PhantomOpts {
    std::string spec_path;
    std::string out_prefix;
    std::optional<std::uint64_t> seed;
};

int run_phantom(const PhantomOpts& o) {
    PhantomSpec spec = load_phantom_spec(o.spec_path);
    if (o.seed) spec.rng_seed = *o.seed;
    const PhantomOutput out = generate_phantom(spec);

    OutputTracker outs;
    try {
        const fs::path vol_path = o.out_prefix + ".ctv";
        const fs::path vessel_path = o.out_prefix + "_vessel.ctv";
        const fs::path calcium_path = o.out_prefix + "_calcium.ctv";
        save_tracked(outs, vol_path, [&] { save_volume(out.volume, vol_path); });
        save_tracked(outs, vessel_path, [&] { save_mask(out.vessel_mask, vessel_path); });
        save_tracked(outs, calcium_path, [&] { save_mask(out.calcium_mask, calcium_path); });
    } catch (...) {
        outs.discard();
        throw;
    }
    std::cout << "wrote " << o.out_prefix << ".ctv (" << spec.dims.nx << 'x' << spec.dims.ny
              << 'x' << spec.dims.nz << "), vessel mask " << out.vessel_mask.count()
              << " voxels, calcium mask " << out.calcium_mask.count() << " voxels\n";
    return 0;
}

struct SegmentOpts {
    std::string input;
    std::vector<std::string> seeds;
    std::string seed_file;
    std::string band;
    int connectivity = 6;
    std::uint64_t max_voxels = 0;  // 0 = unlimited
    std::string out_prefix;
};

int run_segment(const SegmentOpts& o) {
    const CtVolume vol = load_volume(o.input);

    RegionGrowParams params;
    params.seeds = parse_seeds(o.seeds, o.seed_file);
    std::tie(params.lower_hu, params.upper_hu) = parse_band(o.band);
    params.connectivity = o.connectivity;
    if (o.max_voxels > 0) params.max_voxels = o.max_voxels;

    const RegionGrowResult res = region_grow(vol, params);
    if (res.no_seed_in_band)
        std::cerr << "warning: no seed lies inside the intensity band; writing an empty mask\n";

    std::ostringstream rep;
    rep << "report=segmentation\n";
    rep << "input=" << o.input << "\n";
    rep << "band=[" << params.lower_hu << ',' << params.upper_hu << "]\n";
    rep << "connectivity=" << params.connectivity << "\n";
    if (o.max_voxels > 0)
        rep << "max_voxels=" << o.max_voxels << "\n";
    else
        rep << "max_voxels=none\n";
    rep << "seed_count=" << params.seeds.size() << "\n";
    rep << "grown_count=" << res.grown_count << "\n";
    rep << "truncated=" << (res.truncated ? "true" : "false") << "\n";
    rep << "status=" << (res.no_seed_in_band ? "no_seed_in_band" : "ok") << "\n";

    OutputTracker outs;
    try {
        const fs::path mask_path = o.out_prefix + ".ctv";
        save_tracked(outs, mask_path, [&] { save_mask(res.mask, mask_path); });
        write_tracked(outs, o.out_prefix + ".report.txt", rep.str());
    } catch (...) {
        outs.discard();
        throw;
    }
    std::cout << "grown " << res.grown_count << " voxels"
              << (res.truncated ? " (truncated at cap)" : "") << "\n";
    return 0;
}

struct ScoreOpts {
    std::string input;
    std::string mask;
    std::vector<std::string> seeds;
    std::string seed_file;
    std::string band;
    int connectivity = 6;
    std::string window = "auto";
    int threshold = static_cast<int>(kDefaultCalciumThreshold);
    std::optional<double> min_area;
    int connectivity_2d = 8;
    std::string range;
    std::string out_prefix;
};

int run_score(const ScoreOpts& o) {
    const bool have_mask = !o.mask.empty();
    const bool have_grow = !o.seeds.empty() || !o.seed_file.empty();
    if (have_mask == have_grow)
        throw InvalidArgumentError(
            "score needs exactly one mask source: --mask FILE, or --seeds/--seed-file with "
            "--band");
    if (have_grow && o.band.empty())
        throw InvalidArgumentError("score with seeds requires --band LO:HI");

    const CtVolume vol = load_volume(o.input);

    MaskVolume vessel_mask;
    ScoreReportContext ctx;
    if (have_mask) {
        vessel_mask = import_mask(o.mask, vol.dims);
        ctx.mask_source = "import:" + o.mask;
    } else {
        RegionGrowParams params;
        params.seeds = parse_seeds(o.seeds, o.seed_file);
        std::tie(params.lower_hu, params.upper_hu) = parse_band(o.band);
        params.connectivity = o.connectivity;
        RegionGrowResult res = region_grow(vol, params);
        if (res.no_seed_in_band)
            std::cerr << "warning: no seed lies inside the intensity band; the vascular mask "
                         "is empty\n";
        vessel_mask = std::move(res.mask);
        std::ostringstream src;
        src << "region_grow(band=[" << params.lower_hu << ',' << params.upper_hu
            << "],connectivity=" << params.connectivity << ")";
        ctx.mask_source = src.str();
    }

    const std::optional<Window> requested = parse_window(o.window);
    Window window;
    if (requested) {
        window = *requested;
        ctx.window_mode = "explicit";
    } else {
        const AutoWindowResult aw = auto_window(vol);
        if (aw.degenerate)
            std::cerr << "warning: constant volume; auto window maps every voxel to byte 0\n";
        window = aw.window;
        ctx.window_mode = "auto";
    }

    PipelineParams params;
    params.window = window;
    params.threshold = static_cast<std::uint8_t>(o.threshold);
    params.min_area_mm2 = o.min_area;
    params.component_connectivity = o.connectivity_2d;
    params.range = o.range.empty() ? SliceRange{0, vol.dims.nz - 1} : parse_range(o.range);
    ctx.component_connectivity_2d = o.connectivity_2d;

    const CalcificationReport report = run_pipeline(vol, vessel_mask, params);

    OutputTracker outs;
    try {
        write_tracked(outs, o.out_prefix + ".report.txt", format_score_report(report, ctx));
        write_tracked(outs, o.out_prefix + ".slices.csv", format_slice_csv(report));
    } catch (...) {
        outs.discard();
        throw;
    }
    std::cout << "total_count=" << report.total_count
              << " total_volume_mm3=" << format_double_exact(report.total_volume_mm3) << "\n";
    return 0;
}

struct EvalOpts {
    std::string pred;
    std::string truth;
    std::string table;
    std::string out_prefix;
};

// Score table: CSV with header `truth,pred`, one pair of scores per line.
std::pair<std::vector<double>, std::vector<double>> load_score_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("file not found: " + path);
    std::string line;
    if (!std::getline(in, line)) throw InvalidArgumentError("score table " + path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "truth,pred")
        throw InvalidArgumentError("score table " + path + ": expected header \"truth,pred\"");
    std::vector<double> truth, pred;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw InvalidArgumentError("score table " + path + " line " + std::to_string(lineno) +
                                       ": expected truth,pred");
        const std::string what = path + " line " + std::to_string(lineno);
        truth.push_back(parse_number<double>(std::string_view(line).substr(0, comma), what));
        pred.push_back(parse_number<double>(std::string_view(line).substr(comma + 1), what));
    }
    if (truth.empty())
        throw InvalidArgumentError("score table " + path + ": no data rows");
    return {std::move(truth), std::move(pred)};
}

int run_eval(const EvalOpts& o) {
    const bool masks_mode = !o.pred.empty() || !o.truth.empty();
    const bool table_mode = !o.table.empty();
    if (masks_mode == table_mode)
        throw InvalidArgumentError(
            "eval needs exactly one input pair: --pred with --truth, or --table FILE");
    if (masks_mode && (o.pred.empty() || o.truth.empty()))
        throw InvalidArgumentError("eval mask mode requires both --pred and --truth");

    std::ostringstream rep;
    rep << "report=metrics\n";
    std::ostringstream summary;

    if (masks_mode) {
        const MaskVolume pred = load_mask(o.pred);
        const MaskVolume truth = load_mask(o.truth);
        const ConfusionCounts c = confusion(pred, truth);
        const double iou_v = iou(c);
        const double dice_v = dice(c);
        const double slice_dice = per_slice_dice_mean(pred, truth);
        rep << "mode=masks\n";
        rep << "pred=" << o.pred << "\n";
        rep << "truth=" << o.truth << "\n";
        rep << "empty_overlap_convention=1\n";
        rep << "tp=" << c.tp << "\n";
        rep << "fp=" << c.fp << "\n";
        rep << "fn=" << c.fn << "\n";
        rep << "tn=" << c.tn << "\n";
        rep << "iou=" << format_double_exact(iou_v) << "\n";
        rep << "dice=" << format_double_exact(dice_v) << "\n";
        rep << "per_slice_dice_mean=" << format_double_exact(slice_dice) << "\n";
        summary << "iou=" << format_double_exact(iou_v)
                << " dice=" << format_double_exact(dice_v)
                << " per_slice_dice_mean=" << format_double_exact(slice_dice);
    } else {
        const auto [truth, pred] = load_score_table(o.table);
        rep << "mode=score_table\n";
        rep << "table=" << o.table << "\n";
        rep << "n=" << truth.size() << "\n";
        rep << "ape=[";
        for (std::size_t i = 0; i < truth.size(); ++i) {
            if (i) rep << ',';
            rep << format_double_exact(ape(truth[i], pred[i]));
        }
        rep << "]\n";
        const double mape_v = mape(truth, pred);
        rep << "mape=" << format_double_exact(mape_v) << "\n";
        summary << "mape=" << format_double_exact(mape_v);
        if (truth.size() >= 2) {
            const double r2 = r_squared(truth, pred);
            const RegressionFit fit = regression_fit(truth, pred);
            rep << "r_squared=" << format_double_exact(r2) << "\n";
            rep << "fit_x=truth\n";
            rep << "fit_y=pred\n";
            rep << "fit_slope=" << format_double_exact(fit.slope) << "\n";
            rep << "fit_intercept=" << format_double_exact(fit.intercept) << "\n";
            rep << "fit_r=" << format_double_exact(fit.r) << "\n";
            rep << "fit_r_squared=" << format_double_exact(fit.r_squared) << "\n";
            summary << " r_squared=" << format_double_exact(r2);
        }
    }

    OutputTracker outs;
    try {
        write_tracked(outs, o.out_prefix + ".report.txt", rep.str());
    } catch (...) {
        outs.discard();
        throw;
    }
    std::cout << summary.str() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vascular calcification scoring for CT angiography volumes"};
    app.require_subcommand(1);

    PhantomOpts phantom_opts;
    CLI::App* phantom_cmd =
        app.add_subcommand("phantom", "generate a synthetic volume with ground-truth masks");
    phantom_cmd->add_option("--spec", phantom_opts.spec_path, "phantom spec (JSON)")->required();
    phantom_cmd->add_option("--out", phantom_opts.out_prefix, "output prefix")->required();
    std::uint64_t phantom_seed = 0;
    CLI::Option* seed_opt =
        phantom_cmd->add_option("--seed", phantom_seed, "override the spec's rng_seed");

    SegmentOpts segment_opts;
    CLI::App* segment_cmd =
        app.add_subcommand("segment", "grow a vascular mask from seeds inside an HU band");
    segment_cmd->add_option("--input", segment_opts.input, "input CTV volume")->required();
    segment_cmd->add_option("--seeds", segment_opts.seeds, "seed voxel x,y,z (repeatable)");
    segment_cmd->add_option("--seed-file", segment_opts.seed_file,
                            "text file with one `x y z` seed per line");
    segment_cmd->add_option("--band", segment_opts.band, "inclusive HU band LO:HI")->required();
    segment_cmd->add_option("--connectivity", segment_opts.connectivity, "3-D connectivity")
        ->check(CLI::IsMember({6, 26}));
    segment_cmd->add_option("--max-voxels", segment_opts.max_voxels, "growth cap (0 = unlimited)");
    segment_cmd->add_option("--out", segment_opts.out_prefix, "output prefix")->required();

    ScoreOpts score_opts;
    CLI::App* score_cmd =
        app.add_subcommand("score", "run the calcification scoring pipeline on a volume");
    score_cmd->add_option("--input", score_opts.input, "input CTV volume")->required();
    score_cmd->add_option("--mask", score_opts.mask, "vascular mask (CTV u8)");
    score_cmd->add_option("--seeds", score_opts.seeds, "seed voxel x,y,z (repeatable)");
    score_cmd->add_option("--seed-file", score_opts.seed_file,
                          "text file with one `x y z` seed per line");
    score_cmd->add_option("--band", score_opts.band, "HU band LO:HI for region growing");
    score_cmd->add_option("--connectivity", score_opts.connectivity,
                          "3-D connectivity for region growing")
        ->check(CLI::IsMember({6, 26}));
    score_cmd->add_option("--window", score_opts.window, "auto or LEVEL:WIDTH")
        ->capture_default_str();
    score_cmd->add_option("--threshold", score_opts.threshold, "8-bit calcification threshold")
        ->check(CLI::Range(0, 255))
        ->capture_default_str();
    double min_area_val = 0.0;
    CLI::Option* min_area_opt =
        score_cmd->add_option("--min-area", min_area_val, "minimum component area in mm^2")
            ->check(CLI::NonNegativeNumber);
    score_cmd
        ->add_option("--connectivity-2d", score_opts.connectivity_2d,
                     "in-slice connectivity for the area filter")
        ->check(CLI::IsMember({4, 8}));
    score_cmd->add_option("--range", score_opts.range,
                          "inclusive slice range START:END (default: all slices)");
    score_cmd->add_option("--out", score_opts.out_prefix, "output prefix")->required();

    EvalOpts eval_opts;
    CLI::App* eval_cmd = app.add_subcommand("eval", "compare masks or score tables");
    eval_cmd->add_option("--pred", eval_opts.pred, "predicted mask (CTV u8)");
    eval_cmd->add_option("--truth", eval_opts.truth, "ground-truth mask (CTV u8)");
    eval_cmd->add_option("--table", eval_opts.table, "score table CSV with header truth,pred");
    eval_cmd->add_option("--out", eval_opts.out_prefix, "output prefix")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (phantom_cmd->parsed()) {
            if (*seed_opt) phantom_opts.seed = phantom_seed;
            return run_phantom(phantom_opts);
        }
        if (segment_cmd->parsed()) return run_segment(segment_opts);
        if (score_cmd->parsed()) {
            if (*min_area_opt) score_opts.min_area = min_area_val;
            return run_score(score_opts);
        }
        if (eval_cmd->parsed()) return run_eval(eval_opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
