#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "vesselmat/config.hpp"
#include "vesselmat/eval.hpp"
#include "vesselmat/imgio.hpp"
#include "vesselmat/pipeline.hpp"

namespace fs = std::filesystem;
using namespace vesselmat;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPipeline = 1;
constexpr int kExitUsage = 2;

// Raised for bad arguments or unreadable inputs; maps to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Overrides {
    std::optional<double> omega;
    std::optional<int> window;
    std::optional<std::string> metric;
    std::optional<std::string> schedule;
    std::optional<std::string> angles;
    std::optional<int> se_length;
    std::optional<std::string> iuwt_scales;
    std::optional<int> iuwt_levels;
    std::optional<std::string> fov_mode;
    std::vector<std::string> sets;
    bool no_postprocess = false;
    bool no_skeleton = false;
    bool trimap_only = false;
    bool full_frame = false;
};

struct Globals {
    std::string config;
    std::string out = "out";
    int jobs = 1;
    std::uint64_t seed = 0;
    bool no_timing = false;
    bool quiet = false;
};

void add_pipeline_options(CLI::App* cmd, Overrides& o)
{
    cmd->add_option("--omega", o.omega, "spatial weight in the correlation");
    cmd->add_option("--window", o.window, "matting window side (odd)");
    cmd->add_option("--metric", o.metric, "hierarchy distance: euclidean or chebyshev");
    cmd->add_option("--schedule", o.schedule, "synchronous or gauss-seidel");
    cmd->add_option("--angles", o.angles, "comma-separated line angles in degrees");
    cmd->add_option("--se-length", o.se_length, "line structuring element length");
    cmd->add_option("--iuwt-scales", o.iuwt_scales, "comma-separated wavelet scales to sum");
    cmd->add_option("--iuwt-levels", o.iuwt_levels, "wavelet decomposition depth");
    cmd->add_option("--fov-mode", o.fov_mode, "auto, estimate or full");
    cmd->add_option("--set", o.sets, "override any config key: key=value")->take_all();
    cmd->add_flag("--no-postprocess", o.no_postprocess, "skip final small-blob removal");
    cmd->add_flag("--no-skeleton", o.no_skeleton, "leave the skeleton out of the trimap");
    cmd->add_flag("--trimap-only", o.trimap_only, "use the trimap vessel class as the result");
    cmd->add_flag("--full-frame", o.full_frame, "score over the whole frame instead of the FOV");
}

PipelineConfig resolve_config(const Globals& g, const Overrides& o)
{
    PipelineConfig cfg;
    if (!g.config.empty()) {
        if (!fs::is_regular_file(g.config))
            throw UsageError("config file not found: " + g.config);
        cfg = load_config(g.config, cfg);
    }
    auto set = [&](const char* key, const std::string& v) { set_config_value(cfg, key, v); };
    if (o.omega)
        cfg.omega = *o.omega;
    if (o.window)
        cfg.window = *o.window;
    if (o.metric)
        set("metric", *o.metric);
    if (o.schedule)
        set("schedule", *o.schedule);
    if (o.angles)
        set("angles", *o.angles);
    if (o.se_length)
        cfg.se_length = *o.se_length;
    if (o.iuwt_scales)
        set("iuwt_scales", *o.iuwt_scales);
    if (o.iuwt_levels)
        cfg.iuwt_levels = *o.iuwt_levels;
    if (o.fov_mode)
        set("fov_mode", *o.fov_mode);
    for (const auto& kv : o.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw UsageError("--set expects key=value, got '" + kv + "'");
        set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (o.no_postprocess)
        cfg.postprocess = false;
    if (o.no_skeleton)
        cfg.skeleton = false;
    if (o.trimap_only)
        cfg.trimap_only = true;
    if (o.full_frame)
        cfg.full_frame = true;
    cfg.validate();
    return cfg;
}

void require_file(const std::string& path, const char* what)
{
    if (!fs::is_regular_file(path))
        throw UsageError(std::string(what) + " not found: " + path);
}

Image<std::uint8_t> to_png(const BinaryMask& m)
{
    Image<std::uint8_t> out(m.width(), m.height());
    for (std::size_t i = 0; i < m.size(); ++i)
        out[i] = m[i] ? 255 : 0;
    return out;
}

// Ground truth on the left, prediction on the right.
RgbImage side_by_side(const BinaryMask& gt, const BinaryMask& pred)
{
    const int w = gt.width();
    RgbImage out(2 * w, gt.height());
    for (int y = 0; y < gt.height(); ++y)
        for (int x = 0; x < w; ++x) {
            out(x, y) = gt(x, y) ? Rgb{255, 255, 255} : Rgb{};
            out(w + x, y) = pred(x, y) ? Rgb{255, 255, 255} : Rgb{};
        }
    return out;
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out)
        throw Error(ErrorKind::Io, "cannot write " + path.string());
}

std::string config_dump(const PipelineConfig& cfg, const Globals& g)
{
    std::ostringstream os;
    os << dump_config(cfg) << "# seed = " << g.seed << " (the pipeline draws no random numbers)\n";
    return os.str();
}

void report_warnings(const std::vector<std::string>& warnings, const std::string& id)
{
    for (const auto& w : warnings)
        std::cerr << "warning: " << (id.empty() ? "" : id + ": ") << w << '\n';
}

int run_segment(const Globals& g, const Overrides& o, const std::string& image, const std::string& gt_path,
                const std::string& fov_path, bool trimap_only_outputs)
{
    require_file(image, "image");
    if (!gt_path.empty())
        require_file(gt_path, "ground truth");
    if (!fov_path.empty())
        require_file(fov_path, "FOV mask");
    const PipelineConfig cfg = resolve_config(g, o);

    RgbImage img;
    std::optional<BinaryMask> gt, fov;
    try {
        img = load_image(image);
        if (!gt_path.empty())
            gt = load_mask(gt_path);
        if (!fov_path.empty())
            fov = load_mask(fov_path);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    if (gt)
        require_same_shape(img, *gt, "ground truth");
    if (fov)
        require_same_shape(img, *fov, "FOV mask");

    const PipelineResult res = run_pipeline(img, fov, cfg);
    report_warnings(res.warnings, "");

    const fs::path out = g.out;
    fs::create_directories(out);
    save_png(out / "trimap.png", encode_trimap(res.trimap()));
    save_png(out / "trimap_overlay.png", trimap_overlay(res.trimap()));
    if (!trimap_only_outputs) {
        save_png(out / "mask.png", to_png(res.mask));
        if (gt)
            save_png(out / "overlay.png", side_by_side(*gt, res.mask));
    }
    write_text(out / "config.txt", config_dump(cfg, g));

    if (!g.quiet) {
        std::cout << "image " << image << ": " << count_true(res.mask) << " vessel pixels";
        if (!g.no_timing)
            std::cout << ", " << res.seconds << " s";
        std::cout << '\n';
        if (res.segmented.unresolved)
            std::cout << res.segmented.unresolved << " unknown pixels had no labelled neighbour\n";
        if (gt && !trimap_only_outputs) {
            const BinaryMask roi = cfg.full_frame ? BinaryMask(img.width(), img.height(), 1) : res.fov;
            const MetricsRecord m = metrics(confusion(res.mask, *gt, roi));
            std::cout << "acc " << (m.acc ? std::to_string(*m.acc) : "NA") << " se "
                      << (m.se ? std::to_string(*m.se) : "NA") << " sp " << (m.sp ? std::to_string(*m.sp) : "NA")
                      << '\n';
        }
    }
    return kExitOk;
}

DatasetManifest resolve_dataset(const std::string& dataset, const std::string& root)
{
    DatasetName name;
    try {
        name = parse_dataset_name(dataset);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    fs::path path = root;
    if (path.empty()) {
        if (name == DatasetName::Custom)
            throw UsageError("custom datasets need --root pointing at a manifest file");
        const char* env = std::getenv("VESSELMAT_DATA");
        if (!env || !*env)
            throw UsageError("no dataset root: pass --root or set VESSELMAT_DATA");
        const char* sub = name == DatasetName::Drive ? "DRIVE" : name == DatasetName::Stare ? "STARE" : "CHASE_DB1";
        path = fs::path(env) / sub;
    }
    if (!fs::exists(path))
        throw UsageError("dataset root not found: " + path.string());
    try {
        return load_dataset(path, name);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

int run_eval(const Globals& g, const Overrides& o, const std::string& dataset, const std::string& root,
             bool save_masks)
{
    const PipelineConfig cfg = resolve_config(g, o);
    const DatasetManifest manifest = resolve_dataset(dataset, root);
    const fs::path out = g.out;

    EvalOptions opts;
    opts.jobs = g.jobs;
    std::vector<std::pair<std::string, Image<std::uint8_t>>> masks;
    if (save_masks)
        opts.on_image = [&](const ManifestEntry& e, const BinaryMask& mask, const BinaryMask&) {
            masks.emplace_back(e.id, to_png(mask));
        };
    const DatasetReport rep = evaluate_dataset(manifest, cfg, opts);
    for (const auto& f : rep.failures)
        std::cerr << "error: " << f.id << ": " << f.message << '\n';

    fs::create_directories(out);
    std::ostringstream csv;
    write_metrics_csv(csv, rep.records, rep.mean, !g.no_timing);
    write_text(out / "metrics.csv", csv.str());
    write_text(out / "config.txt", config_dump(cfg, g));
    if (save_masks) {
        fs::create_directories(out / "masks");
        for (const auto& [id, m] : masks)
            save_png(out / "masks" / (id + ".png"), m);
    }
    if (!g.quiet) {
        std::cout << rep.records.size() << " images scored, " << rep.failures.size() << " failed\n";
        if (rep.mean.acc)
            std::cout << "mean acc " << *rep.mean.acc << '\n';
    }
    return rep.failures.empty() ? kExitOk : kExitPipeline;
}

int run_sweep(const Globals& g, const Overrides& o, const std::string& dataset, const std::string& root,
              const std::string& param_text, const std::string& range)
{
    const PipelineConfig cfg = resolve_config(g, o);
    SweepParam param;
    std::vector<double> values;
    try {
        param = parse_sweep_param(param_text);
        values = parse_range(range);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    const DatasetManifest manifest = resolve_dataset(dataset, root);
    const auto rows = sweep(manifest, param, values, cfg, g.jobs);
    const fs::path out = g.out;
    fs::create_directories(out);
    std::ostringstream csv;
    write_sweep_csv(csv, param, rows);
    write_text(out / "sweep.csv", csv.str());
    write_text(out / "config.txt", config_dump(cfg, g));
    if (!g.quiet)
        std::cout << csv.str();
    bool any_failed = false;
    for (const auto& r : rows)
        any_failed = any_failed || r.failures > 0;
    return any_failed ? kExitPipeline : kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Retinal vessel segmentation by hierarchical matting"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config, "key = value configuration file");
    app.add_option("--out", g.out, "output directory")->capture_default_str();
    app.add_option("--jobs", g.jobs, "images processed in parallel")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "recorded in the config dump; the pipeline is deterministic");
    app.add_flag("--no-timing", g.no_timing, "omit wall-clock times so outputs are byte-reproducible");
    app.add_flag("-q,--quiet", g.quiet, "only print warnings and errors");

    Overrides seg_o, tri_o, eval_o, sweep_o;
    std::string image, gt, fov, tri_image, tri_fov, dataset, root, sw_dataset, sw_root, param, range;
    bool save_masks = false;

    auto* seg = app.add_subcommand("segment", "segment one image");
    seg->add_option("image", image, "fundus image")->required();
    seg->add_option("--gt", gt, "ground-truth mask for the side-by-side overlay and scores");
    seg->add_option("--fov", fov, "FOV mask (estimated when absent)");
    add_pipeline_options(seg, seg_o);

    auto* tri = app.add_subcommand("trimap", "write only the trimap of one image");
    tri->add_option("image", tri_image, "fundus image")->required();
    tri->add_option("--fov", tri_fov, "FOV mask (estimated when absent)");
    add_pipeline_options(tri, tri_o);

    auto* ev = app.add_subcommand("eval", "score a dataset");
    ev->add_option("--dataset", dataset, "drive, stare, chase or custom")->required();
    ev->add_option("--root", root, "dataset directory, or manifest file for custom");
    ev->add_flag("--save-masks", save_masks, "write every predicted mask under <out>/masks");
    add_pipeline_options(ev, eval_o);

    auto* sw = app.add_subcommand("sweep", "mean accuracy over a range of one threshold");
    sw->add_option("--dataset", sw_dataset, "drive, stare, chase or custom")->required();
    sw->add_option("--root", sw_root, "dataset directory, or manifest file for custom");
    sw->add_option("--param", param, "e1, e2, r or s")->required();
    sw->add_option("--range", range, "start:stop:step or a comma list")->required();
    add_pipeline_options(sw, sweep_o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*seg)
            return run_segment(g, seg_o, image, gt, fov, false);
        if (*tri)
            return run_segment(g, tri_o, tri_image, "", tri_fov, true);
        if (*ev)
            return run_eval(g, eval_o, dataset, root, save_masks);
        if (*sw)
            return run_sweep(g, sweep_o, sw_dataset, sw_root, param, range);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        const bool usage = e.kind() == ErrorKind::Config || e.kind() == ErrorKind::Io || e.kind() == ErrorKind::Manifest;
        return usage ? kExitUsage : kExitPipeline;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitPipeline;
    }
    return kExitUsage;
}
