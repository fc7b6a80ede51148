#include "vesselmat/imgio.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include <opencv2/imgcodecs.hpp>
#include <zlib.h>

#include "gif.hpp"
#include "vesselmat/regions.hpp"

namespace fs = std::filesystem;

namespace vesselmat {

const char* to_string(DatasetName name)
{
    switch (name) {
    case DatasetName::Drive: return "DRIVE";
    case DatasetName::Stare: return "STARE";
    case DatasetName::ChaseDb1: return "CHASE_DB1";
    case DatasetName::Custom: return "custom";
    }
    return "custom";
}

namespace {

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool ends_with(const std::string& s, const std::string& suffix)
{
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<std::uint8_t> read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::uint8_t> read_gzip(const fs::path& path)
{
    gzFile f = gzopen(path.string().c_str(), "rb");
    if (!f)
        throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::vector<std::uint8_t> out;
    std::array<std::uint8_t, 1 << 16> buf{};
    int n = 0;
    while ((n = gzread(f, buf.data(), static_cast<unsigned>(buf.size()))) > 0)
        out.insert(out.end(), buf.begin(), buf.begin() + n);
    const bool failed = n < 0;
    gzclose(f);
    if (failed)
        throw Error(ErrorKind::Format, "corrupt gzip stream in " + path.string());
    return out;
}

const std::vector<std::string>& supported_extensions()
{
    static const std::vector<std::string> exts = {".png", ".ppm", ".pgm", ".pnm", ".jpg", ".jpeg",
                                                  ".gif", ".tif", ".tiff"};
    return exts;
}

// Extension with a trailing ".gz" removed, lowercased.
std::string image_extension(const fs::path& path, bool& gz)
{
    std::string name = lower(path.filename().string());
    gz = ends_with(name, ".gz");
    if (gz)
        name.resize(name.size() - 3);
    return lower(fs::path(name).extension().string());
}

bool is_image_file(const fs::path& path)
{
    if (!fs::is_regular_file(path))
        return false;
    bool gz = false;
    const auto ext = image_extension(path, gz);
    const auto& exts = supported_extensions();
    return std::find(exts.begin(), exts.end(), ext) != exts.end();
}

// Filename stem without image and ".gz" extensions.
std::string image_stem(const fs::path& path)
{
    std::string name = path.filename().string();
    if (ends_with(lower(name), ".gz"))
        name.resize(name.size() - 3);
    return fs::path(name).stem().string();
}

std::vector<fs::path> list_images(const fs::path& dir)
{
    std::vector<fs::path> files;
    if (!fs::is_directory(dir))
        return files;
    for (const auto& e : fs::directory_iterator(dir))
        if (is_image_file(e.path()))
            files.push_back(e.path());
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
    return files;
}

// First existing file among `stem` + each supported extension (either case, plain or .gz).
std::optional<fs::path> find_with_stem(const fs::path& dir, const std::string& stem)
{
    for (const auto& ext : supported_extensions()) {
        std::string upper = ext;
        std::transform(upper.begin(), upper.end(), upper.begin(),
                       [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
        for (const auto& e : {ext, upper})
            for (const char* gz : {"", ".gz"})
                if (fs::path p = dir / (stem + e + gz); fs::is_regular_file(p))
                    return p;
    }
    return std::nullopt;
}

fs::path first_dir(const fs::path& root, std::initializer_list<const char*> names)
{
    for (const char* n : names)
        if (fs::is_directory(root / n))
            return root / n;
    return {};
}

[[noreturn]] void missing(const char* what, const fs::path& image)
{
    throw Error(ErrorKind::Manifest, std::string("missing ") + what + " for " + image.filename().string());
}

DatasetManifest load_drive(const fs::path& root)
{
    fs::path split = fs::is_directory(root / "test" / "images") ? root / "test" : root;
    const fs::path images = split / "images";
    if (!fs::is_directory(images))
        throw Error(ErrorKind::Manifest, "DRIVE layout not found under " + root.string());
    DatasetManifest m{DatasetName::Drive, {}};
    for (const auto& img : list_images(images)) {
        const std::string stem = image_stem(img);         // 01_test
        const std::string num = stem.substr(0, stem.find('_'));  // 01
        ManifestEntry e{stem, img, {}, std::nullopt};
        auto gt = find_with_stem(split / "1st_manual", num + "_manual1");
        if (!gt)
            missing("ground truth", img);
        e.ground_truth = *gt;
        auto mask = find_with_stem(split / "mask", stem + "_mask");
        if (!mask)
            missing("FOV mask", img);
        e.fov_mask = *mask;
        m.entries.push_back(std::move(e));
    }
    return m;
}

DatasetManifest load_stare(const fs::path& root)
{
    const fs::path images = first_dir(root, {"images", "stare-images"});
    const fs::path labels = first_dir(root, {"labels-ah", "labels_ah"});
    if (images.empty())
        throw Error(ErrorKind::Manifest, "STARE layout not found under " + root.string());
    DatasetManifest m{DatasetName::Stare, {}};
    for (const auto& img : list_images(images)) {
        const std::string stem = image_stem(img);  // im0001
        ManifestEntry e{stem, img, {}, std::nullopt};
        auto gt = labels.empty() ? std::nullopt : find_with_stem(labels, stem + ".ah");
        if (!gt)
            missing("ground truth", img);
        e.ground_truth = *gt;
        m.entries.push_back(std::move(e));
    }
    return m;
}

DatasetManifest load_chase(const fs::path& root)
{
    fs::path images = first_dir(root, {"images", "Images"});
    if (images.empty())
        images = root;
    const fs::path labels = first_dir(root, {"1stHO", "labels", "ground_truth"});
    DatasetManifest m{DatasetName::ChaseDb1, {}};
    for (const auto& img : list_images(images)) {
        const std::string stem = image_stem(img);  // Image_01L
        if (stem.find("_1stHO") != std::string::npos || stem.find("_2ndHO") != std::string::npos)
            continue;
        ManifestEntry e{stem, img, {}, std::nullopt};
        std::optional<fs::path> gt;
        for (const auto& dir : {labels, images, root})
            if (!gt && !dir.empty())
                gt = find_with_stem(dir, stem + "_1stHO");
        if (!gt)
            missing("ground truth", img);
        e.ground_truth = *gt;
        m.entries.push_back(std::move(e));
    }
    if (m.entries.empty())
        throw Error(ErrorKind::Manifest, "CHASE_DB1 layout not found under " + root.string());
    return m;
}

DatasetManifest load_custom(const fs::path& manifest)
{
    std::ifstream in(manifest);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open manifest " + manifest.string());
    const fs::path base = manifest.parent_path();
    auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
    DatasetManifest m{DatasetName::Custom, {}};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string col;
        while (std::getline(ss, col, '\t'))
            cols.push_back(col);
        if (cols.size() < 2 || cols.size() > 3 || cols[0].empty() || cols[1].empty())
            throw Error(ErrorKind::Manifest,
                        manifest.string() + ":" + std::to_string(lineno) + ": expected image<TAB>truth[<TAB>mask]");
        ManifestEntry e{image_stem(cols[0]), resolve(cols[0]), resolve(cols[1]), std::nullopt};
        if (cols.size() == 3 && !cols[2].empty())
            e.fov_mask = resolve(cols[2]);
        if (!fs::is_regular_file(e.image))
            throw Error(ErrorKind::Manifest, "missing image " + e.image.string());
        if (!fs::is_regular_file(e.ground_truth))
            missing("ground truth", e.image);
        if (e.fov_mask && !fs::is_regular_file(*e.fov_mask))
            missing("FOV mask", e.image);
        m.entries.push_back(std::move(e));
    }
    std::stable_sort(m.entries.begin(), m.entries.end(), [](const ManifestEntry& a, const ManifestEntry& b) {
        return a.image.filename().string() < b.image.filename().string();
    });
    return m;
}

}  // namespace

DatasetName parse_dataset_name(const std::string& text)
{
    const std::string t = lower(text);
    if (t == "drive")
        return DatasetName::Drive;
    if (t == "stare")
        return DatasetName::Stare;
    if (t == "chase_db1" || t == "chasedb1" || t == "chase")
        return DatasetName::ChaseDb1;
    if (t == "custom")
        return DatasetName::Custom;
    throw Error(ErrorKind::Config, "unknown dataset '" + text + "'");
}

RgbImage load_image(const fs::path& path)
{
    if (!fs::exists(path))
        throw Error(ErrorKind::Io, "no such file: " + path.string());
    bool gz = false;
    const std::string ext = image_extension(path, gz);
    const auto& exts = supported_extensions();
    if (std::find(exts.begin(), exts.end(), ext) == exts.end())
        throw Error(ErrorKind::Format, "unsupported image format: " + path.string());
    const std::vector<std::uint8_t> bytes = gz ? read_gzip(path) : read_file(path);
    if (detail::looks_like_gif(bytes))
        return detail::decode_gif(bytes);

    const cv::Mat buf(1, static_cast<int>(bytes.size()), CV_8UC1, const_cast<std::uint8_t*>(bytes.data()));
    const cv::Mat bgr = cv::imdecode(buf, cv::IMREAD_COLOR);
    if (bgr.empty())
        throw Error(ErrorKind::Format, "cannot decode " + path.string());
    RgbImage img(bgr.cols, bgr.rows);
    for (int y = 0; y < bgr.rows; ++y) {
        const auto* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < bgr.cols; ++x)
            img(x, y) = {row[x][2], row[x][1], row[x][0]};
    }
    return img;
}

BinaryMask load_mask(const fs::path& path)
{
    const RgbImage img = load_image(path);
    BinaryMask m(img.width(), img.height(), 0);
    for (std::size_t i = 0; i < img.size(); ++i)
        m[i] = (img[i].r > 127 || img[i].g > 127 || img[i].b > 127) ? 1 : 0;
    return m;
}

GrayImage green_channel(const RgbImage& img)
{
    GrayImage g(img.width(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i)
        g[i] = img[i].g / 255.0;
    return g;
}

DatasetManifest load_dataset(const fs::path& root, DatasetName name)
{
    if (!fs::exists(root))
        throw Error(ErrorKind::Io, "dataset root not found: " + root.string());
    switch (name) {
    case DatasetName::Drive: return load_drive(root);
    case DatasetName::Stare: return load_stare(root);
    case DatasetName::ChaseDb1: return load_chase(root);
    case DatasetName::Custom: return load_custom(root);
    }
    throw Error(ErrorKind::Config, "unknown dataset");
}

BinaryMask fov_mask(const RgbImage& img, const std::optional<BinaryMask>& provided, const FovOptions& opts)
{
    if (provided) {
        require_same_shape(img, *provided, "fov_mask");
        return *provided;
    }
    GrayImage lum(img.width(), img.height());
    double peak = 0.0;
    for (std::size_t i = 0; i < img.size(); ++i) {
        lum[i] = 0.299 * img[i].r + 0.587 * img[i].g + 0.114 * img[i].b;
        peak = std::max(peak, lum[i]);
    }
    const double thr = opts.luminance_fraction * peak;
    BinaryMask bright(img.width(), img.height(), 0);
    for (std::size_t i = 0; i < lum.size(); ++i)
        bright[i] = (peak > 0.0 && lum[i] >= thr) ? 1 : 0;
    BinaryMask fov = largest_component(bright);
    const double coverage = static_cast<double>(count_true(fov)) / static_cast<double>(std::max<std::size_t>(1, fov.size()));
    if (coverage < opts.min_coverage)
        throw Error(ErrorKind::FovEstimation, "estimated field of view covers only " +
                                                  std::to_string(static_cast<int>(coverage * 100)) + "% of the frame");
    return fov;
}

GrayImage extend_outside_fov(const GrayImage& img, const BinaryMask& fov, int rounds)
{
    require_same_shape(img, fov, "extend_outside_fov");
    GrayImage out = img;
    BinaryMask valid = fov;
    const int w = img.width();
    const int h = img.height();
    std::vector<std::pair<std::size_t, double>> ring;
    for (int round = 0; round < rounds; ++round) {
        ring.clear();
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (valid(x, y))
                    continue;
                double sum = 0.0;
                int n = 0;
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx)
                        if (valid.contains(x + dx, y + dy) && valid(x + dx, y + dy)) {
                            sum += out(x + dx, y + dy);
                            ++n;
                        }
                if (n > 0)
                    ring.emplace_back(out.index(x, y), sum / n);
            }
        }
        if (ring.empty())
            break;
        for (auto [i, v] : ring) {
            out[i] = v;
            valid[i] = 1;
        }
    }
    return out;
}

void save_png(const fs::path& path, const Image<std::uint8_t>& gray)
{
    cv::Mat m(gray.height(), gray.width(), CV_8UC1, const_cast<std::uint8_t*>(gray.data().data()));
    if (!cv::imwrite(path.string(), m))
        throw Error(ErrorKind::Io, "cannot write " + path.string());
}

void save_png(const fs::path& path, const RgbImage& rgb)
{
    cv::Mat m(rgb.height(), rgb.width(), CV_8UC3);
    for (int y = 0; y < rgb.height(); ++y) {
        auto* row = m.ptr<cv::Vec3b>(y);
        for (int x = 0; x < rgb.width(); ++x)
            row[x] = {rgb(x, y).b, rgb(x, y).g, rgb(x, y).r};
    }
    if (!cv::imwrite(path.string(), m))
        throw Error(ErrorKind::Io, "cannot write " + path.string());
}

}  // namespace vesselmat
