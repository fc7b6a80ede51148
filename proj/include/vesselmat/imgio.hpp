#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vesselmat/image.hpp"

namespace vesselmat {

enum class DatasetName { Drive, Stare, ChaseDb1, Custom };

const char* to_string(DatasetName name);
DatasetName parse_dataset_name(const std::string& text);

struct ManifestEntry {
    std::string id;
    std::filesystem::path image;
    std::filesystem::path ground_truth;
    std::optional<std::filesystem::path> fov_mask;
};

struct DatasetManifest {
    DatasetName name = DatasetName::Custom;
    std::vector<ManifestEntry> entries;
};

/// Decodes PNG, PPM/PGM, JPEG, TIFF or GIF. A trailing ".gz" is inflated first.
RgbImage load_image(const std::filesystem::path& path);

/// Any channel above 127 marks the pixel true.
BinaryMask load_mask(const std::filesystem::path& path);

/// g/255 per pixel.
GrayImage green_channel(const RgbImage& img);

/// Resolves the published layout of DRIVE (test split), STARE or CHASE_DB1 under
/// `root`. For Custom, `root` is a manifest file with tab-separated
/// image / ground-truth / optional mask paths, relative to the file's directory.
/// Entries are ordered lexicographically by image filename.
DatasetManifest load_dataset(const std::filesystem::path& root, DatasetName name);

struct FovOptions {
    double luminance_fraction = 0.08;
    double min_coverage = 0.10;
};

/// Returns `provided` unchanged when present. Otherwise thresholds luminance at
/// a fraction of its maximum and keeps the largest 8-connected component.
BinaryMask fov_mask(const RgbImage& img, const std::optional<BinaryMask>& provided = std::nullopt,
                    const FovOptions& opts = {});

/// Grows `img` outward from `fov` by `rounds` rings; each new pixel takes the mean
/// of its already-valid 8-neighbours. Pixels inside `fov` are untouched.
GrayImage extend_outside_fov(const GrayImage& img, const BinaryMask& fov, int rounds);

void save_png(const std::filesystem::path& path, const Image<std::uint8_t>& gray);
void save_png(const std::filesystem::path& path, const RgbImage& rgb);

}  // namespace vesselmat
