#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vesselmat/config.hpp"
#include "vesselmat/image.hpp"
#include "vesselmat/imgio.hpp"

namespace vesselmat {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;

    std::uint64_t total() const { return tp + fp + fn + tn; }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Ratios are empty when their denominator is zero.
struct MetricsRecord {
    std::string id;
    ConfusionCounts counts;
    std::optional<double> se;
    std::optional<double> sp;
    std::optional<double> acc;
    std::optional<double> auc;
    double seconds = 0.0;
};

/// Counts over pixels where roi is true. Throws Error(Shape) on mismatched sizes.
ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt, const BinaryMask& roi);

MetricsRecord metrics(const ConfusionCounts& counts);

/// Mean of per-image ratios (records with an undefined ratio are skipped for
/// that ratio); counts and seconds are summed and averaged respectively.
MetricsRecord mean_metrics(const std::vector<MetricsRecord>& records);

struct ImageFailure {
    std::string id;
    std::string message;
};

struct DatasetReport {
    std::vector<MetricsRecord> records;  // manifest order
    std::vector<ImageFailure> failures;
    MetricsRecord mean;
};

struct EvalOptions {
    int jobs = 1;
    /// Called with each finished image's pipeline mask; may be empty.
    std::function<void(const ManifestEntry&, const BinaryMask& mask, const BinaryMask& gt)> on_image;
};

/// Runs the pipeline on every entry and scores it against the ground truth, in
/// the FOV unless cfg.full_frame. Failures are recorded and skipped.
DatasetReport evaluate_dataset(const DatasetManifest& manifest, const PipelineConfig& cfg,
                               const EvalOptions& opts = {});

enum class SweepParam { E1, E2, R, S };

const char* to_string(SweepParam p);
SweepParam parse_sweep_param(const std::string& text);

/// `start:stop:step`, inclusive of stop when step divides the span.
std::vector<double> parse_range(const std::string& text);

struct SweepRow {
    double value = 0.0;
    std::optional<double> mean_acc;
    std::size_t images = 0;
    std::size_t failures = 0;
};

/// Reruns the dataset evaluation once per value with the other thresholds fixed.
std::vector<SweepRow> sweep(const DatasetManifest& manifest, SweepParam param, const std::vector<double>& values,
                            const PipelineConfig& base, int jobs = 1);

/// Columns: image_id,tp,fp,fn,tn,se,sp,acc,auc,seconds; the last row is "mean".
/// Without timing the seconds column is NA, so repeated runs write identical bytes.
void write_metrics_csv(std::ostream& os, const std::vector<MetricsRecord>& records, const MetricsRecord& mean,
                       bool include_timing = true);
/// Columns: param,value,mean_acc,images,failures.
void write_sweep_csv(std::ostream& os, SweepParam param, const std::vector<SweepRow>& rows);

}  // namespace vesselmat
