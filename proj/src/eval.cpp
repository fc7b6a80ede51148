#include "vesselmat/eval.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "vesselmat/pipeline.hpp"

namespace vesselmat {

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt, const BinaryMask& roi)
{
    require_same_shape(pred, gt, "confusion");
    require_same_shape(pred, roi, "confusion");
    ConfusionCounts c;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (!roi[i])
            continue;
        const bool p = pred[i] != 0;
        const bool g = gt[i] != 0;
        if (p && g)
            ++c.tp;
        else if (p)
            ++c.fp;
        else if (g)
            ++c.fn;
        else
            ++c.tn;
    }
    return c;
}

MetricsRecord metrics(const ConfusionCounts& c)
{
    MetricsRecord m;
    m.counts = c;
    auto ratio = [](std::uint64_t num, std::uint64_t den) -> std::optional<double> {
        if (den == 0)
            return std::nullopt;
        return static_cast<double>(num) / static_cast<double>(den);
    };
    m.se = ratio(c.tp, c.tp + c.fn);
    m.sp = ratio(c.tn, c.tn + c.fp);
    m.acc = ratio(c.tp + c.tn, c.total());
    if (m.se && m.sp)
        m.auc = (*m.se + *m.sp) / 2.0;
    return m;
}

MetricsRecord mean_metrics(const std::vector<MetricsRecord>& records)
{
    MetricsRecord mean;
    mean.id = "mean";
    auto average = [&](std::optional<double> MetricsRecord::*field) -> std::optional<double> {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& r : records)
            if (r.*field) {
                sum += *(r.*field);
                ++n;
            }
        if (n == 0)
            return std::nullopt;
        return sum / static_cast<double>(n);
    };
    for (const auto& r : records) {
        mean.counts.tp += r.counts.tp;
        mean.counts.fp += r.counts.fp;
        mean.counts.fn += r.counts.fn;
        mean.counts.tn += r.counts.tn;
        mean.seconds += r.seconds;
    }
    if (!records.empty())
        mean.seconds /= static_cast<double>(records.size());
    mean.se = average(&MetricsRecord::se);
    mean.sp = average(&MetricsRecord::sp);
    mean.acc = average(&MetricsRecord::acc);
    mean.auc = average(&MetricsRecord::auc);
    return mean;
}

DatasetReport evaluate_dataset(const DatasetManifest& manifest, const PipelineConfig& cfg, const EvalOptions& opts)
{
    cfg.validate();
    const auto n = static_cast<std::ptrdiff_t>(manifest.entries.size());
    std::vector<std::optional<MetricsRecord>> records(manifest.entries.size());
    std::vector<std::string> errors(manifest.entries.size());

#pragma omp parallel for schedule(dynamic, 1) num_threads(opts.jobs > 0 ? opts.jobs : 1) if (opts.jobs > 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto& entry = manifest.entries[static_cast<std::size_t>(i)];
        try {
            const RgbImage img = load_image(entry.image);
            std::optional<BinaryMask> fov;
            if (entry.fov_mask)
                fov = load_mask(*entry.fov_mask);
            const BinaryMask gt = load_mask(entry.ground_truth);
            require_same_shape(img, gt, entry.id.c_str());
            const PipelineResult res = run_pipeline(img, fov, cfg);
            const BinaryMask roi = cfg.full_frame ? BinaryMask(img.width(), img.height(), 1) : res.fov;
            MetricsRecord rec = metrics(confusion(res.mask, gt, roi));
            rec.id = entry.id;
            rec.seconds = res.seconds;
            if (opts.on_image) {
#pragma omp critical(vesselmat_on_image)
                opts.on_image(entry, res.mask, gt);
            }
            records[static_cast<std::size_t>(i)] = std::move(rec);
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(i)] = e.what();
        }
    }

    DatasetReport report;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i])
            report.records.push_back(std::move(*records[i]));
        else
            report.failures.push_back({manifest.entries[i].id, errors[i]});
    }
    report.mean = mean_metrics(report.records);
    return report;
}

const char* to_string(SweepParam p)
{
    switch (p) {
    case SweepParam::E1: return "e1";
    case SweepParam::E2: return "e2";
    case SweepParam::R: return "r";
    case SweepParam::S: return "s";
    }
    return "e1";
}

SweepParam parse_sweep_param(const std::string& text)
{
    if (text == "e1")
        return SweepParam::E1;
    if (text == "e2")
        return SweepParam::E2;
    if (text == "r")
        return SweepParam::R;
    if (text == "s")
        return SweepParam::S;
    throw Error(ErrorKind::Config, "unknown sweep parameter '" + text + "' (expected e1, e2, r or s)");
}

std::vector<double> parse_range(const std::string& text)
{
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size() || !std::isfinite(v))
            throw Error(ErrorKind::Config, "bad range '" + text + "'");
        return v;
    };
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    if (text.find(':') == std::string::npos) {
        std::vector<double> out;
        while (std::getline(ss, item, ','))
            out.push_back(number(item));
        if (out.empty())
            throw Error(ErrorKind::Config, "empty range");
        return out;
    }
    while (std::getline(ss, item, ':'))
        parts.push_back(item);
    if (parts.size() != 3)
        throw Error(ErrorKind::Config, "range must be start:stop:step, got '" + text + "'");
    const double start = number(parts[0]);
    const double stop = number(parts[1]);
    const double step = number(parts[2]);
    if (!(step > 0.0) || stop < start)
        throw Error(ErrorKind::Config, "range needs step > 0 and stop >= start");
    const double span = (stop - start) / step;
    const auto count = static_cast<long>(std::floor(span + 1e-9)) + 1;
    if (count > 100000)
        throw Error(ErrorKind::Config, "range has too many points");
    std::vector<double> out;
    for (long k = 0; k < count; ++k)
        out.push_back(std::round((start + static_cast<double>(k) * step) * 1e12) / 1e12);
    return out;
}

std::vector<SweepRow> sweep(const DatasetManifest& manifest, SweepParam param, const std::vector<double>& values,
                            const PipelineConfig& base, int jobs)
{
    std::vector<SweepRow> rows;
    for (double v : values) {
        SweepRow row;
        row.value = v;
        PipelineConfig cfg = base;
        switch (param) {
        case SweepParam::E1: cfg.e1 = v; break;
        case SweepParam::E2: cfg.e2 = v; break;
        case SweepParam::R: cfg.r = v; break;
        case SweepParam::S: cfg.s = v; break;
        }
        try {
            EvalOptions opts;
            opts.jobs = jobs;
            const DatasetReport rep = evaluate_dataset(manifest, cfg, opts);
            row.mean_acc = rep.mean.acc;
            row.images = rep.records.size();
            row.failures = rep.failures.size();
        } catch (const Error&) {
            row.failures = manifest.entries.size();
        }
        rows.push_back(row);
    }
    return rows;
}

namespace {

std::string fmt_ratio(const std::optional<double>& v)
{
    if (!v)
        return "NA";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", *v);
    return buf;
}

std::string fmt_seconds(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

void write_row(std::ostream& os, const MetricsRecord& r, bool timing)
{
    os << r.id << ',' << r.counts.tp << ',' << r.counts.fp << ',' << r.counts.fn << ',' << r.counts.tn << ','
       << fmt_ratio(r.se) << ',' << fmt_ratio(r.sp) << ',' << fmt_ratio(r.acc) << ',' << fmt_ratio(r.auc) << ','
       << (timing ? fmt_seconds(r.seconds) : std::string("NA")) << '\n';
}

}  // namespace

void write_metrics_csv(std::ostream& os, const std::vector<MetricsRecord>& records, const MetricsRecord& mean,
                       bool include_timing)
{
    os << "image_id,tp,fp,fn,tn,se,sp,acc,auc,seconds\n";
    for (const auto& r : records)
        write_row(os, r, include_timing);
    write_row(os, mean, include_timing);
}

void write_sweep_csv(std::ostream& os, SweepParam param, const std::vector<SweepRow>& rows)
{
    os << "param,value,mean_acc,images,failures\n";
    for (const auto& r : rows) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6g", r.value);
        os << to_string(param) << ',' << buf << ',' << fmt_ratio(r.mean_acc) << ',' << r.images << ','
           << r.failures << '\n';
    }
}

}  // namespace vesselmat
