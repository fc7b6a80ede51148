#include "vesselmat/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace vesselmat {

const char* to_string(FovMode mode)
{
    switch (mode) {
    case FovMode::Auto: return "auto";
    case FovMode::Estimate: return "estimate";
    case FovMode::Full: return "full";
    }
    return "auto";
}

FovMode parse_fov_mode(const std::string& text)
{
    if (text == "auto")
        return FovMode::Auto;
    if (text == "estimate")
        return FovMode::Estimate;
    if (text == "full")
        return FovMode::Full;
    throw Error(ErrorKind::Config, "unknown fov mode '" + text + "'");
}

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value)
{
    throw Error(ErrorKind::Config, "invalid value '" + value + "' for " + key);
}

double to_double(const std::string& key, const std::string& value)
{
    double v = 0.0;
    const auto* end = value.data() + value.size();
    const auto res = std::from_chars(value.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(v))
        bad_value(key, value);
    return v;
}

int to_int(const std::string& key, const std::string& value)
{
    int v = 0;
    const auto* end = value.data() + value.size();
    const auto res = std::from_chars(value.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end)
        bad_value(key, value);
    return v;
}

bool to_bool(const std::string& key, const std::string& value)
{
    if (value == "true" || value == "1" || value == "yes" || value == "on")
        return true;
    if (value == "false" || value == "0" || value == "no" || value == "off")
        return false;
    bad_value(key, value);
}

template <class T, class F>
std::vector<T> to_list(const std::string& key, const std::string& value, F&& parse)
{
    std::vector<T> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse(key, trim(item)));
    if (out.empty())
        bad_value(key, value);
    return out;
}

std::string fmt(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

template <class T>
std::string fmt_list(const std::vector<T>& xs)
{
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i)
            out += ',';
        if constexpr (std::is_floating_point_v<T>)
            out += fmt(xs[i]);
        else
            out += std::to_string(xs[i]);
    }
    return out;
}

const char* fmt(bool b) { return b ? "true" : "false"; }

}  // namespace

void set_config_value(PipelineConfig& c, const std::string& key, const std::string& raw)
{
    const std::string v = trim(raw);
    if (key == "e1") c.e1 = to_double(key, v);
    else if (key == "e2") c.e2 = to_double(key, v);
    else if (key == "r") c.r = to_double(key, v);
    else if (key == "s") c.s = to_double(key, v);
    else if (key == "d") c.d = to_double(key, v);
    else if (key == "angles") c.angles = to_list<double>(key, v, to_double);
    else if (key == "se_length") c.se_length = to_int(key, v);
    else if (key == "p1") c.p1 = to_double(key, v);
    else if (key == "p2") c.p2 = to_double(key, v);
    else if (key == "epsilon") c.epsilon = to_double(key, v);
    else if (key == "iuwt_scales") c.iuwt_scales = to_list<int>(key, v, to_int);
    else if (key == "iuwt_levels") c.iuwt_levels = to_int(key, v);
    else if (key == "iuwt_residual") c.iuwt_residual = to_bool(key, v);
    else if (key == "omega") c.omega = to_double(key, v);
    else if (key == "window") c.window = to_int(key, v);
    else if (key == "metric") c.metric = parse_distance_metric(v);
    else if (key == "schedule") {
        if (v == "synchronous") c.schedule = UpdateSchedule::Synchronous;
        else if (v == "gauss-seidel") c.schedule = UpdateSchedule::GaussSeidel;
        else bad_value(key, v);
    }
    else if (key == "fov_mode") c.fov_mode = parse_fov_mode(v);
    else if (key == "fov_fraction") c.fov_fraction = to_double(key, v);
    else if (key == "fov_extend_rounds") c.fov_extend_rounds = to_int(key, v);
    else if (key == "full_frame") c.full_frame = to_bool(key, v);
    else if (key == "postprocess") c.postprocess = to_bool(key, v);
    else if (key == "skeleton") c.skeleton = to_bool(key, v);
    else if (key == "trimap_only") c.trimap_only = to_bool(key, v);
    else throw Error(ErrorKind::Config, "unknown config key '" + key + "'");
}

PipelineConfig parse_config(const std::string& text, PipelineConfig base)
{
    std::stringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.resize(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::Config, "config line " + std::to_string(lineno) + ": expected key = value");
        set_config_value(base, trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    base.validate();
    return base;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

std::string dump_config(const PipelineConfig& c)
{
    std::ostringstream os;
    os << "e1 = " << fmt(c.e1) << '\n'
       << "e2 = " << fmt(c.e2) << '\n'
       << "r = " << fmt(c.r) << '\n'
       << "s = " << fmt(c.s) << '\n'
       << "d = " << fmt(c.d) << '\n'
       << "angles = " << fmt_list(c.angles) << '\n'
       << "se_length = " << c.se_length << '\n'
       << "p1 = " << fmt(c.p1) << '\n'
       << "p2 = " << fmt(c.p2) << '\n'
       << "epsilon = " << fmt(c.epsilon) << '\n'
       << "iuwt_scales = " << fmt_list(c.iuwt_scales) << '\n'
       << "iuwt_levels = " << c.iuwt_levels << '\n'
       << "iuwt_residual = " << fmt(c.iuwt_residual) << '\n'
       << "omega = " << fmt(c.omega) << '\n'
       << "window = " << c.window << '\n'
       << "metric = " << to_string(c.metric) << '\n'
       << "schedule = " << (c.schedule == UpdateSchedule::Synchronous ? "synchronous" : "gauss-seidel") << '\n'
       << "fov_mode = " << to_string(c.fov_mode) << '\n'
       << "fov_fraction = " << fmt(c.fov_fraction) << '\n'
       << "fov_extend_rounds = " << c.fov_extend_rounds << '\n'
       << "full_frame = " << fmt(c.full_frame) << '\n'
       << "postprocess = " << fmt(c.postprocess) << '\n'
       << "skeleton = " << fmt(c.skeleton) << '\n'
       << "trimap_only = " << fmt(c.trimap_only) << '\n';
    return os.str();
}

void PipelineConfig::validate() const
{
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::Config, msg); };
    for (double v : {e1, e2, s})
        if (!(v > 0.0 && v < 1.0))
            fail("e1, e2 and s must lie in (0,1)");
    if (!(r >= 1.0))
        fail("r must be >= 1 (VRatio is at least 1)");
    if (!(d > 0.0))
        fail("d must be positive");
    if (angles.empty())
        fail("angle set is empty");
    if (se_length < 1)
        fail("se_length must be >= 1");
    if (!(p1 > 0.0 && p1 < p2 && p2 <= 1.0))
        fail("require 0 < p1 < p2 <= 1");
    if (!(epsilon >= 0.0 && epsilon < 1.0))
        fail("epsilon must lie in [0,1)");
    if (iuwt_levels < 1)
        fail("iuwt_levels must be >= 1");
    if (iuwt_scales.empty())
        fail("iuwt_scales is empty");
    for (int sc : iuwt_scales)
        if (sc < 1 || sc > iuwt_levels)
            fail("iuwt scale " + std::to_string(sc) + " outside 1..iuwt_levels");
    if (!(omega >= 0.0))
        fail("omega must be >= 0");
    if (window < 3 || window % 2 == 0)
        fail("window must be odd and >= 3");
    if (!(fov_fraction > 0.0 && fov_fraction < 1.0))
        fail("fov_fraction must lie in (0,1)");
    if (fov_extend_rounds < 0)
        fail("fov_extend_rounds must be >= 0");
}

FeatureThresholds PipelineConfig::thresholds(int height, int width) const
{
    const InternalFactor f = internal_factor(height, width, d);
    return FeatureThresholds{e1, e2, r, s, f.a1, f.a2};
}

}  // namespace vesselmat
