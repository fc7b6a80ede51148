#include "vesselmat/error.hpp"

namespace vesselmat {

const char* to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Io: return "io";
    case ErrorKind::Format: return "format";
    case ErrorKind::Manifest: return "manifest";
    case ErrorKind::FovEstimation: return "fov-estimation";
    case ErrorKind::Config: return "config";
    case ErrorKind::Level: return "level";
    case ErrorKind::Lookup: return "lookup";
    case ErrorKind::Stratification: return "stratification";
    case ErrorKind::Shape: return "shape";
    }
    return "unknown";
}

}  // namespace vesselmat
