#pragma once

#include <stdexcept>
#include <string>

namespace modloc {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define MODLOC_ERROR(Name)                                              \
    class Name : public Error {                                         \
    public:                                                             \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    }

MODLOC_ERROR(EmptyRegion);
MODLOC_ERROR(GridMismatch);
MODLOC_ERROR(SingularityInStrip);
MODLOC_ERROR(UnsupportedTransform);
MODLOC_ERROR(OffGridBoost);
MODLOC_ERROR(NotInDomain);
MODLOC_ERROR(InsufficientSampling);
MODLOC_ERROR(UnsupportedDensity);
MODLOC_ERROR(ZeroFunction);
MODLOC_ERROR(IndexOutOfRange);
MODLOC_ERROR(BoundaryDecay);
MODLOC_ERROR(ConfigError);

#undef MODLOC_ERROR

}  // namespace modloc
