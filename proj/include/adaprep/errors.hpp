#pragma once

#include <stdexcept>
#include <string>

namespace adaprep {

/// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define ADAPREP_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                      \
    public:                                                          \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    }

ADAPREP_DEFINE_ERROR(DecodeError);
ADAPREP_DEFINE_ERROR(EncodeError);
ADAPREP_DEFINE_ERROR(InvalidDimensions);
ADAPREP_DEFINE_ERROR(EmptyHistogram);
ADAPREP_DEFINE_ERROR(UnalignedDims);
ADAPREP_DEFINE_ERROR(OutOfBounds);
ADAPREP_DEFINE_ERROR(DimensionMismatch);
ADAPREP_DEFINE_ERROR(TooSmall);
ADAPREP_DEFINE_ERROR(EmptyManifest);
ADAPREP_DEFINE_ERROR(AllSkipped);
ADAPREP_DEFINE_ERROR(IoError);
ADAPREP_DEFINE_ERROR(ConfigError);

#undef ADAPREP_DEFINE_ERROR

} // namespace adaprep
