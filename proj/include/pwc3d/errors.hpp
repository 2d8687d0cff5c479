// errors.hpp - typed exception hierarchy used across the library
#pragma once

#include <stdexcept>
#include <string>

namespace pwc3d {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define PWC3D_DEFINE_ERROR(name)                                   \
    struct name : Error {                                          \
        explicit name(const std::string& msg) : Error(msg) {}      \
    }

PWC3D_DEFINE_ERROR(InvalidInput);
PWC3D_DEFINE_ERROR(WrongTopology);
PWC3D_DEFINE_ERROR(UnsupportedTopology);
PWC3D_DEFINE_ERROR(DegenerateLineFit);
PWC3D_DEFINE_ERROR(AmbiguousDirection);
PWC3D_DEFINE_ERROR(ProjectionDegenerate);
PWC3D_DEFINE_ERROR(TriangulationDegenerate);
PWC3D_DEFINE_ERROR(NumericalFailure);
PWC3D_DEFINE_ERROR(DegenerateRegistration);
PWC3D_DEFINE_ERROR(DegenerateMetric);
PWC3D_DEFINE_ERROR(FrustumViolation);
PWC3D_DEFINE_ERROR(TooLarge);
PWC3D_DEFINE_ERROR(IoError);
PWC3D_DEFINE_ERROR(ConfigError);

#undef PWC3D_DEFINE_ERROR

}  // namespace pwc3d
