#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace crtc {

// All pipeline failures carry a stable machine-readable code next to the
// human-readable message; the CLI maps codes to exit diagnostics.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

#define CRTC_DEFINE_ERROR(NAME)                                              \
    struct NAME : Error {                                                     \
        explicit NAME(const std::string& what) : Error(#NAME, what) {}        \
    }

CRTC_DEFINE_ERROR(NonConvergence);
CRTC_DEFINE_ERROR(TripleIntersection);
CRTC_DEFINE_ERROR(DegenerateComponents);
CRTC_DEFINE_ERROR(ZeroDegree);
CRTC_DEFINE_ERROR(TraceAmbiguity);
CRTC_DEFINE_ERROR(InconsistentEmbedding);
CRTC_DEFINE_ERROR(NotMergeable);
CRTC_DEFINE_ERROR(NoSameColorPair);
CRTC_DEFINE_ERROR(SizeGuard);
CRTC_DEFINE_ERROR(ParseError);
CRTC_DEFINE_ERROR(ValidationError);
CRTC_DEFINE_ERROR(ProjectionClash);

#undef CRTC_DEFINE_ERROR

}  // namespace crtc
