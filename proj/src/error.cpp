#include "hauteur/error.hpp"

namespace hauteur {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DegenerateInput: return "degenerate_input";
    case ErrorCode::Nonconvergence: return "nonconvergence";
    case ErrorCode::NotEllipticSurface: return "not_elliptic_surface";
    case ErrorCode::SingularCurve: return "singular_curve";
    case ErrorCode::NeedsModelChange: return "needs_model_change";
    case ErrorCode::Precision: return "precision";
    case ErrorCode::UndefinedAtOrigin: return "undefined_at_origin";
    case ErrorCode::InsufficientDepth: return "insufficient_depth";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::NormalizeFirst: return "normalize_first";
    case ErrorCode::Pole: return "pole";
    case ErrorCode::Resource: return "resource";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::OffCurve: return "off_curve";
    case ErrorCode::SpecMismatch: return "spec_mismatch";
    case ErrorCode::Io: return "io";
    case ErrorCode::Usage: return "usage";
  }
  return "unknown";
}

}  // namespace hauteur
