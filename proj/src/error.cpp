#include "segfuse/error.hpp"

namespace segfuse {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::bad_magic: return "BadMagic";
    case ErrorCode::truncated_data: return "TruncatedData";
    case ErrorCode::maxval_unsupported: return "MaxvalUnsupported";
    case ErrorCode::dangling_image_ref: return "DanglingImageRef";
    case ErrorCode::length_mismatch: return "LengthMismatch";
    case ErrorCode::negative_count: return "NegativeCount";
    case ErrorCode::noncanonical_rle: return "NonCanonicalRle";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::empty_mask: return "EmptyMask";
    case ErrorCode::empty_visible_mask: return "EmptyVisibleMask";
    case ErrorCode::zero_images: return "ZeroImages";
    case ErrorCode::empty_table: return "EmptyTable";
    case ErrorCode::window_larger_than_image: return "WindowLargerThanImage";
    case ErrorCode::placement_failure: return "PlacementFailure";
    case ErrorCode::invalid_config: return "InvalidConfig";
    case ErrorCode::separation_too_small: return "SeparationTooSmall";
    case ErrorCode::scorer_failure: return "ScorerFailure";
    case ErrorCode::io_failure: return "IoFailure";
  }
  return "Error";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse_error:
    case ErrorCode::bad_magic:
    case ErrorCode::truncated_data:
    case ErrorCode::maxval_unsupported:
      return 2;
    case ErrorCode::dangling_image_ref:
    case ErrorCode::length_mismatch:
    case ErrorCode::negative_count:
    case ErrorCode::noncanonical_rle:
    case ErrorCode::dimension_mismatch:
    case ErrorCode::empty_mask:
    case ErrorCode::empty_visible_mask:
    case ErrorCode::zero_images:
    case ErrorCode::empty_table:
    case ErrorCode::window_larger_than_image:
    case ErrorCode::placement_failure:
    case ErrorCode::invalid_config:
    case ErrorCode::separation_too_small:
      return 3;
    case ErrorCode::scorer_failure:
      return 4;
    case ErrorCode::io_failure:
      return 1;
  }
  return 1;
}

}  // namespace segfuse
