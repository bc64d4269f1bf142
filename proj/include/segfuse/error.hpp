#pragma once

#include <stdexcept>
#include <string>

namespace segfuse {

// Every failure the library can raise, grouped by how the CLI reports it:
// malformed input files, violated data invariants, or a failing external
// scorer process.
enum class ErrorCode {
  // malformed input files
  parse_error,
  bad_magic,
  truncated_data,
  maxval_unsupported,

  // data invariant violations
  dangling_image_ref,
  length_mismatch,
  negative_count,
  noncanonical_rle,
  dimension_mismatch,
  empty_mask,
  empty_visible_mask,
  zero_images,
  empty_table,
  window_larger_than_image,
  placement_failure,
  invalid_config,
  separation_too_small,

  // external scorer
  scorer_failure,

  // operating system level I/O
  io_failure,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

const char* error_code_name(ErrorCode code);

// Process exit code the CLI uses for a given failure:
// 2 for malformed inputs, 3 for invariant violations, 4 for scorer
// failures, 1 for anything else.
int exit_code_for(ErrorCode code);

}  // namespace segfuse
