#pragma once

#include <stdexcept>
#include <string>

namespace coreset {

enum class errc {
  dimension_mismatch,
  invalid_argument,
  k_exceeds_distinct,
  eps_too_large,
  group_zero_cost,
  not_outer_group,
  zero_cost_denominator,
  unknown_center,
  io_missing_file,
  io_malformed_header,
  io_bad_value,
  io_negative_weight,
  io_malformed_record,
};

const char* errc_name(errc c);

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace coreset
