// Copyright nhtd contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef NHTD_ERRORS_HPP
#define NHTD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nhtd {

enum class Errc {
  // netlist front-end
  unknown_cell,
  unbound_wire,
  multiple_drivers,
  syntax_error,
  unknown_instance,
  schema_error,
  duplicate_id,
  // graph / features
  index_out_of_range,
  mode_mismatch,
  stats_missing,
  // sampler / engine
  invalid_m,
  overlapping_sets,
  shape_mismatch,
  nan_gradient,
  empty_dataset,
  insufficient_data,
  empty_grid,
  // generator
  param_out_of_range,
  host_too_small,
  // plumbing
  io_error,
  bad_config,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace nhtd

#endif  // NHTD_ERRORS_HPP
