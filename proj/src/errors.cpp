// Copyright nhtd contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "nhtd/errors.hpp"

namespace nhtd {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::unknown_cell: return "UnknownCell";
    case Errc::unbound_wire: return "UnboundWire";
    case Errc::multiple_drivers: return "MultipleDrivers";
    case Errc::syntax_error: return "SyntaxError";
    case Errc::unknown_instance: return "UnknownInstance";
    case Errc::schema_error: return "SchemaError";
    case Errc::duplicate_id: return "DuplicateId";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::mode_mismatch: return "ModeMismatch";
    case Errc::stats_missing: return "StatsMissing";
    case Errc::invalid_m: return "InvalidM";
    case Errc::overlapping_sets: return "OverlappingSets";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::nan_gradient: return "NaNGradient";
    case Errc::empty_dataset: return "EmptyDataset";
    case Errc::insufficient_data: return "InsufficientData";
    case Errc::empty_grid: return "EmptyGrid";
    case Errc::param_out_of_range: return "ParamOutOfRange";
    case Errc::host_too_small: return "HostTooSmall";
    case Errc::io_error: return "IoError";
    case Errc::bad_config: return "BadConfig";
  }
  return "Error";
}

}  // namespace nhtd
