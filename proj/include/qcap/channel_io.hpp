#pragma once

#include <string>

#include "qcap/channels.hpp"
#include "qcap/measurement.hpp"

namespace qcap::channels {

// Channel document: JSON object with fields `name` (string), `d_in`, `d_out`
// (integers) and `kraus` (array of matrices; a matrix is an array of rows; a
// row is an array of complex entries; a complex entry is a two-element array
// [re, im]). Measurement documents use `dim` and `povm_kraus` with the same
// matrix encoding.
//
// Readers throw IoError for missing files, ParseError (with location context)
// for malformed documents, and ValidationError when the operators fail their
// completeness checks. Writers serialize doubles at round-trip precision.
QuantumChannel read_channel(const std::string& path);
void write_channel(const QuantumChannel& T, const std::string& path);

measures::MeasurementKrausSet read_measurement(const std::string& path);
void write_measurement(const measures::MeasurementKrausSet& m, const std::string& path);

}  // namespace qcap::channels
