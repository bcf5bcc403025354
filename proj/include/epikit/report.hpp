// SPDX-License-Identifier: MIT
#pragma once

#include <string>

#include "epikit/scenarios.hpp"

namespace epikit {

// Header line of the CSV output, without the trailing newline.
const std::string& csv_header();

// One line per row; numbers at 12 significant digits, infinities as inf/-inf.
std::string to_csv(const SweepResult& result);

// Rows with radii, conditions and ingredients, plus the convergence profiles.
std::string to_json(const SweepResult& result);

// Writes `format` ("csv" or "json") to `path`, or stdout when path is empty
// or "-". Throws std::runtime_error on I/O failure.
void emit_results(const SweepResult& result, const std::string& format, const std::string& path);

}  // namespace epikit
