#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "selfdual/domain.hpp"

namespace selfdual {

// Domain spec JSON: {"kind": "interval"|"box"|"symmetric-square"|"symmetric-ball",
//                    "bounds": ..., "cells": ...}
//   interval          bounds [a, b],                  cells n
//   box               bounds [[a0, b0], [a1, b1], ...], cells [n0, n1, ...]
//   symmetric-square  bounds h (grid on [-h, h]^2),   cells n per axis
//   symmetric-ball    bounds r,                       cells n per axis
// Unknown keys are rejected with InputError.
GridSpec grid_spec_from_json(const nlohmann::json& j);
nlohmann::json grid_spec_to_json(const GridSpec& spec);
GridSpec read_grid_spec(const std::string& path);

// Field CSV: header x0,...,x{d-1},u0,...,u{d-1}; one row per cell in domain
// order. Row points must coincide with the domain points (to 1e-9).
SampledField read_field_csv(std::istream& in, const DiscreteDomain& dom);
SampledField read_field_csv(const std::string& path, const DiscreteDomain& dom);
void write_field_csv(std::ostream& out, const DiscreteDomain& dom, const SampledField& field);

// Sigma file: either a bare JSON array of indices or {"sigma": [...]}.
Permutation read_permutation(const std::string& path);
// Kernel file: {"n": N, "upper": [...]} (strict upper triangle, row-major) or
// {"K": [[...], ...]} (full matrix; its anti-symmetric part is used).
AntiSymmetricKernel read_kernel(const std::string& path);
nlohmann::json kernel_to_json(const AntiSymmetricKernel& K);
AntiSymmetricKernel kernel_from_json(const nlohmann::json& j);

// Whole-file helpers that map failures to IoError.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace selfdual
