#pragma once

#include "beltrami/grid.hpp"

#include <string>

namespace qc {

/// Grid file layout: a 4-byte little-endian header length, a JSON header
/// (grid spec, value kind, run-length encoded mask), then the sample
/// payload as little-endian 64-bit floats, row-major over the full lattice,
/// two floats per complex sample. Unmasked samples are stored as zeros.
void write_grid_file(const std::string& path, const RealField& f);
void write_grid_file(const std::string& path, const ComplexField& f);

struct GridFileContents {
    GridSpec grid;
    bool is_complex;
    std::vector<double> real_values;   // filled when !is_complex
    std::vector<cplx> complex_values;  // filled when is_complex
};

GridFileContents read_grid_file(const std::string& path);

RealField read_real_grid_file(const std::string& path);
ComplexField read_complex_grid_file(const std::string& path);

/// Plot-ready CSV: one row per masked sample, "x,y,value" for real fields
/// and "x,y,re,im" for complex ones.
void write_grid_csv(const std::string& path, const RealField& f);
void write_grid_csv(const std::string& path, const ComplexField& f);

}  // namespace qc
